#include "cbd/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace cbd::lp {

SimplexOptions SimplexOptions::tight() {
  SimplexOptions o;
  o.pivot_tolerance = 1e-11;
  o.optimality_tolerance = 1e-11;
  o.primal_tolerance = 1e-12;
  o.refactor_interval = 10;
  return o;
}

namespace {

// Number of consecutive degenerate pivots before switching to Bland's rule.
constexpr std::size_t kDegenerateStreak = 30;

class Phase1 {
 public:
  Phase1(const ColumnMatrix& a, std::span<const double> b,
         const SimplexOptions& opt)
      : a_(a), opt_(opt), m_(a.rows()), n_(a.cols()), sign_(m_, 1.0),
        b_(b.begin(), b.end()), basis_(m_), in_basis_(n_, 0),
        binv_(m_ * m_, 0.0), xb_(m_), y_(m_), w_(m_), col_(m_) {
    for (std::size_t i = 0; i < m_; ++i) {
      if (b_[i] < 0.0) {
        sign_[i] = -1.0;
        b_[i] = -b_[i];
      }
      basis_[i] = n_ + i;
      binv_[i * m_ + i] = 1.0;
      xb_[i] = b_[i];
    }
  }

  Phase1Result run() {
    Phase1Result result;
    const std::size_t limit =
        opt_.max_iterations ? opt_.max_iterations
                            : std::max<std::size_t>(10000, 100 * m_);
    std::size_t degenerate = 0;
    std::size_t since_refactor = 0;
    bool fresh = true;

    for (std::size_t iter = 0;; ++iter) {
      if (iter >= limit) {
        result.status = SolveStatus::IterationLimit;
        return finish(result, iter);
      }
      if (since_refactor >= opt_.refactor_interval) {
        if (!refactor()) return finish(result, iter);
        since_refactor = 0;
        fresh = true;
      }

      compute_duals();
      const bool bland = degenerate >= kDegenerateStreak;
      const auto entering = price(bland);
      if (!entering) {
        result.status = SolveStatus::Optimal;
        return finish(result, iter);
      }

      load_column(*entering);
      for (std::size_t i = 0; i < m_; ++i) {
        double s = 0.0;
        const double* row = &binv_[i * m_];
        for (std::size_t k = 0; k < m_; ++k) s += row[k] * col_[k];
        w_[i] = s;
      }

      const auto leaving = ratio_test(bland);
      if (!leaving) {
        // Phase 1 is bounded below, so an unblocked ray means the basis
        // inverse has drifted. Refactor once before giving up.
        if (fresh) return finish(result, iter);
        if (!refactor()) return finish(result, iter);
        since_refactor = 0;
        fresh = true;
        continue;
      }

      const std::size_t r = *leaving;
      const double theta = std::max(0.0, xb_[r] / w_[r]);
      pivot(r, *entering, theta);
      ++since_refactor;
      fresh = false;
      degenerate = theta <= opt_.primal_tolerance ? degenerate + 1 : 0;
    }
  }

 private:
  bool is_artificial(std::size_t var) const { return var >= n_; }

  void load_column(std::size_t var) {
    std::fill(col_.begin(), col_.end(), 0.0);
    if (is_artificial(var)) {
      col_[var - n_] = 1.0;
      return;
    }
    a_.add_column(var, 1.0, col_);
    for (std::size_t k = 0; k < m_; ++k) col_[k] *= sign_[k];
  }

  void compute_duals() {
    std::fill(y_.begin(), y_.end(), 0.0);
    for (std::size_t i = 0; i < m_; ++i) {
      if (!is_artificial(basis_[i])) continue;
      const double* row = &binv_[i * m_];
      for (std::size_t k = 0; k < m_; ++k) y_[k] += row[k];
    }
    // Fold the row signs in so dot_column sees the original matrix.
    for (std::size_t k = 0; k < m_; ++k) y_[k] *= sign_[k];
  }

  // Reduced cost of structural column j in the phase-1 objective.
  double reduced_cost(std::size_t j) const { return -a_.dot_column(j, y_); }

  std::optional<std::size_t> price(bool bland) const {
    std::optional<std::size_t> best;
    double best_cost = -opt_.optimality_tolerance;
    for (std::size_t j = 0; j < n_; ++j) {
      if (in_basis_[j]) continue;
      const double d = reduced_cost(j);
      if (d < best_cost) {
        best = j;
        best_cost = d;
        if (bland) break;
      }
    }
    return best;
  }

  std::optional<std::size_t> ratio_test(bool bland) const {
    const double piv = opt_.pivot_tolerance;
    std::optional<std::size_t> leave;
    if (bland) {
      double best = 0.0;
      for (std::size_t i = 0; i < m_; ++i) {
        if (w_[i] <= piv) continue;
        const double ratio = std::max(0.0, xb_[i]) / w_[i];
        if (!leave || ratio < best - 1e-15 ||
            (ratio <= best + 1e-15 && basis_[i] < basis_[*leave])) {
          leave = i;
          best = ratio;
        }
      }
      return leave;
    }

    double bound = INFINITY;
    for (std::size_t i = 0; i < m_; ++i) {
      if (w_[i] > piv) {
        bound = std::min(bound, (xb_[i] + opt_.primal_tolerance) / w_[i]);
      }
    }
    if (!std::isfinite(bound)) return std::nullopt;
    double best_w = 0.0;
    bool best_art = false;
    for (std::size_t i = 0; i < m_; ++i) {
      if (w_[i] <= piv || xb_[i] / w_[i] > bound) continue;
      const bool art = is_artificial(basis_[i]);
      if (!leave || (art && !best_art) || (art == best_art && w_[i] > best_w)) {
        leave = i;
        best_w = w_[i];
        best_art = art;
      }
    }
    return leave;
  }

  void pivot(std::size_t r, std::size_t entering, double theta) {
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r) continue;
      xb_[i] -= theta * w_[i];
      if (xb_[i] < 0.0 && xb_[i] > -opt_.primal_tolerance) xb_[i] = 0.0;
    }
    xb_[r] = theta;

    double* prow = &binv_[r * m_];
    const double inv = 1.0 / w_[r];
    for (std::size_t k = 0; k < m_; ++k) prow[k] *= inv;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r || w_[i] == 0.0) continue;
      double* row = &binv_[i * m_];
      const double f = w_[i];
      for (std::size_t k = 0; k < m_; ++k) row[k] -= f * prow[k];
    }

    const std::size_t leaving = basis_[r];
    if (!is_artificial(leaving)) in_basis_[leaving] = 0;
    basis_[r] = entering;
    in_basis_[entering] = 1;
  }

  // Rebuilds the basis inverse from scratch with Gauss-Jordan elimination
  // and recomputes the basic solution.
  bool refactor() {
    std::vector<double> mat(m_ * m_, 0.0);
    for (std::size_t j = 0; j < m_; ++j) {
      load_column(basis_[j]);
      for (std::size_t k = 0; k < m_; ++k) mat[k * m_ + j] = col_[k];
    }
    std::fill(binv_.begin(), binv_.end(), 0.0);
    for (std::size_t i = 0; i < m_; ++i) binv_[i * m_ + i] = 1.0;

    for (std::size_t c = 0; c < m_; ++c) {
      std::size_t p = c;
      for (std::size_t k = c + 1; k < m_; ++k) {
        if (std::abs(mat[k * m_ + c]) > std::abs(mat[p * m_ + c])) p = k;
      }
      if (std::abs(mat[p * m_ + c]) < 1e-12) return false;
      if (p != c) {
        for (std::size_t k = 0; k < m_; ++k) {
          std::swap(mat[p * m_ + k], mat[c * m_ + k]);
          std::swap(binv_[p * m_ + k], binv_[c * m_ + k]);
        }
      }
      const double inv = 1.0 / mat[c * m_ + c];
      for (std::size_t k = 0; k < m_; ++k) {
        mat[c * m_ + k] *= inv;
        binv_[c * m_ + k] *= inv;
      }
      for (std::size_t i = 0; i < m_; ++i) {
        if (i == c) continue;
        const double f = mat[i * m_ + c];
        if (f == 0.0) continue;
        for (std::size_t k = 0; k < m_; ++k) {
          mat[i * m_ + k] -= f * mat[c * m_ + k];
          binv_[i * m_ + k] -= f * binv_[c * m_ + k];
        }
      }
    }

    for (std::size_t i = 0; i < m_; ++i) {
      double s = 0.0;
      for (std::size_t k = 0; k < m_; ++k) s += binv_[i * m_ + k] * b_[k];
      if (s < -1e-7) return false;
      xb_[i] = std::max(s, 0.0);
    }
    return true;
  }

  Phase1Result& finish(Phase1Result& result, std::size_t iterations) {
    result.iterations = iterations;
    result.x.assign(n_, 0.0);
    double infeasibility = 0.0;
    for (std::size_t i = 0; i < m_; ++i) {
      const double v = std::max(0.0, xb_[i]);
      if (is_artificial(basis_[i])) infeasibility += v;
      else result.x[basis_[i]] = v;
    }
    result.infeasibility = infeasibility;
    return result;
  }

  const ColumnMatrix& a_;
  SimplexOptions opt_;
  std::size_t m_;
  std::size_t n_;
  std::vector<double> sign_;
  std::vector<double> b_;
  std::vector<std::size_t> basis_;
  std::vector<char> in_basis_;
  std::vector<double> binv_;
  std::vector<double> xb_;
  std::vector<double> y_;
  std::vector<double> w_;
  std::vector<double> col_;
};

}  // namespace

Phase1Result minimize_infeasibility(const ColumnMatrix& a,
                                    std::span<const double> b,
                                    const SimplexOptions& options) {
  Phase1 solver(a, b, options);
  return solver.run();
}

}  // namespace cbd::lp
