#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace cbd::lp {

/// Constraint matrix accessed column by column, so that problems with
/// millions of columns never need to be materialized.
class ColumnMatrix {
 public:
  virtual ~ColumnMatrix() = default;
  virtual std::size_t rows() const = 0;
  virtual std::size_t cols() const = 0;
  /// out += scale * A[:, j]
  virtual void add_column(std::size_t j, double scale,
                          std::span<double> out) const = 0;
  /// y . A[:, j]
  virtual double dot_column(std::size_t j, std::span<const double> y) const = 0;
};

struct SimplexOptions {
  double pivot_tolerance = 1e-9;
  double optimality_tolerance = 1e-9;
  double primal_tolerance = 1e-9;
  std::size_t refactor_interval = 50;
  /// 0 picks a limit from the problem size.
  std::size_t max_iterations = 0;

  static SimplexOptions tight();
};

enum class SolveStatus { Optimal, IterationLimit, NumericalFailure };

struct Phase1Result {
  SolveStatus status = SolveStatus::NumericalFailure;
  /// Minimized sum of artificial variables, i.e. min ||A x - b||_1 over
  /// x >= 0 (exact arithmetic). Zero means {x >= 0 : A x = b} is non-empty.
  double infeasibility = 0.0;
  /// Structural solution, one entry per column.
  std::vector<double> x;
  std::size_t iterations = 0;
};

/// Phase 1 of the revised simplex method on {x >= 0 : A x = b}, starting
/// from an all-artificial basis. Dantzig pricing with a Harris ratio test;
/// falls back to Bland's rule while pivots stay degenerate.
Phase1Result minimize_infeasibility(const ColumnMatrix& a,
                                    std::span<const double> b,
                                    const SimplexOptions& options = {});

}  // namespace cbd::lp
