#include "cbd/cyclic.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <tuple>

namespace cbd {

namespace {

const std::string& other_content(const Context& ctx, const std::string& c) {
  return ctx.contents[0] == c ? ctx.contents[1] : ctx.contents[0];
}

void require_rank(const CyclicLayout& layout, int rank) {
  if (layout.rank != rank ||
      layout.order.size() != static_cast<std::size_t>(rank)) {
    throw std::invalid_argument("criterion needs a cyclic layout of rank " +
                                std::to_string(rank) + ", got rank " +
                                std::to_string(layout.rank));
  }
}

// s_i = <R_i R_{i+1}> in context c_i.
std::vector<double> cycle_products(const System& sys,
                                   const CyclicLayout& layout) {
  const std::size_t n = layout.order.size();
  std::vector<double> s(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& link = layout.order[i];
    s[i] = product_expectation(sys.bunch(link.next_context), link.content,
                               layout.order[(i + 1) % n].content);
  }
  return s;
}

std::vector<ContentGap> cycle_deltas(const System& sys,
                                     const CyclicLayout& layout) {
  std::vector<ContentGap> out;
  out.reserve(layout.order.size());
  for (const auto& link : layout.order) {
    const double before = expectation(sys.bunch(link.prev_context), link.content);
    const double after = expectation(sys.bunch(link.next_context), link.content);
    out.push_back({link.content, std::abs(before - after)});
  }
  return out;
}

// max_j |sum_i s_i - 2 s_j|
double odd_sign_maximum(const std::vector<double>& s) {
  double total = 0.0;
  for (double v : s) total += v;
  double best = 0.0;
  for (double v : s) best = std::max(best, std::abs(total - 2.0 * v));
  return best;
}

double delta_sum(const std::vector<ContentGap>& deltas) {
  double sum = 0.0;
  for (const auto& d : deltas) sum += d.gap;
  return sum;
}

}  // namespace

std::optional<CyclicLayout> detect_cycle_any_rank(const System& sys) {
  const auto& contexts = sys.contexts();
  const std::size_t n = contexts.size();
  if (n < 2 || sys.contents().size() != n) return std::nullopt;

  std::map<std::string, std::vector<std::size_t>> holders;
  for (const auto& c : sys.contents()) holders[c.id];
  for (std::size_t k = 0; k < n; ++k) {
    if (contexts[k].contents.size() != 2) return std::nullopt;
    for (const auto& c : contexts[k].contents) holders[c].push_back(k);
  }
  for (const auto& [id, ks] : holders) {
    if (ks.size() != 2) return std::nullopt;
  }

  const std::string start = holders.begin()->first;
  const auto& start_ctx = holders.at(start);
  auto key = [&](std::size_t k) {
    return std::tie(other_content(contexts[k], start), contexts[k].id);
  };
  const std::size_t first =
      key(start_ctx[0]) <= key(start_ctx[1]) ? start_ctx[0] : start_ctx[1];
  const std::size_t last = first == start_ctx[0] ? start_ctx[1] : start_ctx[0];

  CyclicLayout layout;
  layout.rank = static_cast<int>(n);
  std::vector<bool> used(n, false);
  std::string content = start;
  std::size_t prev = last;
  std::size_t next = first;
  for (std::size_t i = 0; i < n; ++i) {
    if (used[next]) return std::nullopt;
    used[next] = true;
    layout.order.push_back({content, contexts[prev].id, contexts[next].id});
    content = other_content(contexts[next], content);
    const auto& ks = holders.at(content);
    prev = next;
    next = ks[0] == prev ? ks[1] : ks[0];
  }
  // A single cycle returns to the start having used every context once.
  if (content != start || prev != last) return std::nullopt;
  return layout;
}

std::optional<CyclicLayout> detect_cyclic(const System& sys) {
  auto layout = detect_cycle_any_rank(sys);
  if (!layout || (layout->rank != 2 && layout->rank != 4)) return std::nullopt;
  return layout;
}

CyclicLayout relabel(const CyclicLayout& layout, std::size_t shift,
                     bool reverse) {
  const std::size_t n = layout.order.size();
  CyclicLayout out{layout.rank, {}};
  out.order.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!reverse) {
      out.order.push_back(layout.order[(i + shift) % n]);
    } else {
      const auto& link = layout.order[(shift + n - i) % n];
      out.order.push_back({link.content, link.next_context, link.prev_context});
    }
  }
  return out;
}

CriterionResult make_verdict(std::string criterion, double lhs, double rhs,
                             std::vector<ContentGap> deltas) {
  CriterionResult r;
  r.criterion = std::move(criterion);
  r.lhs = lhs;
  r.rhs = rhs;
  r.noncontextual = lhs <= rhs + kFeasTolerance;
  r.boundary = std::abs(lhs - rhs) <= kFeasTolerance;
  r.deltas = std::move(deltas);
  return r;
}

CriterionResult chsh_fine(const System& sys, const CyclicLayout& layout) {
  require_rank(layout, 4);
  const auto report = consistency(sys);
  if (!report.consistently_connected) {
    throw std::invalid_argument(
        "CHSH/Fine test needs a consistently connected system (max marginal "
        "gap " + std::to_string(report.max_marginal_gap) +
        "); use the maximal-equality criterion instead");
  }
  return make_verdict("chsh-fine", odd_sign_maximum(cycle_products(sys, layout)),
                      2.0, cycle_deltas(sys, layout));
}

CriterionResult cbd_cyclic4(const System& sys, const CyclicLayout& layout) {
  require_rank(layout, 4);
  auto deltas = cycle_deltas(sys, layout);
  const double rhs = 2.0 + delta_sum(deltas);
  return make_verdict("cbd-cyclic4",
                      odd_sign_maximum(cycle_products(sys, layout)), rhs,
                      std::move(deltas));
}

CriterionResult cbd_cyclic2(const System& sys, const CyclicLayout& layout) {
  require_rank(layout, 2);
  const auto s = cycle_products(sys, layout);
  auto deltas = cycle_deltas(sys, layout);
  const double rhs = delta_sum(deltas);
  return make_verdict("cbd-cyclic2", std::abs(s[0] - s[1]), rhs,
                      std::move(deltas));
}

double qq_statistic(const System& sys, const CyclicLayout& layout) {
  require_rank(layout, 2);
  const auto s = cycle_products(sys, layout);
  return s[0] - s[1];
}

}  // namespace cbd
