#pragma once

// Transformations that leave contextuality unchanged.

#include <algorithm>
#include <string>

#include "cbd/system.hpp"

namespace cbd::testing {

/// Swaps +1 and -1 for one content in every context holding it.
inline System flip_content(const System& sys, const std::string& content) {
  auto desc = sys.describe();
  for (auto& ctx : desc.contexts) {
    auto it = std::find(ctx.contents.begin(), ctx.contents.end(), content);
    if (it == ctx.contents.end()) continue;
    const std::size_t bit = std::size_t{1} << (it - ctx.contents.begin());
    std::vector<double> out(ctx.probs.size());
    for (std::size_t e = 0; e < out.size(); ++e) out[e] = ctx.probs[e ^ bit];
    ctx.probs = std::move(out);
  }
  return System::build(std::move(desc));
}

/// Reverses the order of contents, of contexts, and of the contents listed
/// within each context (re-indexing each bunch accordingly).
inline System reverse_everything(const System& sys) {
  auto desc = sys.describe();
  std::reverse(desc.contents.begin(), desc.contents.end());
  std::reverse(desc.contexts.begin(), desc.contexts.end());
  for (auto& ctx : desc.contexts) {
    const std::size_t k = ctx.contents.size();
    std::reverse(ctx.contents.begin(), ctx.contents.end());
    std::vector<double> out(ctx.probs.size());
    for (std::size_t e = 0; e < out.size(); ++e) {
      std::size_t r = 0;
      for (std::size_t j = 0; j < k; ++j)
        if (e & (std::size_t{1} << j)) r |= std::size_t{1} << (k - 1 - j);
      out[r] = ctx.probs[e];
    }
    ctx.probs = std::move(out);
  }
  return System::build(std::move(desc));
}

}  // namespace cbd::testing
