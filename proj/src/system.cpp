#include "cbd/system.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

#include "cbd/errors.hpp"
#include "cbd/format.hpp"

namespace cbd {

namespace {

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (const auto& p : parts) {
    if (!out.empty()) out += "; ";
    out += p;
  }
  return out;
}

// Widest context we accept; 2^24 entries is already far past anything the
// coupling engine can use.
constexpr std::size_t kMaxContextWidth = 24;

std::size_t require_position(const Bunch& bunch, std::string_view content) {
  auto pos = content_position(bunch, content);
  if (!pos) {
    throw std::invalid_argument("content '" + std::string(content) +
                                "' is not in context '" + bunch.context + "'");
  }
  return *pos;
}

}  // namespace

ValidationError::ValidationError(std::vector<std::string> violations)
    : InputError("invalid system: " + join(violations)),
      violations_(std::move(violations)) {}

std::optional<BinaryValue> parse_binary_value(std::string_view text) {
  if (text == "Yes" || text == "+1" || text == "1") return BinaryValue::Plus;
  if (text == "No" || text == "-1") return BinaryValue::Minus;
  return std::nullopt;
}

std::string_view to_string(BinaryValue v) {
  return v == BinaryValue::Plus ? "+1" : "-1";
}

std::optional<std::size_t> content_position(const Bunch& bunch,
                                            std::string_view content) {
  auto it = std::find(bunch.contents.begin(), bunch.contents.end(), content);
  if (it == bunch.contents.end()) return std::nullopt;
  return static_cast<std::size_t>(it - bunch.contents.begin());
}

double marginal(const Bunch& bunch, std::string_view content) {
  const std::size_t bit = require_position(bunch, content);
  double p = 0.0;
  for (std::size_t idx = 0; idx < bunch.probs.size(); ++idx) {
    if ((idx >> bit) & 1U) p += bunch.probs[idx];
  }
  return p;
}

double expectation(const Bunch& bunch, std::string_view content) {
  return 2.0 * marginal(bunch, content) - 1.0;
}

double product_expectation(const Bunch& bunch, std::string_view a,
                           std::string_view b) {
  const std::size_t bit_a = require_position(bunch, a);
  const std::size_t bit_b = require_position(bunch, b);
  if (bit_a == bit_b) {
    throw std::invalid_argument("product expectation needs two distinct "
                                "contents, got '" + std::string(a) + "' twice");
  }
  double equal = 0.0;
  double unequal = 0.0;
  for (std::size_t idx = 0; idx < bunch.probs.size(); ++idx) {
    if (((idx >> bit_a) & 1U) == ((idx >> bit_b) & 1U)) {
      equal += bunch.probs[idx];
    } else {
      unequal += bunch.probs[idx];
    }
  }
  return equal - unequal;
}

Bunch marginalize(const Bunch& bunch, std::span<const std::string> keep) {
  std::vector<std::size_t> bits;
  bits.reserve(keep.size());
  for (const auto& c : keep) {
    const std::size_t bit = require_position(bunch, c);
    if (std::find(bits.begin(), bits.end(), bit) != bits.end()) {
      throw std::invalid_argument("content '" + c + "' listed twice");
    }
    bits.push_back(bit);
  }
  Bunch out{bunch.context, std::vector<std::string>(keep.begin(), keep.end()),
            std::vector<double>(std::size_t{1} << keep.size(), 0.0)};
  for (std::size_t idx = 0; idx < bunch.probs.size(); ++idx) {
    std::size_t sub = 0;
    for (std::size_t j = 0; j < bits.size(); ++j) {
      sub |= ((idx >> bits[j]) & 1U) << j;
    }
    out.probs[sub] += bunch.probs[idx];
  }
  return out;
}

std::vector<std::string> validate_system(const SystemDescription& desc) {
  std::vector<std::string> out;

  std::unordered_set<std::string> content_ids;
  for (const auto& c : desc.contents) {
    if (c.id.empty()) out.push_back("content with empty id");
    else if (!content_ids.insert(c.id).second)
      out.push_back("duplicate content id '" + c.id + "'");
  }

  if (desc.contexts.empty()) out.push_back("system has no contexts");

  std::unordered_set<std::string> context_ids;
  for (const auto& ctx : desc.contexts) {
    const std::string where = "context '" + ctx.id + "': ";
    if (ctx.id.empty()) out.push_back("context with empty id");
    else if (!context_ids.insert(ctx.id).second)
      out.push_back("duplicate context id '" + ctx.id + "'");

    if (ctx.contents.empty()) out.push_back(where + "no contents");
    std::unordered_set<std::string> seen;
    for (const auto& c : ctx.contents) {
      if (!seen.insert(c).second)
        out.push_back(where + "content '" + c + "' listed twice");
      if (!content_ids.contains(c))
        out.push_back(where + "unknown content '" + c + "'");
    }

    if (ctx.contents.size() > kMaxContextWidth) {
      out.push_back(where + "too many contents (" +
                    std::to_string(ctx.contents.size()) + ")");
      continue;
    }
    const std::size_t expected = std::size_t{1} << ctx.contents.size();
    if (ctx.probs.size() != expected) {
      out.push_back(where + "probs has " + std::to_string(ctx.probs.size()) +
                    " entries, expected " + std::to_string(expected));
      continue;
    }

    double sum = 0.0;
    bool finite = true;
    for (std::size_t i = 0; i < ctx.probs.size(); ++i) {
      const double p = ctx.probs[i];
      const std::string entry = "probs[" + std::to_string(i) + "] = ";
      if (!std::isfinite(p)) {
        out.push_back(where + entry + "is not finite");
        finite = false;
        continue;
      }
      if (p < -kProbTolerance)
        out.push_back(where + entry + format_number(p) + " is negative");
      else if (p > 1.0 + kProbTolerance)
        out.push_back(where + entry + format_number(p) + " exceeds 1");
      sum += p;
    }
    if (finite && std::abs(sum - 1.0) > kProbTolerance)
      out.push_back(where + "bunch sum " + format_number(sum) + " != 1");
  }
  return out;
}

System System::build(SystemDescription desc) {
  auto violations = validate_system(desc);
  if (!violations.empty()) throw ValidationError(std::move(violations));

  System sys;
  sys.contents_ = std::move(desc.contents);
  sys.contexts_.reserve(desc.contexts.size());
  sys.bunches_.reserve(desc.contexts.size());
  for (auto& ctx : desc.contexts) {
    double sum = 0.0;
    for (double& p : ctx.probs) {
      p = std::max(p, 0.0);
      sum += p;
    }
    // Leave sums that are already 1 to rounding alone so that loading a
    // serialized system reproduces it bit for bit.
    if (std::abs(sum - 1.0) > 1e-12) {
      for (double& p : ctx.probs) p /= sum;
    }
    sys.contexts_.push_back(Context{ctx.id, ctx.contents});
    sys.bunches_.push_back(
        Bunch{ctx.id, std::move(ctx.contents), std::move(ctx.probs)});
  }
  return sys;
}

std::optional<std::size_t> System::find_content(std::string_view id) const {
  for (std::size_t i = 0; i < contents_.size(); ++i) {
    if (contents_[i].id == id) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> System::find_context(std::string_view id) const {
  for (std::size_t i = 0; i < contexts_.size(); ++i) {
    if (contexts_[i].id == id) return i;
  }
  return std::nullopt;
}

const Bunch& System::bunch(std::string_view context_id) const {
  auto idx = find_context(context_id);
  if (!idx) {
    throw std::out_of_range("unknown context '" + std::string(context_id) +
                            "'");
  }
  return bunches_[*idx];
}

std::size_t System::variable_count() const noexcept {
  std::size_t m = 0;
  for (const auto& ctx : contexts_) m += ctx.contents.size();
  return m;
}

SystemDescription System::describe() const {
  SystemDescription desc;
  desc.contents = contents_;
  for (std::size_t i = 0; i < contexts_.size(); ++i) {
    desc.contexts.push_back(ContextDescription{
        contexts_[i].id, contexts_[i].contents, bunches_[i].probs});
  }
  return desc;
}

std::vector<Connection> connections(const System& sys) {
  std::vector<Connection> out;
  for (const auto& content : sys.contents()) {
    Connection conn{content.id, {}};
    for (const auto& bunch : sys.bunches()) {
      if (content_position(bunch, content.id)) {
        conn.members.push_back({bunch.context, marginal(bunch, content.id)});
      }
    }
    if (!conn.members.empty()) out.push_back(std::move(conn));
  }
  return out;
}

ConsistencyReport consistency(const System& sys) {
  double gap = 0.0;
  for (const auto& conn : connections(sys)) {
    for (std::size_t i = 0; i < conn.members.size(); ++i) {
      for (std::size_t j = i + 1; j < conn.members.size(); ++j) {
        gap = std::max(gap, std::abs(conn.members[i].p_plus -
                                     conn.members[j].p_plus));
      }
    }
  }
  return {gap <= kProbTolerance, gap};
}

}  // namespace cbd
