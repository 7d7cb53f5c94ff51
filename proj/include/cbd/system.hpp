#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cbd {

/// Tolerance for probability axioms on input bunches. Sums within this
/// distance of 1 are renormalized; entries down to -kProbTolerance are
/// clamped to zero.
inline constexpr double kProbTolerance = 1e-9;

/// Tolerance used for contextuality verdicts and LP certificates.
inline constexpr double kFeasTolerance = 1e-7;

enum class BinaryValue : std::int8_t { Minus = -1, Plus = +1 };

/// "Yes"/"+1"/"1" map to Plus, "No"/"-1" map to Minus.
std::optional<BinaryValue> parse_binary_value(std::string_view text);
std::string_view to_string(BinaryValue v);
constexpr int to_int(BinaryValue v) { return static_cast<int>(v); }

struct Content {
  std::string id;
  std::string label;

  friend bool operator==(const Content&, const Content&) = default;
};

struct Context {
  std::string id;
  std::vector<std::string> contents;

  friend bool operator==(const Context&, const Context&) = default;
};

/// Joint distribution of the variables of one context.
///
/// probs has 2^k entries for k contents. Entry index bit j (lsb = 0) is the
/// value of contents[j]: bit 1 means +1, bit 0 means -1.
struct Bunch {
  std::string context;
  std::vector<std::string> contents;
  std::vector<double> probs;

  friend bool operator==(const Bunch&, const Bunch&) = default;
};

/// Bit position of `content` within the bunch's assignment index, or
/// nullopt when the bunch does not measure it.
std::optional<std::size_t> content_position(const Bunch& bunch,
                                            std::string_view content);

/// Pr[content = +1].
double marginal(const Bunch& bunch, std::string_view content);

/// <R> = 2 Pr[+1] - 1.
double expectation(const Bunch& bunch, std::string_view content);

/// <R_a R_b> = Pr[equal] - Pr[unequal].
double product_expectation(const Bunch& bunch, std::string_view a,
                           std::string_view b);

/// Joint distribution of the listed contents (in the given order).
Bunch marginalize(const Bunch& bunch, std::span<const std::string> keep);

/// Unvalidated system as read from a file or assembled by a builder. Each
/// context carries its bunch inline, so "one bunch per context" holds by
/// construction.
struct ContextDescription {
  std::string id;
  std::vector<std::string> contents;
  std::vector<double> probs;
};

struct SystemDescription {
  std::vector<Content> contents;
  std::vector<ContextDescription> contexts;
};

/// Every violated invariant, in a stable order. Empty means valid.
std::vector<std::string> validate_system(const SystemDescription& desc);

/// Validated, immutable context-content system.
class System {
 public:
  /// Validates, clamps tiny negatives and renormalizes sums within
  /// kProbTolerance. Throws ValidationError listing every violation.
  static System build(SystemDescription desc);

  const std::vector<Content>& contents() const noexcept { return contents_; }
  const std::vector<Context>& contexts() const noexcept { return contexts_; }
  const std::vector<Bunch>& bunches() const noexcept { return bunches_; }

  std::optional<std::size_t> find_content(std::string_view id) const;
  std::optional<std::size_t> find_context(std::string_view id) const;

  /// Throws std::out_of_range for unknown ids.
  const Bunch& bunch(std::string_view context_id) const;

  /// Total number of (content, context) random variables.
  std::size_t variable_count() const noexcept;

  SystemDescription describe() const;

  friend bool operator==(const System&, const System&) = default;

 private:
  System() = default;

  std::vector<Content> contents_;
  std::vector<Context> contexts_;
  std::vector<Bunch> bunches_;
};

struct ConnectionMember {
  std::string context;
  double p_plus;

  friend bool operator==(const ConnectionMember&,
                         const ConnectionMember&) = default;
};

/// All variables measuring one content, in context declaration order.
struct Connection {
  std::string content;
  std::vector<ConnectionMember> members;

  friend bool operator==(const Connection&, const Connection&) = default;
};

std::vector<Connection> connections(const System& sys);

struct ConsistencyReport {
  bool consistently_connected;
  double max_marginal_gap;
};

ConsistencyReport consistency(const System& sys);

}  // namespace cbd
