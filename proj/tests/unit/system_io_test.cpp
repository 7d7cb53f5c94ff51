#include <gtest/gtest.h>

#include <sstream>

#include "cbd/errors.hpp"
#include "cbd/scenarios.hpp"
#include "cbd/system_io.hpp"
#include "support/random_systems.hpp"

namespace cbd {
namespace {

using nlohmann::json;

System parse_text(const std::string& text) {
  std::istringstream in(text);
  return parse_system(in);
}

const char* kRankTwo = R"({
  "contents": [{"id": "q_A", "label": "first"}, {"id": "q_B"}],
  "contexts": [
    {"id": "c_AB", "contents": ["q_A", "q_B"], "probs": [0.1, 0.2, 0.3, 0.4]},
    {"id": "c_BA", "contents": ["q_A", "q_B"], "probs": [0.4, 0.3, 0.2, 0.1]}
  ]
})";

TEST(ParseSystem, WellFormedRankTwo) {
  const auto sys = parse_text(kRankTwo);
  EXPECT_EQ(sys.contexts().size(), 2u);
  EXPECT_EQ(sys.contents()[0].label, "first");
  EXPECT_EQ(sys.contents()[1].label, "");
  EXPECT_EQ(sys.bunch("c_BA").probs[1], 0.3);
}

TEST(ParseSystem, SumJustOffOneIsRejected) {
  const char* text = R"({"contents": [{"id": "a"}],
    "contexts": [{"id": "c", "contents": ["a"], "probs": [0.5, 0.5000001]}]})";
  EXPECT_THROW(parse_text(text), ValidationError);
}

TEST(ParseSystem, YesNoOutcomes) {
  const char* text = R"({"contents": [{"id": "a"}, {"id": "b"}],
    "contexts": [{"id": "c", "contents": ["a", "b"], "outcomes": [
      {"values": ["Yes", "Yes"], "p": 0.4},
      {"values": ["No", "Yes"], "p": 0.3},
      {"values": ["Yes", "No"], "p": 0.2},
      {"values": [-1, -1], "p": 0.1}]}]})";
  const auto sys = parse_text(text);
  EXPECT_EQ(sys.bunch("c").probs, (std::vector<double>{0.1, 0.2, 0.3, 0.4}));
}

TEST(ParseSystem, CustomAliasesAndOmittedOutcomes) {
  const char* text = R"({"values": {"up": 1, "down": -1},
    "contents": [{"id": "a"}],
    "contexts": [{"id": "c", "contents": ["a"], "outcomes": [
      {"values": ["up"], "p": 1}]}]})";
  EXPECT_EQ(parse_text(text).bunch("c").probs, (std::vector<double>{0.0, 1.0}));
}

TEST(ParseSystem, Errors) {
  const std::vector<std::string> parse_errors = {
      "{",
      "[]",
      R"({"contexts": []})",
      R"({"contents": [{"id": "a"}], "contexts": [{"id": "c", "contents": ["a"]}]})",
      R"({"contents": [{"id": "a"}], "contexts": [{"id": "c", "contents": ["a"],
          "probs": [0.5, 0.5], "outcomes": []}]})",
      R"({"contents": [{"id": "a"}], "contexts": [{"id": "c", "contents": ["a"],
          "outcomes": [{"values": [0], "p": 1}]}]})",
      R"({"values": {"maybe": 0}, "contents": [{"id": "a"}], "contexts": []})",
      R"({"contents": [{"id": "a"}], "contexts": [{"id": "c", "contents": ["a"],
          "outcomes": [{"values": ["Perhaps"], "p": 1}]}]})",
      R"({"contents": [{"id": "a"}], "contexts": [{"id": "c", "contents": ["a"],
          "outcomes": [{"values": ["Yes"], "p": 0.5}, {"values": [1], "p": 0.5}]}]})",
      R"({"contents": [{"id": 3}], "contexts": []})",
      R"({"contents": [{"id": "a"}], "contexts": [{"id": "c", "contents": ["a"],
          "probs": ["x", 1]}]})",
  };
  for (const auto& text : parse_errors) {
    EXPECT_THROW(parse_text(text), ParseError) << text;
  }
  EXPECT_THROW(parse_text(R"({"contents": [], "contexts": []})"), ValidationError);
  EXPECT_THROW(parse_system_file("/nonexistent/file.json"), ParseError);
}

TEST(ParseSystem, NonBinaryMessage) {
  try {
    parse_text(R"({"contents": [{"id": "a"}], "contexts": [{"id": "c",
        "contents": ["a"], "outcomes": [{"values": [2], "p": 1}]}]})");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("non-binary outcome"), std::string::npos);
  }
}

TEST(Serialize, RoundTripIsIdentity) {
  EXPECT_EQ(parse_text(serialize_system(parse_text(kRankTwo))), parse_text(kRankTwo));
  testing::Rng rng(51);
  for (int trial = 0; trial < 300; ++trial) {
    const auto sys = testing::random_small_system(rng);
    const auto text = serialize_system(sys);
    const auto again = parse_text(text);
    EXPECT_EQ(again, sys);
    EXPECT_EQ(serialize_system(again), text);
  }
  const auto slit = build_double_slit({0.1, 0.1, 0.08, 0.08, 0.05});
  EXPECT_EQ(parse_text(serialize_system(slit)), slit);
}

}  // namespace
}  // namespace cbd
