#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "json.hpp"

#include "cbd/system.hpp"

namespace cbd {

// System file layout:
//
//   {
//     "contents": [{"id": "q1", "label": "..."}, ...],
//     "contexts": [
//       {"id": "c1", "contents": ["q1", "q2"], "probs": [p0, p1, p2, p3]},
//       {"id": "c2", "contents": ["q2", "q3"],
//        "outcomes": [{"values": ["Yes", "No"], "p": 0.25}, ...]},
//       ...
//     ],
//     "values": {"Yes": 1, "No": -1}
//   }
//
// "probs" follows the bunch bit order. "outcomes" lists assignments by
// value (aliases from "values", or +1/-1 numbers); unlisted assignments get
// probability zero. "values" is optional and defaults to Yes=+1, No=-1;
// every alias must map to +1 or -1.

/// Throws ParseError for malformed documents and ValidationError for
/// documents that describe an invalid system.
System parse_system(const nlohmann::json& doc);
System parse_system(std::istream& in);
System parse_system_file(const std::filesystem::path& path);

/// Canonical form: every context written with "probs".
nlohmann::json system_to_json(const System& sys);
std::string serialize_system(const System& sys);

}  // namespace cbd
