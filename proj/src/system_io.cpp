#include "cbd/system_io.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "cbd/errors.hpp"
#include "cbd/format.hpp"

namespace cbd {

namespace {

using nlohmann::json;

const json& require(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw ParseError(where + ": missing \"" + key + "\"");
  }
  return *it;
}

std::string require_string(const json& v, const std::string& where) {
  if (!v.is_string()) throw ParseError(where + ": expected a string");
  return v.get<std::string>();
}

double require_number(const json& v, const std::string& where) {
  if (!v.is_number()) throw ParseError(where + ": expected a number");
  return v.get<double>();
}

BinaryValue binary_from_number(double v, const std::string& where) {
  if (v == 1.0) return BinaryValue::Plus;
  if (v == -1.0) return BinaryValue::Minus;
  throw ParseError(where + ": non-binary outcome " + format_number(v) +
                   " (only +1 and -1 are allowed)");
}

std::map<std::string, BinaryValue> read_aliases(const json& doc) {
  std::map<std::string, BinaryValue> aliases{{"Yes", BinaryValue::Plus},
                                             {"No", BinaryValue::Minus}};
  auto it = doc.find("values");
  if (it == doc.end()) return aliases;
  if (!it->is_object()) throw ParseError("\"values\" must be an object");
  aliases.clear();
  for (const auto& [name, v] : it->items()) {
    const std::string where = "values[\"" + name + "\"]";
    aliases[name] = binary_from_number(require_number(v, where), where);
  }
  return aliases;
}

std::vector<double> read_outcomes(const json& outcomes, std::size_t width,
                                  const std::map<std::string, BinaryValue>& aliases,
                                  const std::string& where) {
  if (!outcomes.is_array()) throw ParseError(where + ": \"outcomes\" must be an array");
  std::vector<double> probs(std::size_t{1} << width, 0.0);
  std::vector<bool> seen(probs.size(), false);
  for (std::size_t n = 0; n < outcomes.size(); ++n) {
    const std::string at = where + " outcomes[" + std::to_string(n) + "]";
    const auto& entry = outcomes[n];
    if (!entry.is_object()) throw ParseError(at + ": expected an object");
    const auto& values = require(entry, "values", at);
    if (!values.is_array() || values.size() != width) {
      throw ParseError(at + ": \"values\" must list " + std::to_string(width) +
                       " outcomes");
    }
    std::size_t idx = 0;
    for (std::size_t j = 0; j < width; ++j) {
      BinaryValue b;
      if (values[j].is_string()) {
        const auto name = values[j].get<std::string>();
        auto alias = aliases.find(name);
        if (alias == aliases.end())
          throw ParseError(at + ": unknown outcome value \"" + name + "\"");
        b = alias->second;
      } else {
        b = binary_from_number(require_number(values[j], at), at);
      }
      if (b == BinaryValue::Plus) idx |= std::size_t{1} << j;
    }
    if (seen[idx]) throw ParseError(at + ": assignment listed twice");
    seen[idx] = true;
    probs[idx] = require_number(require(entry, "p", at), at);
  }
  return probs;
}

}  // namespace

System parse_system(const json& doc) {
  if (!doc.is_object()) throw ParseError("system document must be an object");
  const auto aliases = read_aliases(doc);

  SystemDescription desc;
  const auto& contents = require(doc, "contents", "system");
  if (!contents.is_array()) throw ParseError("\"contents\" must be an array");
  for (std::size_t i = 0; i < contents.size(); ++i) {
    const std::string where = "contents[" + std::to_string(i) + "]";
    const auto& c = contents[i];
    if (!c.is_object()) throw ParseError(where + ": expected an object");
    Content content{require_string(require(c, "id", where), where + ".id"), ""};
    if (auto label = c.find("label"); label != c.end())
      content.label = require_string(*label, where + ".label");
    desc.contents.push_back(std::move(content));
  }

  const auto& contexts = require(doc, "contexts", "system");
  if (!contexts.is_array()) throw ParseError("\"contexts\" must be an array");
  for (std::size_t i = 0; i < contexts.size(); ++i) {
    std::string where = "contexts[" + std::to_string(i) + "]";
    const auto& c = contexts[i];
    if (!c.is_object()) throw ParseError(where + ": expected an object");
    ContextDescription ctx;
    ctx.id = require_string(require(c, "id", where), where + ".id");
    where = "context '" + ctx.id + "'";
    const auto& ids = require(c, "contents", where);
    if (!ids.is_array()) throw ParseError(where + ": \"contents\" must be an array");
    for (const auto& id : ids) ctx.contents.push_back(require_string(id, where));

    const bool has_probs = c.contains("probs");
    const bool has_outcomes = c.contains("outcomes");
    if (has_probs == has_outcomes) {
      throw ParseError(where + ": give exactly one of \"probs\" or \"outcomes\"");
    }
    if (has_probs) {
      const auto& probs = c.at("probs");
      if (!probs.is_array()) throw ParseError(where + ": \"probs\" must be an array");
      for (const auto& p : probs) ctx.probs.push_back(require_number(p, where));
    } else {
      if (ctx.contents.size() > 24)
        throw ParseError(where + ": too many contents for \"outcomes\"");
      ctx.probs = read_outcomes(c.at("outcomes"), ctx.contents.size(), aliases,
                                where);
    }
    desc.contexts.push_back(std::move(ctx));
  }
  return System::build(std::move(desc));
}

System parse_system(std::istream& in) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  return parse_system(doc);
}

System parse_system_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");
  return parse_system(in);
}

nlohmann::json system_to_json(const System& sys) {
  json doc;
  doc["contents"] = json::array();
  for (const auto& c : sys.contents()) {
    doc["contents"].push_back({{"id", c.id}, {"label", c.label}});
  }
  doc["contexts"] = json::array();
  for (const auto& b : sys.bunches()) {
    doc["contexts"].push_back(
        {{"id", b.context}, {"contents", b.contents}, {"probs", b.probs}});
  }
  return doc;
}

std::string serialize_system(const System& sys) {
  return system_to_json(sys).dump(2) + "\n";
}

}  // namespace cbd
