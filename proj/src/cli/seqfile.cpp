#include "istat/cli/seqfile.hpp"

#include <fstream>
#include <sstream>

#include "istat/cli/parse.hpp"
#include "istat/errors.hpp"
#include "json.hpp"

namespace istat::cli {

using nlohmann::ordered_json;

namespace {

std::string field_string(const ordered_json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw ParseError(where + ": missing \"" + key + "\"", 0);
  if (!j.at(key).is_string()) throw ParseError(where + ": \"" + key + "\" must be a string", 0);
  return j.at(key).get<std::string>();
}

template <class F>
auto with_context(const std::string& where, F&& f) {
  try {
    return f();
  } catch (const ParseError& e) {
    std::string msg = e.what();
    if (const auto at = msg.rfind(" at position "); at != std::string::npos) msg.resize(at);
    throw ParseError(where + ": " + msg, e.position());
  }
}

}  // namespace

SequenceSpec parse_sequence_document(const std::string& text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const ordered_json::parse_error& e) {
    throw ParseError(std::string("sequence document: ") + e.what(), e.byte > 0 ? e.byte - 1 : 0);
  }
  if (!doc.is_object()) throw ParseError("sequence document: expected an object", 0);
  if (!doc.contains("format_version") || !doc["format_version"].is_number_integer()) {
    throw ParseError("sequence document: missing integer \"format_version\"", 0);
  }
  if (doc["format_version"].get<int>() != kFormatVersion) {
    throw ParseError("sequence document: unsupported format_version " + doc["format_version"].dump(), 0);
  }
  std::string name;
  if (doc.contains("meta")) {
    const auto& meta = doc["meta"];
    if (!meta.is_object()) throw ParseError("sequence document: \"meta\" must be an object", 0);
    if (meta.contains("name")) name = field_string(meta, "name", "meta");
  }
  std::vector<Piece> pieces;
  if (doc.contains("pieces")) {
    if (!doc["pieces"].is_array()) throw ParseError("sequence document: \"pieces\" must be an array", 0);
    std::size_t i = 0;
    for (const auto& p : doc["pieces"]) {
      const std::string where = "pieces[" + std::to_string(i++) + "]";
      if (!p.is_object()) throw ParseError(where + ": expected an object", 0);
      const auto guard = field_string(p, "guard", where);
      const auto formula = field_string(p, "formula", where);
      pieces.push_back({with_context(where + ".guard", [&] { return parse_set(guard); }),
                        with_context(where + ".formula", [&] { return Formula::parse(formula); })});
    }
  }
  const auto fallback = field_string(doc, "default", "sequence document");
  return SequenceSpec(std::move(pieces), with_context("default", [&] { return Formula::parse(fallback); }),
                      std::move(name));
}

std::string sequence_document(const SequenceSpec& x) {
  if (x.prefix_length()) throw PreconditionFailed("data prefixes have no sequence document");
  ordered_json doc;
  doc["format_version"] = kFormatVersion;
  doc["meta"] = ordered_json::object();
  doc["meta"]["name"] = x.name();
  doc["pieces"] = ordered_json::array();
  for (const auto& p : x.pieces()) {
    if (!p.guard.printable()) throw PreconditionFailed("guard " + p.guard.to_string() + " has no textual form");
    doc["pieces"].push_back(ordered_json{{"guard", p.guard.to_string()}, {"formula", p.formula.to_string()}});
  }
  doc["default"] = x.fallback().to_string();
  return doc.dump(2) + "\n";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

SequenceSpec load_sequence(const std::string& path) {
  const std::string text = read_file(path);
  if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0) {
    const auto slash = path.find_last_of('/');
    return import_csv_prefix(text, slash == std::string::npos ? path : path.substr(slash + 1));
  }
  return parse_sequence_document(text);
}

}  // namespace istat::cli
