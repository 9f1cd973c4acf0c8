#include "osskg/corpus/catalog.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "osskg/util/error.hpp"

namespace osskg::corpus {
namespace {

using nlohmann::json;

const std::set<std::string> kKnownKeys = {
    "record_id",   "ecosystem",    "name",           "version",        "source_id",
    "source_category", "availability", "archive_path", "sha256",       "release_time",
    "detection_time", "removal_time", "description",  "declared_deps"};

[[noreturn]] void field_error(const std::string& field, const std::string& why) {
  throw Error(ErrorKind::parse, "field '" + field + "': " + why);
}

std::string required_string(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) field_error(key, "missing");
  if (!it->is_string()) field_error(key, "expected string");
  return it->get<std::string>();
}

std::optional<std::string> optional_string(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) field_error(key, "expected string");
  return it->get<std::string>();
}

std::optional<Timestamp> optional_time(const json& j, const char* key) {
  auto text = optional_string(j, key);
  if (!text) return std::nullopt;
  auto t = parse_iso8601(*text);
  if (!t) field_error(key, "not an ISO-8601 timestamp: " + *text);
  return t;
}

std::vector<Dependency> parse_deps(const json& j) {
  std::vector<Dependency> deps;
  auto it = j.find("declared_deps");
  if (it == j.end() || it->is_null()) return deps;
  if (!it->is_array()) field_error("declared_deps", "expected array");
  for (const auto& d : *it) {
    if (d.is_string()) {
      deps.push_back({d.get<std::string>(), ""});
    } else if (d.is_array() && !d.empty() && d.size() <= 2 && d[0].is_string() &&
               (d.size() == 1 || d[1].is_string())) {
      deps.push_back({d[0].get<std::string>(), d.size() == 2 ? d[1].get<std::string>() : ""});
    } else if (d.is_object() && d.contains("name") && d["name"].is_string()) {
      std::string constraint;
      if (auto c = d.find("constraint"); c != d.end() && c->is_string()) constraint = c->get<std::string>();
      deps.push_back({d["name"].get<std::string>(), constraint});
    } else {
      field_error("declared_deps", "entries must be name strings, [name, constraint] or {name, constraint}");
    }
    if (deps.back().name.empty()) field_error("declared_deps", "empty dependency name");
  }
  return deps;
}

template <typename J>
void put_optional(J& j, const char* key, const std::optional<std::string>& v) {
  j[key] = v ? J(*v) : J(nullptr);
}

template <typename J>
void put_time(J& j, const char* key, const std::optional<Timestamp>& t) {
  j[key] = t ? J(format_iso8601(*t)) : J(nullptr);
}

}  // namespace

PackageRecord record_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorKind::parse, "row is not a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (!kKnownKeys.contains(key)) field_error(key, "unknown key");
  }
  PackageRecord r;
  r.record_id = required_string(j, "record_id");
  r.ecosystem = Ecosystem::parse(required_string(j, "ecosystem"));
  r.name = required_string(j, "name");
  r.version = required_string(j, "version");
  r.source_id = required_string(j, "source_id");
  auto category = parse_source_category(required_string(j, "source_category"));
  if (!category) field_error("source_category", "expected academia|industry");
  r.source_category = *category;
  auto availability = parse_availability(required_string(j, "availability"));
  if (!availability) field_error("availability", "expected available|unavailable");
  r.availability = *availability;
  r.archive_path = optional_string(j, "archive_path");
  r.sha256 = optional_string(j, "sha256");
  r.release_time = optional_time(j, "release_time");
  r.detection_time = optional_time(j, "detection_time");
  r.removal_time = optional_time(j, "removal_time");
  r.description = optional_string(j, "description");
  r.declared_deps = parse_deps(j);
  if (auto bad = first_invalid_field(r)) {
    const std::string& f = *bad;
    if (f == "archive_path") {
      field_error(f, r.available() ? "required when availability=available"
                                   : "must be absent when availability=unavailable");
    }
    if (f == "sha256") field_error(f, "expected 64 lowercase hex characters");
    if (f == "removal_time") field_error(f, "precedes release_time");
    field_error(f, "must be non-empty");
  }
  return r;
}

nlohmann::ordered_json record_to_json(const PackageRecord& r) {
  nlohmann::ordered_json j;
  j["record_id"] = r.record_id;
  j["ecosystem"] = r.ecosystem.name();
  j["name"] = r.name;
  j["version"] = r.version;
  j["source_id"] = r.source_id;
  j["source_category"] = std::string(to_string(r.source_category));
  j["availability"] = std::string(to_string(r.availability));
  put_optional(j, "archive_path", r.archive_path);
  put_optional(j, "sha256", r.sha256);
  put_time(j, "release_time", r.release_time);
  put_time(j, "detection_time", r.detection_time);
  put_time(j, "removal_time", r.removal_time);
  put_optional(j, "description", r.description);
  auto deps = nlohmann::ordered_json::array();
  for (const auto& d : r.declared_deps) {
    deps.push_back({{"name", d.name}, {"constraint", d.constraint}});
  }
  j["declared_deps"] = std::move(deps);
  return j;
}

SourceCatalog load_catalog(const std::filesystem::path& path,
                           const std::optional<std::filesystem::path>& archive_root) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot read catalog " + path.string());

  SourceCatalog catalog;
  std::vector<std::string> problems;
  std::set<std::string> seen_ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const std::string where = path.filename().string() + ":" + std::to_string(line_no);
    PackageRecord r;
    try {
      r = record_from_json(json::parse(line));
    } catch (const json::parse_error& e) {
      problems.push_back(where + ": malformed JSON (" + e.what() + ")");
      continue;
    } catch (const Error& e) {
      problems.push_back(where + ": " + e.what());
      continue;
    }
    if (!seen_ids.insert(r.record_id).second) {
      throw Error(ErrorKind::duplicate_id, where + ": duplicate record_id '" + r.record_id + "'");
    }
    if (catalog.source_id.empty()) {
      catalog.source_id = r.source_id;
      catalog.source_category = r.source_category;
    } else if (r.source_id != catalog.source_id) {
      problems.push_back(where + ": field 'source_id': '" + r.source_id +
                         "' differs from catalog source '" + catalog.source_id + "'");
      continue;
    }
    if (archive_root && r.archive_path) {
      const auto full = *archive_root / *r.archive_path;
      std::ifstream probe(full, std::ios::binary);
      if (!probe || !std::filesystem::is_regular_file(full)) {
        problems.push_back(where + ": field 'archive_path': not readable: " + full.string());
        continue;
      }
    }
    catalog.records.push_back(std::move(r));
  }
  if (!problems.empty()) {
    std::ostringstream msg;
    msg << "catalog " << path.string() << " rejected (" << problems.size() << " invalid row"
        << (problems.size() == 1 ? "" : "s") << ")";
    for (const auto& p : problems) msg << "\n  " << p;
    throw Error(ErrorKind::validation, msg.str());
  }
  if (catalog.source_id.empty()) catalog.source_id = path.stem().string();
  return catalog;
}

void write_catalog(const std::filesystem::path& path, const std::vector<PackageRecord>& records) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::io, "cannot write " + path.string());
  for (const auto& r : records) out << record_to_json(r).dump() << '\n';
  if (!out) throw Error(ErrorKind::io, "write failed: " + path.string());
}

}  // namespace osskg::corpus
