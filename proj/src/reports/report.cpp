#include "osskg/reports/report.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_set>

#include "osskg/edges/ioc.hpp"

namespace osskg::reports {
namespace {

using nlohmann::json;

bool is_token_char(char c) noexcept {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_' || c == '-';
}

std::string normalize_tag(std::string_view tag) {
  std::string out;
  for (char c : tag) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    } else if (!out.empty() && out.back() != '_') {
      out += '_';
    }
  }
  while (!out.empty() && out.back() == '_') out.pop_back();
  return out;
}

std::string optional_field(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return {};
  if (!it->is_string()) throw Error(ErrorKind::parse, std::string("field '") + key + "': expected string");
  return it->get<std::string>();
}

PackageMention mention_from_json(const json& p) {
  PackageMention m;
  if (p.is_string()) {
    m.name = p.get<std::string>();
  } else if (p.is_object() && p.contains("name") && p["name"].is_string()) {
    m.name = p["name"].get<std::string>();
    if (auto eco = optional_field(p, "ecosystem"); !eco.empty()) m.ecosystem = corpus::Ecosystem::parse(eco);
    if (auto ver = optional_field(p, "version"); !ver.empty()) m.version = ver;
  } else {
    throw Error(ErrorKind::parse, "field 'packages': entries must be names or {ecosystem, name, version}");
  }
  if (m.name.empty()) throw Error(ErrorKind::parse, "field 'packages': empty package name");
  return m;
}

}  // namespace

std::string_view to_string(PublisherCategory c) noexcept {
  switch (c) {
    case PublisherCategory::technical_community: return "technical_community";
    case PublisherCategory::commercial: return "commercial";
    case PublisherCategory::news: return "news";
    case PublisherCategory::individual: return "individual";
    case PublisherCategory::official: return "official";
    case PublisherCategory::other: return "other";
  }
  return "other";
}

std::string_view to_string(IoCKind k) noexcept {
  switch (k) {
    case IoCKind::ip: return "ip";
    case IoCKind::url: return "url";
    case IoCKind::powershell: return "powershell";
  }
  return "ip";
}

PublisherCategory categorize_publisher(std::string_view tag) {
  static const std::map<std::string, PublisherCategory> kTags = {
      {"technical_community", PublisherCategory::technical_community},
      {"tech_community", PublisherCategory::technical_community},
      {"community", PublisherCategory::technical_community},
      {"commercial", PublisherCategory::commercial},
      {"commercial_org", PublisherCategory::commercial},
      {"company", PublisherCategory::commercial},
      {"news", PublisherCategory::news},
      {"individual", PublisherCategory::individual},
      {"blog", PublisherCategory::individual},
      {"official", PublisherCategory::official},
      {"other", PublisherCategory::other},
  };
  auto it = kTags.find(normalize_tag(tag));
  return it == kTags.end() ? PublisherCategory::other : it->second;
}

std::vector<std::string> find_body_mentions(std::string_view text, const std::set<std::string>& corpus_names) {
  std::unordered_set<std::string_view> simple;
  std::vector<std::string_view> complex;
  for (const auto& n : corpus_names) {
    if (n.size() < kMinBodyMentionLength) continue;
    if (std::all_of(n.begin(), n.end(), is_token_char)) {
      simple.insert(n);
    } else {
      complex.push_back(n);
    }
  }
  std::set<std::string> found;
  for (std::size_t i = 0; i < text.size();) {
    if (!is_token_char(text[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && is_token_char(text[j])) ++j;
    if (auto it = simple.find(text.substr(i, j - i)); it != simple.end()) found.emplace(*it);
    i = j;
  }
  for (auto name : complex) {
    for (auto pos = text.find(name); pos != std::string_view::npos; pos = text.find(name, pos + 1)) {
      const auto end = pos + name.size();
      const bool left = pos == 0 || !is_token_char(text[pos - 1]) || !is_token_char(name.front());
      const bool right = end == text.size() || !is_token_char(text[end]) || !is_token_char(name.back());
      if (left && right) {
        found.emplace(name);
        break;
      }
    }
  }
  return {found.begin(), found.end()};
}

SecurityReport parse_report(const json& j, const std::set<std::string>& corpus_names) {
  if (!j.is_object()) throw Error(ErrorKind::parse, "report is not a JSON object");
  SecurityReport r;
  r.report_id = optional_field(j, "id");
  if (r.report_id.empty()) throw Error(ErrorKind::parse, "field 'id': missing");
  r.source_url = optional_field(j, "url");
  r.publisher_category = categorize_publisher(optional_field(j, "category"));
  if (auto date = optional_field(j, "date"); !date.empty()) {
    r.publish_date = parse_iso8601(date);
    if (!r.publish_date) throw Error(ErrorKind::parse, "field 'date': not an ISO-8601 date: " + date);
  }
  r.body_text = optional_field(j, "text");
  auto packages = j.find("packages");
  if (packages != j.end() && !packages->is_null()) {
    if (!packages->is_array()) throw Error(ErrorKind::parse, "field 'packages': expected array");
    for (const auto& p : *packages) {
      auto m = mention_from_json(p);
      if (std::find(r.mentioned_packages.begin(), r.mentioned_packages.end(), m) == r.mentioned_packages.end()) {
        r.mentioned_packages.push_back(std::move(m));
      }
    }
  } else {
    for (auto& name : find_body_mentions(r.body_text, corpus_names)) {
      r.mentioned_packages.push_back({std::nullopt, std::move(name), std::nullopt});
    }
  }
  r.iocs = edges::extract_iocs(r.body_text);
  return r;
}

std::vector<SecurityReport> load_reports(const std::filesystem::path& dir,
                                         const std::set<std::string>& corpus_names,
                                         Diagnostics* diagnostics) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw Error(ErrorKind::io, "report directory not found: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end(),
            [](const fs::path& a, const fs::path& b) { return a.filename().string() < b.filename().string(); });

  std::vector<SecurityReport> reports;
  std::set<std::string> ids;
  auto warn = [&](const fs::path& file, const std::string& code, const std::string& message) {
    if (diagnostics) diagnostics->push_back({Severity::warning, code, file.filename().string(), message});
  };
  for (const auto& file : files) {
    std::ifstream in(file, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    if (!in) {
      warn(file, "unreadable-report", "cannot read file");
      continue;
    }
    try {
      auto report = parse_report(json::parse(buf.str()), corpus_names);
      if (!ids.insert(report.report_id).second) {
        warn(file, "duplicate-report", "report id '" + report.report_id + "' already loaded");
        continue;
      }
      reports.push_back(std::move(report));
    } catch (const json::exception& e) {
      warn(file, "malformed-report", e.what());
    } catch (const Error& e) {
      warn(file, "malformed-report", e.what());
    }
  }
  return reports;
}

nlohmann::ordered_json report_to_json(const SecurityReport& r) {
  nlohmann::ordered_json j;
  j["id"] = r.report_id;
  j["url"] = r.source_url;
  j["category"] = std::string(to_string(r.publisher_category));
  j["date"] = r.publish_date ? nlohmann::ordered_json(format_iso8601(*r.publish_date)) : nlohmann::ordered_json(nullptr);
  auto packages = nlohmann::ordered_json::array();
  for (const auto& m : r.mentioned_packages) {
    nlohmann::ordered_json p;
    p["ecosystem"] = m.ecosystem ? nlohmann::ordered_json(m.ecosystem->name()) : nlohmann::ordered_json(nullptr);
    p["name"] = m.name;
    p["version"] = m.version ? nlohmann::ordered_json(*m.version) : nlohmann::ordered_json(nullptr);
    packages.push_back(std::move(p));
  }
  j["packages"] = std::move(packages);
  auto iocs = nlohmann::ordered_json::array();
  for (const auto& i : r.iocs) {
    nlohmann::ordered_json o;
    o["kind"] = std::string(to_string(i.kind));
    o["value"] = i.value;
    if (i.domain) o["domain"] = *i.domain;
    iocs.push_back(std::move(o));
  }
  j["iocs"] = std::move(iocs);
  j["text"] = r.body_text;
  return j;
}

}  // namespace osskg::reports
