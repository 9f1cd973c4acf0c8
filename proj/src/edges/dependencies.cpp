#include "osskg/edges/dependencies.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

namespace osskg::edges {
namespace {

// Kept in sync with data/dependency_patterns.tsv.
constexpr const char* kDefaultPatterns[][2] = {
    {"import-from-quoted", R"(import [\w./]*? from ['"][\w.-]+['"])"},
    {"from-quoted-import", R"(from ['"][\w.-]+['"] import .*?)"},
    {"import-from-bare", R"(import [\w./]* from [\w.-]+)"},
    {"from-import", R"(from [\w.-]+ import .*?)"},
    {"import-quoted", R"(import ['"][\w.-]+['"])"},
    {"import-bare", R"(import [\w.-]+)"},
    {"import-relative", R"(import \./[\w.-]+)"},
    {"import-parent", R"(import \.\./[\w.-]+)"},
    {"import-word-boundary", R"(import [\w.]*\b[\w.-]+\b)"},
    {"from-dotted-import", R"(from [\w.-]+[\w.]+ import .*?)"},
    {"require-assign", R"((const|let|var) .* = require\(['"][\w.-]+['"]\))"},
    {"require-call", R"(require\s*\(?\s*['"][\w.-]+['"]\s*\)?)"},
    {"url", R"(https?://[^\s]+)"},
    {"require-path", R"(require\(["'][^"']+(?:/[^"']+)*/["']\))"},
};

DependencyPattern compile_pattern(std::string id, std::string source) {
  std::string greedy;
  for (std::size_t i = 0; i < source.size(); ++i) {
    if (source[i] == '\\' && i + 1 < source.size()) {
      greedy += source.substr(i, 2);
      ++i;
    } else if (source[i] == '?' && i > 0 && (source[i - 1] == '*' || source[i - 1] == '+') &&
               !(i >= 2 && source[i - 2] == '\\')) {
      continue;
    } else {
      greedy += source[i];
    }
  }
  DependencyPattern p{std::move(id), std::move(source), {}, {}};
  p.search = std::regex(p.source, std::regex::ECMAScript | std::regex::optimize);
  p.cover = std::regex(greedy, std::regex::ECMAScript);
  return p;
}

bool is_token_char(char c) noexcept {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_' ||
         c == '-';
}

bool is_simple_name(const std::string& name) {
  return !name.empty() && std::all_of(name.begin(), name.end(), is_token_char);
}

std::string_view extension(std::string_view path) {
  const auto dot = path.rfind('.');
  return dot == std::string_view::npos ? std::string_view{} : path.substr(dot);
}

bool at_line_start(std::string_view text, std::size_t i) { return i == 0 || text[i - 1] == '\n'; }

// Half-open [begin, end) byte ranges that are comments.
std::vector<std::pair<std::size_t, std::size_t>> comment_ranges(std::string_view path,
                                                                 std::string_view text) {
  const auto ext = extension(path);
  const bool js = ext == ".js";
  const bool rb = ext == ".rb";
  std::vector<std::pair<std::size_t, std::size_t>> out;
  const std::size_t n = text.size();
  std::size_t i = 0;
  auto line_end = [&](std::size_t from) {
    const auto e = text.find('\n', from);
    return e == std::string_view::npos ? n : e;
  };
  while (i < n) {
    const char c = text[i];
    if (rb && at_line_start(text, i) && text.compare(i, 6, "=begin") == 0) {
      std::size_t j = i;
      std::size_t end = n;
      while ((j = text.find("\n=end", j)) != std::string_view::npos) {
        end = line_end(j + 1);
        break;
      }
      out.emplace_back(i, end);
      i = end;
      continue;
    }
    if (js && c == '/' && i + 1 < n && text[i + 1] == '/') {
      const auto e = line_end(i);
      out.emplace_back(i, e);
      i = e;
      continue;
    }
    if (js && c == '/' && i + 1 < n && text[i + 1] == '*') {
      const auto e = text.find("*/", i + 2);
      const std::size_t end = e == std::string_view::npos ? n : e + 2;
      out.emplace_back(i, end);
      i = end;
      continue;
    }
    if (!js && c == '#') {
      const auto e = line_end(i);
      out.emplace_back(i, e);
      i = e;
      continue;
    }
    if (c == '"' || c == '\'' || (js && c == '`')) {
      const bool triple = !js && !rb && i + 2 < n && text[i + 1] == c && text[i + 2] == c;
      const bool multiline = triple || c == '`';
      std::size_t j = i + (triple ? 3 : 1);
      while (j < n) {
        if (text[j] == '\\') {
          j += 2;
          continue;
        }
        if (!multiline && text[j] == '\n') break;
        if (text[j] == c) {
          if (!triple) {
            ++j;
            break;
          }
          if (j + 2 < n + 0 && text[j + 1] == c && text[j + 2] == c) {
            j += 3;
            break;
          }
        }
        ++j;
      }
      i = std::min(j, n);
      continue;
    }
    ++i;
  }
  return out;
}

bool inside(const std::vector<std::pair<std::size_t, std::size_t>>& ranges, std::size_t offset) {
  auto it = std::upper_bound(ranges.begin(), ranges.end(), offset,
                             [](std::size_t o, const auto& r) { return o < r.first; });
  if (it == ranges.begin()) return false;
  --it;
  return offset >= it->first && offset < it->second;
}

// Window of kDependencyWindow bytes centred on [begin, end), clipped to the
// text and always containing the whole occurrence.
std::pair<std::size_t, std::size_t> centred_window(std::size_t text_len, std::size_t begin,
                                                   std::size_t end) {
  const std::size_t len = end - begin;
  if (len >= kDependencyWindow) return {begin, end};
  const std::size_t pad = kDependencyWindow - len;
  std::size_t ws = begin >= pad / 2 ? begin - pad / 2 : 0;
  std::size_t we = std::min(text_len, ws + kDependencyWindow);
  if (we - ws < kDependencyWindow) ws = we >= kDependencyWindow ? we - kDependencyWindow : 0;
  return {ws, we};
}

void scan_file(std::string_view path, std::string_view text,
               const std::unordered_set<std::string>& simple_names,
               const std::vector<std::string>& complex_names, const PatternSet& patterns,
               std::vector<CodeDependencyHit>& hits) {
  std::vector<std::tuple<std::size_t, std::size_t, const std::string*>> occurrences;
  for (std::size_t i = 0; i < text.size();) {
    if (!is_token_char(text[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && is_token_char(text[j])) ++j;
    auto it = simple_names.find(std::string(text.substr(i, j - i)));
    if (it != simple_names.end()) occurrences.emplace_back(i, j, &*it);
    i = j;
  }
  for (const auto& name : complex_names) {
    for (std::size_t pos = text.find(name); pos != std::string_view::npos; pos = text.find(name, pos + 1)) {
      const std::size_t end = pos + name.size();
      if (pos > 0 && is_token_char(text[pos - 1]) && is_token_char(name.front())) continue;
      if (end < text.size() && is_token_char(text[end]) && is_token_char(name.back())) continue;
      occurrences.emplace_back(pos, end, &name);
    }
  }
  if (occurrences.empty()) return;
  const auto comments = comment_ranges(path, text);
  for (const auto& [begin, end, name] : occurrences) {
    if (inside(comments, begin)) continue;
    const auto [ws, we] = centred_window(text.size(), begin, end);
    if (!patterns.covers(text.substr(ws, we - ws), begin - ws, end - ws)) continue;
    hits.push_back({*name, std::string(path), begin});
  }
}

}  // namespace

PatternSet PatternSet::defaults() {
  PatternSet set;
  for (const auto& [id, source] : kDefaultPatterns) set.patterns_.push_back(compile_pattern(id, source));
  return set;
}

PatternSet PatternSet::parse(std::string_view text, const std::string& origin) {
  PatternSet set;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  bool have_version = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    const std::string where = origin + ":" + std::to_string(line_no);
    if (tab == std::string::npos || tab == 0 || tab + 1 == line.size()) {
      throw Error(ErrorKind::parse, where + ": expected <id><TAB><regex>");
    }
    std::string key = line.substr(0, tab);
    std::string value = line.substr(tab + 1);
    if (!have_version) {
      if (key != "version") throw Error(ErrorKind::parse, where + ": first entry must be the version line");
      if (value != std::to_string(kFormatVersion)) {
        throw Error(ErrorKind::version_mismatch, where + ": pattern file version " + value +
                                                     " (supported: " + std::to_string(kFormatVersion) + ")");
      }
      have_version = true;
      continue;
    }
    try {
      set.patterns_.push_back(compile_pattern(std::move(key), std::move(value)));
    } catch (const std::regex_error& e) {
      throw Error(ErrorKind::parse, where + ": invalid regex: " + e.what());
    }
  }
  if (!have_version) throw Error(ErrorKind::parse, origin + ": missing version line");
  return set;
}

PatternSet PatternSet::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot read pattern file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path.filename().string());
}

bool PatternSet::covers(std::string_view window, std::size_t begin, std::size_t end) const {
  const char* base = window.data();
  std::cmatch m;
  for (const auto& p : patterns_) {
    if (!std::regex_search(base, base + window.size(), p.search)) continue;
    for (std::size_t start = 0; start <= begin; ++start) {
      if (std::regex_search(base + start, base + window.size(), m, p.cover,
                            std::regex_constants::match_continuous) &&
          start + static_cast<std::size_t>(m.length(0)) >= end) {
        return true;
      }
    }
  }
  return false;
}

SuppressionList SuppressionList::parse(std::string_view text) {
  SuppressionList list;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw Error(ErrorKind::parse, "suppression line without tab: " + line);
    list.add(line.substr(0, tab), line.substr(tab + 1));
  }
  return list;
}

SuppressionList SuppressionList::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot read suppression list " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

void SuppressionList::add(std::string record_id, std::string dep_name) {
  entries_.emplace(std::move(record_id), std::move(dep_name));
}

bool SuppressionList::suppressed(const std::string& record_id, const std::string& dep_name) const {
  return entries_.contains({record_id, dep_name});
}

bool in_comment(std::string_view path, std::string_view text, std::size_t offset) {
  return inside(comment_ranges(path, text), offset);
}

std::vector<CodeDependencyHit> scan_code_dependencies(const corpus::CodeDocument& document,
                                                      const std::set<std::string>& malicious_names,
                                                      const PatternSet& patterns) {
  std::unordered_set<std::string> simple;
  std::vector<std::string> complex;
  for (const auto& n : malicious_names) {
    if (n.empty()) continue;
    if (is_simple_name(n)) {
      simple.insert(n);
    } else {
      complex.push_back(n);
    }
  }
  std::vector<CodeDependencyHit> hits;
  for (std::size_t i = 0; i < document.files.size(); ++i) {
    scan_file(document.files[i].relative_path, document.file_text(i), simple, complex, patterns, hits);
  }
  std::sort(hits.begin(), hits.end(), [](const auto& a, const auto& b) {
    return std::tie(a.file, a.offset, a.dep_name) < std::tie(b.file, b.offset, b.dep_name);
  });
  hits.erase(std::unique(hits.begin(), hits.end()), hits.end());
  return hits;
}

std::vector<KGEdge> build_dependency_edges(const std::vector<corpus::PackageRecord>& records,
                                           const std::vector<corpus::CodeDocument>& documents,
                                           const DependencyScanOptions& options,
                                           Diagnostics* diagnostics) {
  const PatternSet fallback = options.patterns ? PatternSet{} : PatternSet::defaults();
  const PatternSet& patterns = options.patterns ? *options.patterns : fallback;

  std::set<std::string> names;
  std::unordered_map<std::string, std::vector<const corpus::PackageRecord*>> by_name;
  std::unordered_map<std::string, const corpus::PackageRecord*> by_id;
  for (const auto& r : records) {
    names.insert(r.name);
    by_name[r.name].push_back(&r);
    by_id[r.record_id] = &r;
  }

  std::map<std::pair<std::string, std::string>, DependencyEvidence> found;
  auto link = [&](const corpus::PackageRecord& u, const std::string& dep, const DependencyLocus& locus) {
    auto it = by_name.find(dep);
    if (it == by_name.end() || dep == u.name) return;
    std::vector<const corpus::PackageRecord*> targets;
    for (auto* v : it->second) {
      if (v->ecosystem == u.ecosystem) targets.push_back(v);
    }
    if (targets.empty()) targets = it->second;
    for (auto* v : targets) {
      if (v->record_id == u.record_id) continue;
      auto& ev = found[{u.record_id, v->record_id}];
      ev.dep_name = dep;
      ev.loci.push_back(locus);
    }
  };

  for (const auto& u : records) {
    for (const auto& d : u.declared_deps) link(u, d.name, {DependencyLocus::Kind::manifest, {}, 0});
  }
  for (const auto& doc : documents) {
    auto owner = by_id.find(doc.record_id);
    if (owner == by_id.end()) {
      if (diagnostics) {
        diagnostics->push_back({Severity::warning, "orphan-document", doc.record_id,
                                "code document has no matching record"});
      }
      continue;
    }
    if (doc.code_empty()) continue;
    for (const auto& hit : scan_code_dependencies(doc, names, patterns)) {
      if (options.suppressions && options.suppressions->suppressed(doc.record_id, hit.dep_name)) {
        if (diagnostics) {
          diagnostics->push_back({Severity::info, "suppressed-dependency", doc.record_id,
                                  hit.dep_name + " at " + hit.file + ":" + std::to_string(hit.offset)});
        }
        continue;
      }
      link(*owner->second, hit.dep_name, {DependencyLocus::Kind::code, hit.file, hit.offset});
    }
  }

  std::vector<KGEdge> edges;
  edges.reserve(found.size());
  for (auto& [key, ev] : found) edges.push_back(make_edge(key.first, key.second, std::move(ev)));
  return edges;
}

}  // namespace osskg::edges
