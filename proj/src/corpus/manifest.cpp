#include "osskg/corpus/manifest.hpp"

#include <algorithm>
#include <functional>
#include <regex>
#include <set>

#include <nlohmann/json.hpp>

#include "osskg/corpus/archive.hpp"

namespace fs = std::filesystem;

namespace osskg::corpus {
namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> lines_of(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    auto line = text.substr(pos, nl - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    out.push_back(line);
    pos = nl + 1;
  }
  return out;
}

std::string unquote(std::string_view s) {
  s = trim(s);
  if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front()) {
    s = s.substr(1, s.size() - 2);
  }
  return std::string(s);
}

bool is_name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '_' || c == '-';
}

// Shallowest path whose file name satisfies `match`; ties broken by path.
std::optional<fs::path> find_shallowest(const fs::path& tree,
                                        const std::function<bool(const std::string&)>& match) {
  std::optional<std::pair<std::size_t, std::string>> best;
  std::error_code ec;
  for (auto it = fs::recursive_directory_iterator(tree, ec); it != fs::recursive_directory_iterator();
       it.increment(ec)) {
    if (ec) break;
    if (!it->is_regular_file() || it->is_symlink()) continue;
    if (!match(it->path().filename().string())) continue;
    const std::string rel = fs::relative(it->path(), tree).generic_string();
    const std::size_t depth = static_cast<std::size_t>(std::count(rel.begin(), rel.end(), '/'));
    std::pair<std::size_t, std::string> key{depth, rel};
    if (!best || key < *best) best = key;
  }
  if (!best) return std::nullopt;
  return tree / fs::path(best->second);
}

void append_unique(std::vector<Dependency>& out, std::set<Dependency>& seen,
                   const std::vector<Dependency>& more) {
  for (const auto& d : more) {
    if (seen.insert(d).second) out.push_back(d);
  }
}

}  // namespace

std::optional<Dependency> parse_requirement(std::string_view line) {
  if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
  line = trim(line);
  if (line.empty() || line.front() == '-') return std::nullopt;
  std::size_t i = 0;
  while (i < line.size() && is_name_char(line[i])) ++i;
  if (i == 0) return std::nullopt;
  Dependency dep{std::string(line.substr(0, i)), {}};
  std::string_view rest = trim(line.substr(i));
  if (!rest.empty() && rest.front() == '[') {
    const auto close = rest.find(']');
    rest = close == std::string_view::npos ? std::string_view{} : trim(rest.substr(close + 1));
  }
  if (auto semi = rest.find(';'); semi != std::string_view::npos) rest = trim(rest.substr(0, semi));
  if (rest.size() >= 2 && rest.front() == '(' && rest.back() == ')') {
    rest = trim(rest.substr(1, rest.size() - 2));
  }
  dep.constraint = std::string(rest);
  return dep;
}

std::vector<Dependency> parse_package_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::parse, std::string("package.json: ") + e.what());
  }
  std::vector<Dependency> out;
  if (!j.is_object()) throw Error(ErrorKind::parse, "package.json: top level is not an object");
  auto it = j.find("dependencies");
  if (it == j.end() || it->is_null()) return out;
  if (!it->is_object()) throw Error(ErrorKind::parse, "package.json: dependencies is not an object");
  for (const auto& [name, value] : it->items()) {
    out.push_back({name, value.is_string() ? value.get<std::string>() : value.dump()});
  }
  return out;
}

std::vector<Dependency> parse_requirements_txt(std::string_view text) {
  std::vector<Dependency> out;
  for (auto line : lines_of(text)) {
    if (auto dep = parse_requirement(line)) out.push_back(*dep);
  }
  return out;
}

std::vector<Dependency> parse_setup_py(std::string_view text) {
  static const std::regex list_re(R"(install_requires\s*=\s*[\[(]([^\])]*)[\])])");
  static const std::regex str_re(R"((['"])([^'"]*)\1)");
  std::vector<Dependency> out;
  const std::string s(text);
  for (std::sregex_iterator it(s.begin(), s.end(), list_re), end; it != end; ++it) {
    const std::string body = (*it)[1].str();
    for (std::sregex_iterator st(body.begin(), body.end(), str_re); st != end; ++st) {
      if (auto dep = parse_requirement((*st)[2].str())) out.push_back(*dep);
    }
  }
  return out;
}

std::vector<Dependency> parse_setup_cfg(std::string_view text) {
  std::vector<Dependency> out;
  bool in_options = false;
  bool in_list = false;
  for (auto line : lines_of(text)) {
    const auto t = trim(line);
    if (!t.empty() && t.front() == '[') {
      in_options = t == "[options]";
      in_list = false;
      continue;
    }
    if (!in_options) continue;
    const bool indented = !line.empty() && (line.front() == ' ' || line.front() == '\t');
    if (in_list && indented) {
      if (auto dep = parse_requirement(t)) out.push_back(*dep);
      continue;
    }
    in_list = false;
    if (t.starts_with("install_requires")) {
      const auto eq = t.find_first_of("=:");
      if (eq == std::string_view::npos) continue;
      in_list = true;
      if (auto dep = parse_requirement(t.substr(eq + 1))) out.push_back(*dep);
    }
  }
  return out;
}

std::vector<Dependency> parse_pkg_info(std::string_view text) {
  std::vector<Dependency> out;
  for (auto line : lines_of(text)) {
    if (line.empty()) break;  // headers end at the first blank line
    if (!line.starts_with("Requires-Dist:")) continue;
    const auto value = trim(line.substr(14));
    if (value.find("extra ==") != std::string_view::npos) continue;
    if (auto dep = parse_requirement(value)) out.push_back(*dep);
  }
  return out;
}

std::vector<Dependency> parse_gemspec(std::string_view text) {
  static const std::regex call_re(R"(\.add_(runtime_)?dependency\b\s*\(?\s*(.*))");
  static const std::regex str_re(R"((['"])([^'"]*)\1)");
  std::vector<Dependency> out;
  for (auto line : lines_of(text)) {
    const auto t = trim(line);
    if (t.starts_with("#")) continue;
    const std::string s(t);
    std::smatch m;
    if (!std::regex_search(s, m, call_re)) continue;
    const std::string args = m[2].str();
    std::vector<std::string> strings;
    for (std::sregex_iterator it(args.begin(), args.end(), str_re), end; it != end; ++it) {
      strings.push_back((*it)[2].str());
    }
    if (strings.empty() || strings[0].empty()) continue;
    Dependency dep{strings[0], {}};
    for (std::size_t i = 1; i < strings.size(); ++i) {
      if (!dep.constraint.empty()) dep.constraint += ", ";
      dep.constraint += strings[i];
    }
    out.push_back(std::move(dep));
  }
  return out;
}

std::vector<Dependency> parse_gem_metadata(std::string_view text) {
  std::vector<Dependency> out;
  bool in_deps = false;
  struct Pending {
    std::string name;
    std::string type = "runtime";
    std::vector<std::string> requirements;
    std::string op;
  };
  std::optional<Pending> cur;
  auto flush = [&] {
    if (cur && !cur->name.empty() && cur->type == "runtime") {
      Dependency dep{cur->name, {}};
      for (const auto& r : cur->requirements) {
        if (r == ">= 0") continue;
        if (!dep.constraint.empty()) dep.constraint += ", ";
        dep.constraint += r;
      }
      out.push_back(std::move(dep));
    }
    cur.reset();
  };
  for (auto line : lines_of(text)) {
    if (line.starts_with("dependencies:")) {
      in_deps = true;
      continue;
    }
    if (!in_deps) continue;
    if (line.starts_with("- ")) {
      flush();
      cur.emplace();
      continue;
    }
    if (!line.empty() && line.front() != ' ' && line.front() != '-') {
      flush();
      in_deps = false;
      continue;
    }
    if (!cur) continue;
    const auto t = trim(line);
    if (line.starts_with("  name:")) {
      cur->name = unquote(t.substr(5));
    } else if (line.starts_with("  type:")) {
      std::string type = unquote(t.substr(5));
      if (!type.empty() && type.front() == ':') type.erase(0, 1);
      cur->type = type;
    } else if (t.starts_with("- - ")) {
      cur->op = unquote(t.substr(4));
    } else if (t.starts_with("version:") && !cur->op.empty()) {
      cur->requirements.push_back(cur->op + " " + unquote(t.substr(8)));
      cur->op.clear();
    }
  }
  flush();
  return out;
}

std::vector<Dependency> parse_manifest(const fs::path& tree, const Ecosystem& ecosystem,
                                       Diagnostics* diagnostics) {
  std::vector<Dependency> out;
  std::set<Dependency> seen;
  auto run = [&](const std::optional<fs::path>& file,
                 const std::function<std::vector<Dependency>(std::string_view)>& parser) {
    if (!file) return;
    try {
      append_unique(out, seen, parser(read_file_bytes(*file)));
    } catch (const std::exception& e) {
      if (diagnostics) {
        diagnostics->push_back({Severity::warning, "malformed-manifest",
                                fs::relative(*file, tree).generic_string(), e.what()});
      }
    }
  };
  auto named = [](std::string want) {
    return [want = std::move(want)](const std::string& n) { return n == want; };
  };
  switch (ecosystem.kind()) {
    case Ecosystem::Kind::npm:
      run(find_shallowest(tree, named("package.json")), parse_package_json);
      break;
    case Ecosystem::Kind::pypi:
      run(find_shallowest(tree, [](const std::string& n) {
            return n == "requirements.txt" || n == "requirement.txt";
          }),
          parse_requirements_txt);
      run(find_shallowest(tree, named("setup.py")), parse_setup_py);
      run(find_shallowest(tree, named("setup.cfg")), parse_setup_cfg);
      run(find_shallowest(tree, [](const std::string& n) { return n == "PKG-INFO" || n == "METADATA"; }),
          parse_pkg_info);
      break;
    case Ecosystem::Kind::rubygems:
      run(find_shallowest(tree, [](const std::string& n) { return n.ends_with(".gemspec"); }),
          parse_gemspec);
      run(find_shallowest(tree, named(std::string(kGemMetadataFile))), parse_gem_metadata);
      break;
    case Ecosystem::Kind::other:
      break;
  }
  return out;
}

}  // namespace osskg::corpus
