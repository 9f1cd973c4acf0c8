#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <regex>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "osskg/corpus/record.hpp"
#include "osskg/corpus/source_tree.hpp"
#include "osskg/edges/edge.hpp"
#include "osskg/util/error.hpp"

namespace osskg::edges {

inline constexpr std::size_t kDependencyWindow = 100;

struct DependencyPattern {
  std::string id;
  std::string source;
  std::regex search;  // as written
  std::regex cover;   // lazy quantifiers made greedy; same language
};

/// Versioned set of import patterns. The defaults mirror the bundled
/// data/dependency_patterns.tsv.
class PatternSet {
 public:
  static constexpr int kFormatVersion = 1;

  static PatternSet defaults();
  /// Throws Error(version_mismatch) for an unknown version line and
  /// Error(parse) for malformed lines or invalid regexes.
  static PatternSet load(const std::filesystem::path& path);
  static PatternSet parse(std::string_view text, const std::string& origin = "<patterns>");

  const std::vector<DependencyPattern>& patterns() const noexcept { return patterns_; }

  /// True when some match of some pattern inside `window` spans
  /// [begin, end). A match merely elsewhere in the window does not count.
  bool covers(std::string_view window, std::size_t begin, std::size_t end) const;

 private:
  std::vector<DependencyPattern> patterns_;
};

/// Operator-maintained list of code-locus hits to ignore: `record_id<TAB>dep_name`.
class SuppressionList {
 public:
  static SuppressionList load(const std::filesystem::path& path);
  static SuppressionList parse(std::string_view text);
  void add(std::string record_id, std::string dep_name);
  bool suppressed(const std::string& record_id, const std::string& dep_name) const;
  std::size_t size() const noexcept { return entries_.size(); }

 private:
  std::set<std::pair<std::string, std::string>> entries_;
};

struct CodeDependencyHit {
  std::string dep_name;
  std::string file;
  std::size_t offset = 0;  // byte offset of the name inside `file`
  friend bool operator==(const CodeDependencyHit&, const CodeDependencyHit&) = default;
  friend auto operator<=>(const CodeDependencyHit&, const CodeDependencyHit&) = default;
};

/// True when `offset` of a file with this path sits in a comment: a line
/// starting with '#' (.py, .rb), '//' (.js), a /* */ block (.js), or a
/// =begin/=end block (.rb).
bool in_comment(std::string_view path, std::string_view text, std::size_t offset);

/// Finds every whole-token occurrence of a name (case-sensitive; token
/// characters are [A-Za-z0-9_-]) in each file of the document, keeps those
/// whose surrounding window passes the pattern gate and that are not in a
/// comment. Results are sorted by (file, offset, name).
std::vector<CodeDependencyHit> scan_code_dependencies(const corpus::CodeDocument& document,
                                                      const std::set<std::string>& malicious_names,
                                                      const PatternSet& patterns = PatternSet::defaults());

struct DependencyScanOptions {
  const PatternSet* patterns = nullptr;           // null: defaults
  const SuppressionList* suppressions = nullptr;  // null: none
};

/// Directed u -> v edges from declared dependencies (manifest locus) and code
/// hits (code locus). A name resolves to every record carrying it, restricted
/// to u's ecosystem when such records exist. Targets sharing u's name are
/// dropped. One edge per (u, v) with all loci.
std::vector<KGEdge> build_dependency_edges(const std::vector<corpus::PackageRecord>& records,
                                           const std::vector<corpus::CodeDocument>& documents,
                                           const DependencyScanOptions& options = {},
                                           Diagnostics* diagnostics = nullptr);

}  // namespace osskg::edges
