#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "osskg/corpus/record.hpp"
#include "osskg/corpus/source_tree.hpp"
#include "osskg/util/error.hpp"

namespace osskg::cli {

inline constexpr std::string_view kWorkspaceFormat = "osskg-workspace";
inline constexpr int kWorkspaceVersion = 1;

/// Directory layout shared by every command:
///   manifest.json  config, seed and per-stage summaries
///   catalogs/      normalized catalogs, one <source>.jsonl per source
///   archives/      copies of the ingested archives
///   documents/     code documents, benign corpus, ingest diagnostics
///   reports/       copies of the security-report files
///   graph/         graph.osskg, clusters.jsonl, diagnostics.txt
///   out/           analytics tables and detection metrics
class Workspace {
 public:
  explicit Workspace(std::filesystem::path root);

  const std::filesystem::path& root() const noexcept { return root_; }
  std::filesystem::path catalogs() const { return root_ / "catalogs"; }
  std::filesystem::path archives() const { return root_ / "archives"; }
  std::filesystem::path documents() const { return root_ / "documents"; }
  std::filesystem::path reports() const { return root_ / "reports"; }
  std::filesystem::path graph_dir() const { return root_ / "graph"; }
  std::filesystem::path out() const { return root_ / "out"; }
  std::filesystem::path manifest_path() const { return root_ / "manifest.json"; }
  std::filesystem::path graph_file() const { return graph_dir() / "graph.osskg"; }
  std::filesystem::path clusters_file() const { return graph_dir() / "clusters.jsonl"; }
  std::filesystem::path code_documents_file() const { return documents() / "code_documents.jsonl"; }
  std::filesystem::path benign_catalog_file() const { return documents() / "benign_catalog.jsonl"; }
  std::filesystem::path benign_documents_file() const { return documents() / "benign_documents.jsonl"; }

  void create_layout() const;
  bool initialized() const;

  /// Throws Error(stage_order) when the workspace has no manifest and
  /// Error(version_mismatch) for a foreign format or version.
  nlohmann::ordered_json load_manifest() const;
  void save_manifest(const nlohmann::ordered_json& manifest) const;

  /// Throws Error(stage_order) unless `stage` was recorded as completed.
  void require_stage(std::string_view stage, std::string_view needed_by) const;

 private:
  std::filesystem::path root_;
};

/// Exclusive lock on a workspace: `.lock` created with O_EXCL, removed on
/// destruction. Throws Error(locked) if another command holds it.
class WorkspaceLock {
 public:
  explicit WorkspaceLock(const std::filesystem::path& root);
  ~WorkspaceLock();
  WorkspaceLock(const WorkspaceLock&) = delete;
  WorkspaceLock& operator=(const WorkspaceLock&) = delete;

 private:
  std::filesystem::path path_;
};

/// Writes to a sibling temporary file and renames it over `path`.
void atomic_write(const std::filesystem::path& path, std::string_view content);

std::string document_to_json_line(const corpus::CodeDocument& doc);
std::string serialize_documents(const std::vector<corpus::CodeDocument>& docs);
std::vector<corpus::CodeDocument> read_documents(const std::filesystem::path& path);

/// Every catalogs/*.jsonl in name order, records concatenated.
std::vector<corpus::PackageRecord> read_catalog_dir(const std::filesystem::path& dir);
std::vector<corpus::PackageRecord> read_records(const std::filesystem::path& jsonl);
std::string serialize_records(const std::vector<corpus::PackageRecord>& records);

std::string serialize_diagnostics(const Diagnostics& diagnostics);

}  // namespace osskg::cli
