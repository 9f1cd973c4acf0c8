#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "osskg/edges/edge.hpp"
#include "osskg/edges/similar.hpp"
#include "osskg/fingerprint/embedding.hpp"

namespace osskg::cli {

namespace fs = std::filesystem;

struct CommonOptions {
  fs::path workspace;
  std::uint64_t seed = 42;
  unsigned threads = 0;  // 0: hardware concurrency
};

struct IngestOptions {
  CommonOptions common;
  std::vector<fs::path> catalogs;
  std::optional<fs::path> archives;
  std::optional<fs::path> reports;
  std::optional<fs::path> benign;           // catalog of legitimate packages
  std::optional<fs::path> benign_archives;  // defaults to `archives`
};

struct GraphOptions {
  CommonOptions common;
  std::set<edges::EdgeKind> kinds{edges::kAllEdgeKinds, edges::kAllEdgeKinds + 4};
  std::optional<fs::path> suppressions;
  std::optional<fs::path> patterns;
  fingerprint::FingerprintConfig fingerprint;
  edges::ClusterConfig cluster;
};

/// One of: overlap, missing, occurrences, subgraphs, ops, active, dep-reuse,
/// ioc, timeline, all.
struct AnalyzeOptions {
  CommonOptions common;
  std::string analysis;
  std::vector<edges::EdgeKind> kinds;  // empty: the analysis' default kinds
  std::optional<fs::path> out;         // defaults to <workspace>/out
};

struct DetectOptions {
  CommonOptions common;
  edges::EdgeKind clusters_from = edges::EdgeKind::similar;
  std::size_t n_clusters = 2;
  std::size_t iterations = 50;
  std::vector<std::string> models{"knn", "linear"};
  std::optional<fs::path> out;
};

struct ExportOptions {
  CommonOptions common;
  fs::path bundle;
};

void cmd_ingest(const IngestOptions& options, std::ostream& log);
void cmd_graph_build(const GraphOptions& options, std::ostream& log);
void cmd_analyze(const AnalyzeOptions& options, std::ostream& log);
void cmd_detect_eval(const DetectOptions& options, std::ostream& log);
void cmd_export(const ExportOptions& options, std::ostream& log);

}  // namespace osskg::cli
