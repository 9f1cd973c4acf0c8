#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "osskg/corpus/record.hpp"
#include "osskg/edges/edge.hpp"

namespace osskg::graph {

using edges::EdgeKind;

/// Connected component under one edge kind. Members are sorted.
struct Subgraph {
  EdgeKind kind = EdgeKind::duplicated;
  std::vector<std::string> members;
  std::optional<Timestamp> t_first;  // earliest member release_time
  std::optional<Timestamp> t_last;
  std::size_t size() const noexcept { return members.size(); }
  friend bool operator==(const Subgraph&, const Subgraph&) = default;
};

class KnowledgeGraph {
 public:
  /// Idempotent. Throws Error(duplicate_id) when a different record with the
  /// same id is already present.
  const std::string& add_node(const corpus::PackageRecord& record);

  /// Endpoints must exist (Error(dangling_endpoint)); u == v is rejected
  /// (Error(validation)). Re-adding an edge merges its evidence.
  void add_edge(const edges::KGEdge& edge);

  bool has_node(const std::string& id) const { return nodes_.contains(id); }
  const corpus::PackageRecord& node(const std::string& id) const;
  const std::map<std::string, corpus::PackageRecord>& nodes() const noexcept { return nodes_; }
  std::vector<corpus::PackageRecord> records() const;

  std::size_t node_count() const noexcept { return nodes_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  std::size_t edge_count(EdgeKind kind) const;

  /// Edges ordered by (kind, u, v).
  std::vector<edges::KGEdge> edges() const;
  std::vector<edges::KGEdge> edges(EdgeKind kind) const;

  /// Maximal components among nodes with at least one edge of `kind`
  /// (direction ignored). With include_isolated every other node becomes a
  /// singleton component. Sorted by smallest member.
  std::vector<Subgraph> connected_components(EdgeKind kind, bool include_isolated = false) const;

  friend bool operator==(const KnowledgeGraph&, const KnowledgeGraph&) = default;

 private:
  using EdgeKey = std::tuple<int, std::string, std::string>;
  std::map<std::string, corpus::PackageRecord> nodes_;
  std::map<EdgeKey, edges::Evidence> edges_;
};

inline constexpr std::string_view kGraphFormat = "osskg-graph";
inline constexpr int kGraphVersion = 1;

/// Line-delimited form: header, nodes in id order, edges in (kind, u, v)
/// order. Byte-stable for equal graphs.
std::string serialize_graph(const KnowledgeGraph& graph);

/// Throws Error(version_mismatch) for a foreign header and Error(parse)
/// naming the 1-based line of any malformed or dangling entry.
KnowledgeGraph parse_graph(std::string_view text);

void export_graph(const KnowledgeGraph& graph, const std::filesystem::path& path);
KnowledgeGraph import_graph(const std::filesystem::path& path);

}  // namespace osskg::graph
