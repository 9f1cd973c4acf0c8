#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace osskg::edges {

enum class EdgeKind { duplicated = 0, similar = 1, dependency = 2, coexisting = 3 };

inline constexpr EdgeKind kAllEdgeKinds[] = {EdgeKind::duplicated, EdgeKind::similar,
                                             EdgeKind::dependency, EdgeKind::coexisting};

std::string_view to_string(EdgeKind kind) noexcept;
/// Accepts the full names and the short forms dup, sim, dep, coex.
std::optional<EdgeKind> parse_edge_kind(std::string_view text);

enum class DuplicateBasis { name_version, name_version_hash };

struct DuplicatedEvidence {
  DuplicateBasis basis = DuplicateBasis::name_version;
  friend bool operator==(const DuplicatedEvidence&, const DuplicatedEvidence&) = default;
};

struct SimilarEvidence {
  std::size_t cluster_id = 0;
  double cosine = 0.0;
  friend bool operator==(const SimilarEvidence&, const SimilarEvidence&) = default;
};

struct DependencyLocus {
  enum class Kind { manifest, code };
  Kind kind = Kind::manifest;
  std::string file;         // code loci only
  std::size_t offset = 0;   // byte offset inside `file`
  friend bool operator==(const DependencyLocus&, const DependencyLocus&) = default;
  friend auto operator<=>(const DependencyLocus&, const DependencyLocus&) = default;
};

struct DependencyEvidence {
  std::string dep_name;
  std::vector<DependencyLocus> loci;  // sorted, unique
  friend bool operator==(const DependencyEvidence&, const DependencyEvidence&) = default;
};

struct CoexistingEvidence {
  std::vector<std::string> report_ids;  // sorted, unique
  bool cross_ecosystem = false;
  friend bool operator==(const CoexistingEvidence&, const CoexistingEvidence&) = default;
};

/// Alternative index equals the EdgeKind value.
using Evidence = std::variant<DuplicatedEvidence, SimilarEvidence, DependencyEvidence, CoexistingEvidence>;

/// Typed relation between two packages. Dependency edges are directed
/// (u depends on v); every other kind is stored with u < v.
struct KGEdge {
  std::string u;
  std::string v;
  Evidence evidence;

  EdgeKind kind() const noexcept { return static_cast<EdgeKind>(evidence.index()); }
  bool directed() const noexcept { return kind() == EdgeKind::dependency; }

  friend bool operator==(const KGEdge&, const KGEdge&) = default;
};

/// Builds an edge, swapping endpoints into canonical order for undirected kinds.
KGEdge make_edge(std::string u, std::string v, Evidence evidence);

/// Folds `from` into `into` (same kind): loci and report ids are unioned;
/// scalar evidence keeps the existing value.
void merge_evidence(Evidence& into, const Evidence& from);

}  // namespace osskg::edges
