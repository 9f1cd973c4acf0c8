#include "osskg/edges/edge.hpp"

#include <algorithm>
#include <stdexcept>

namespace osskg::edges {
namespace {

template <typename T>
void sorted_union(std::vector<T>& into, const std::vector<T>& from) {
  into.insert(into.end(), from.begin(), from.end());
  std::sort(into.begin(), into.end());
  into.erase(std::unique(into.begin(), into.end()), into.end());
}

}  // namespace

std::string_view to_string(EdgeKind kind) noexcept {
  switch (kind) {
    case EdgeKind::duplicated: return "duplicated";
    case EdgeKind::similar: return "similar";
    case EdgeKind::dependency: return "dependency";
    case EdgeKind::coexisting: return "coexisting";
  }
  return "unknown";
}

std::optional<EdgeKind> parse_edge_kind(std::string_view t) {
  if (t == "duplicated" || t == "dup") return EdgeKind::duplicated;
  if (t == "similar" || t == "sim") return EdgeKind::similar;
  if (t == "dependency" || t == "dep") return EdgeKind::dependency;
  if (t == "coexisting" || t == "coex") return EdgeKind::coexisting;
  return std::nullopt;
}

KGEdge make_edge(std::string u, std::string v, Evidence evidence) {
  KGEdge e{std::move(u), std::move(v), std::move(evidence)};
  if (auto* dep = std::get_if<DependencyEvidence>(&e.evidence)) {
    std::sort(dep->loci.begin(), dep->loci.end());
    dep->loci.erase(std::unique(dep->loci.begin(), dep->loci.end()), dep->loci.end());
  } else {
    if (e.v < e.u) std::swap(e.u, e.v);
    if (auto* co = std::get_if<CoexistingEvidence>(&e.evidence)) {
      std::sort(co->report_ids.begin(), co->report_ids.end());
      co->report_ids.erase(std::unique(co->report_ids.begin(), co->report_ids.end()), co->report_ids.end());
    }
  }
  return e;
}

void merge_evidence(Evidence& into, const Evidence& from) {
  if (into.index() != from.index()) throw std::invalid_argument("cannot merge evidence of different kinds");
  if (auto* dep = std::get_if<DependencyEvidence>(&into)) {
    sorted_union(dep->loci, std::get<DependencyEvidence>(from).loci);
  } else if (auto* co = std::get_if<CoexistingEvidence>(&into)) {
    const auto& other = std::get<CoexistingEvidence>(from);
    sorted_union(co->report_ids, other.report_ids);
    co->cross_ecosystem = co->cross_ecosystem || other.cross_ecosystem;
  }
}

}  // namespace osskg::edges
