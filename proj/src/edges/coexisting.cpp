#include "osskg/edges/coexisting.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <tuple>

namespace osskg::edges {
namespace {

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
         });
}

void sort_edges(std::vector<KGEdge>& edges) {
  std::sort(edges.begin(), edges.end(),
            [](const KGEdge& x, const KGEdge& y) { return std::tie(x.u, x.v) < std::tie(y.u, y.v); });
}

}  // namespace

std::vector<std::string> resolve_mention(const reports::PackageMention& mention,
                                         const std::vector<corpus::PackageRecord>& records) {
  auto collect = [&](bool exact) {
    std::vector<std::string> ids;
    for (const auto& r : records) {
      if (mention.ecosystem && r.ecosystem != *mention.ecosystem) continue;
      if (mention.version && r.version != *mention.version) continue;
      if (exact ? r.name == mention.name : iequals(r.name, mention.name)) ids.push_back(r.record_id);
    }
    return ids;
  };
  auto ids = collect(true);
  if (ids.empty()) ids = collect(false);
  std::sort(ids.begin(), ids.end());
  return ids;
}

std::vector<KGEdge> link_report_packages(const reports::SecurityReport& report,
                                         const std::vector<corpus::PackageRecord>& records,
                                         MentionResolution* stats) {
  std::set<std::string> resolved;
  for (const auto& m : report.mentioned_packages) {
    const auto ids = resolve_mention(m, records);
    if (stats) ++(ids.empty() ? stats->unresolved : stats->resolved);
    resolved.insert(ids.begin(), ids.end());
  }
  std::map<std::string, const corpus::PackageRecord*> by_id;
  for (const auto& r : records) {
    if (resolved.contains(r.record_id)) by_id.emplace(r.record_id, &r);
  }
  std::vector<KGEdge> edges;
  for (auto a = by_id.begin(); a != by_id.end(); ++a) {
    for (auto b = std::next(a); b != by_id.end(); ++b) {
      const bool cross = a->second->ecosystem != b->second->ecosystem;
      edges.push_back(make_edge(a->first, b->first, CoexistingEvidence{{report.report_id}, cross}));
    }
  }
  sort_edges(edges);
  return edges;
}

std::vector<KGEdge> build_coexisting_edges(const std::vector<reports::SecurityReport>& reports,
                                           const std::vector<corpus::PackageRecord>& records,
                                           MentionResolution* stats) {
  std::map<std::pair<std::string, std::string>, KGEdge> merged;
  for (const auto& report : reports) {
    for (auto& e : link_report_packages(report, records, stats)) {
      auto [it, inserted] = merged.try_emplace({e.u, e.v}, e);
      if (!inserted) merge_evidence(it->second.evidence, e.evidence);
    }
  }
  std::vector<KGEdge> edges;
  for (auto& [_, e] : merged) edges.push_back(std::move(e));
  return edges;
}

}  // namespace osskg::edges
