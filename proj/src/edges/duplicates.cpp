#include "osskg/edges/duplicates.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>

namespace osskg::edges {

std::vector<KGEdge> build_duplicated_edges(const std::vector<corpus::PackageRecord>& records,
                                           Diagnostics* diagnostics) {
  using Key = std::tuple<std::string, std::string, std::string>;
  std::map<Key, std::vector<const corpus::PackageRecord*>> groups;
  for (const auto& r : records) groups[{r.ecosystem.name(), r.name, r.version}].push_back(&r);

  std::vector<KGEdge> edges;
  for (auto& [key, members] : groups) {
    if (members.size() < 2) continue;
    std::sort(members.begin(), members.end(),
              [](auto* a, auto* b) { return a->record_id < b->record_id; });
    std::set<std::string> digests;
    for (auto* m : members) {
      if (m->sha256) digests.insert(*m->sha256);
    }
    const bool ambiguous = digests.size() > 1;
    if (ambiguous && diagnostics) {
      for (auto* m : members) {
        if (!m->sha256) {
          diagnostics->push_back({Severity::warning, "ambiguous-duplicate", m->record_id,
                                  "unhashed record matches " + std::to_string(digests.size()) +
                                      " distinct digests for " + std::get<1>(key) + "@" +
                                      std::get<2>(key) + "; left unlinked"});
        }
      }
    }
    for (std::size_t i = 0; i < members.size(); ++i) {
      for (std::size_t j = i + 1; j < members.size(); ++j) {
        const auto& a = *members[i];
        const auto& b = *members[j];
        if (a.source_id == b.source_id) continue;
        if (a.sha256 && b.sha256) {
          if (*a.sha256 == *b.sha256) {
            edges.push_back(make_edge(a.record_id, b.record_id,
                                      DuplicatedEvidence{DuplicateBasis::name_version_hash}));
          } else if (diagnostics) {
            diagnostics->push_back({Severity::warning, "hash-conflict", a.record_id + "," + b.record_id,
                                    a.name + "@" + a.version + " has different digests in " +
                                        a.source_id + " and " + b.source_id});
          }
        } else if (!ambiguous) {
          edges.push_back(
              make_edge(a.record_id, b.record_id, DuplicatedEvidence{DuplicateBasis::name_version}));
        }
      }
    }
  }
  std::sort(edges.begin(), edges.end(),
            [](const KGEdge& x, const KGEdge& y) { return std::tie(x.u, x.v) < std::tie(y.u, y.v); });
  return edges;
}

}  // namespace osskg::edges
