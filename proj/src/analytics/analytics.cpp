#include "osskg/analytics/analytics.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace osskg::analytics {
namespace {

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

template <typename Map>
std::vector<std::pair<std::string, std::size_t>> ranked(const Map& counts) {
  std::vector<std::pair<std::string, std::size_t>> out(counts.begin(), counts.end());
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  return out;
}

}  // namespace

std::vector<Subgraph> identity_groups(const KnowledgeGraph& graph) {
  return graph.connected_components(graph::EdgeKind::duplicated, true);
}

OverlapMatrix overlap_matrix(const KnowledgeGraph& graph) {
  std::map<std::string, std::size_t> sizes;
  for (const auto& [_, r] : graph.nodes()) ++sizes[r.source_id];
  OverlapMatrix m;
  std::map<std::string, std::size_t> index;
  for (const auto& [source, n] : sizes) {
    index[source] = m.sources.size();
    m.sources.push_back(source);
    m.source_sizes.push_back(n);
  }
  m.counts.assign(m.sources.size(), std::vector<std::size_t>(m.sources.size(), 0));
  for (const auto& group : graph.connected_components(graph::EdgeKind::duplicated)) {
    std::set<std::size_t> present;
    for (const auto& id : group.members) present.insert(index.at(graph.node(id).source_id));
    for (auto i = present.begin(); i != present.end(); ++i) {
      for (auto j = std::next(i); j != present.end(); ++j) {
        ++m.counts[*i][*j];
        ++m.counts[*j][*i];
      }
    }
  }
  return m;
}

Table to_table(const OverlapMatrix& m) {
  Table t;
  t.header = {"source", "size"};
  t.header.insert(t.header.end(), m.sources.begin(), m.sources.end());
  for (std::size_t i = 0; i < m.sources.size(); ++i) {
    std::vector<std::string> row{m.sources[i], std::to_string(m.source_sizes[i])};
    for (std::size_t j = 0; j < m.sources.size(); ++j) row.push_back(i == j ? "" : std::to_string(m.counts[i][j]));
    t.rows.push_back(std::move(row));
  }
  return t;
}

std::vector<OccurrenceRow> occurrence_counts(const KnowledgeGraph& graph) {
  std::map<std::string, std::map<std::size_t, std::size_t>> hist;
  for (const auto& group : identity_groups(graph)) {
    std::set<std::string> sources;
    for (const auto& id : group.members) sources.insert(graph.node(id).source_id);
    const auto eco = graph.node(group.members.front()).ecosystem.name();
    ++hist[eco][sources.size()];
    ++hist["\x7f" "all"][sources.size()];  // sorts last
  }
  std::vector<OccurrenceRow> rows;
  for (const auto& [eco, counts] : hist) {
    std::size_t total = 0;
    for (const auto& [_, n] : counts) total += n;
    std::size_t running = 0;
    for (const auto& [occ, n] : counts) {
      running += n;
      rows.push_back({eco == "\x7f" "all" ? "all" : eco, occ, n, ratio(running, total)});
    }
  }
  return rows;
}

Table occurrence_table(const std::vector<OccurrenceRow>& rows) {
  Table t{{"ecosystem", "occurrence", "groups", "cdf"}, {}};
  for (const auto& r : rows) {
    t.rows.push_back({r.ecosystem, std::to_string(r.occurrence), std::to_string(r.groups), fixed(r.cdf, 4)});
  }
  return t;
}

MissingRateReport missing_rates(const KnowledgeGraph& graph) {
  std::map<std::string, SourceMissingRate> per_source;
  for (const auto& group : identity_groups(graph)) {
    for (const auto& id : group.members) {
      const auto& r = graph.node(id);
      auto& s = per_source[r.source_id];
      s.source_id = r.source_id;
      ++s.total;
      if (r.available()) continue;
      ++s.missing;
      const bool supplied = std::any_of(group.members.begin(), group.members.end(), [&](const std::string& other) {
        const auto& o = graph.node(other);
        return o.available() && o.source_id != r.source_id;
      });
      if (!supplied) ++s.unsupplemented;
    }
  }
  MissingRateReport report;
  for (auto& [_, s] : per_source) {
    s.zero_denominator = s.total == 0;
    s.local_mr = ratio(s.missing, s.total);
    s.global_mr = ratio(s.unsupplemented, s.total);
    report.total += s.total;
    report.unsupplemented += s.unsupplemented;
    report.sources.push_back(s);
  }
  report.global_mr = ratio(report.unsupplemented, report.total);
  return report;
}

Table to_table(const MissingRateReport& r) {
  Table t{{"source", "total", "missing", "unsupplemented", "local_mr", "global_mr", "zero_denominator"}, {}};
  std::size_t missing = 0;
  for (const auto& s : r.sources) {
    missing += s.missing;
    t.rows.push_back({s.source_id, std::to_string(s.total), std::to_string(s.missing),
                      std::to_string(s.unsupplemented), fixed(100.0 * s.local_mr, 2), fixed(100.0 * s.global_mr, 2),
                      s.zero_denominator ? "true" : "false"});
  }
  t.rows.push_back({"all", std::to_string(r.total), std::to_string(missing), std::to_string(r.unsupplemented),
                    fixed(100.0 * ratio(missing, r.total), 2), fixed(100.0 * r.global_mr, 2),
                    r.total == 0 ? "true" : "false"});
  return t;
}

std::vector<SubgraphStatsRow> subgraph_stats(const KnowledgeGraph& graph, graph::EdgeKind kind) {
  std::map<std::string, std::vector<std::size_t>> sizes;
  std::vector<std::size_t> all;
  for (const auto& c : graph.connected_components(kind)) {
    if (c.size() < 2) continue;
    std::set<std::string> ecos;
    for (const auto& id : c.members) ecos.insert(graph.node(id).ecosystem.name());
    sizes[ecos.size() == 1 ? *ecos.begin() : "\x7f" "mixed"].push_back(c.size());
    all.push_back(c.size());
  }
  auto row = [](std::string name, const std::vector<std::size_t>& v) {
    SubgraphStatsRow r;
    r.ecosystem = std::move(name);
    r.count = v.size();
    for (auto s : v) {
      r.packages += s;
      r.max_size = std::max(r.max_size, s);
    }
    r.avg_size = ratio(r.packages, r.count);
    return r;
  };
  std::vector<SubgraphStatsRow> rows;
  for (const auto& [eco, v] : sizes) rows.push_back(row(eco == "\x7f" "mixed" ? "mixed" : eco, v));
  rows.push_back(row("all", all));
  return rows;
}

Table subgraph_table(const std::vector<SubgraphStatsRow>& rows) {
  Table t{{"ecosystem", "subgraphs", "avg_size", "max_size", "packages"}, {}};
  for (const auto& r : rows) {
    t.rows.push_back({r.ecosystem, std::to_string(r.count), fixed(r.avg_size, 2), std::to_string(r.max_size),
                      std::to_string(r.packages)});
  }
  return t;
}

std::vector<ReuseRow> dependency_reuse_counts(const KnowledgeGraph& graph) {
  std::map<std::string, std::size_t> in_degree;
  for (const auto& e : graph.edges(graph::EdgeKind::dependency)) ++in_degree[e.v];
  std::vector<ReuseRow> rows;
  for (const auto& [id, n] : in_degree) {
    if (n < 2) continue;
    const auto& r = graph.node(id);
    rows.push_back({id, r.name, r.ecosystem.name(), n});
  }
  std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.in_degree > b.in_degree; });
  return rows;
}

Table reuse_table(const std::vector<ReuseRow>& rows) {
  Table t{{"record_id", "name", "ecosystem", "in_degree"}, {}};
  for (const auto& r : rows) t.rows.push_back({r.record_id, r.name, r.ecosystem, std::to_string(r.in_degree)});
  return t;
}

IocRanking ioc_rankings(const std::vector<reports::SecurityReport>& reports) {
  std::map<std::string, std::size_t> domains, urls, ips, shells;
  IocRanking out;
  for (const auto& report : reports) {
    std::set<reports::IoC> unique(report.iocs.begin(), report.iocs.end());
    std::set<std::string> report_domains;
    for (const auto& ioc : unique) {
      switch (ioc.kind) {
        case reports::IoCKind::ip:
          ++ips[ioc.value];
          ++out.ip_total;
          break;
        case reports::IoCKind::url:
          ++urls[ioc.value];
          ++out.url_total;
          if (ioc.domain) report_domains.insert(*ioc.domain);
          break;
        case reports::IoCKind::powershell:
          ++shells[ioc.value];
          ++out.powershell_total;
          break;
      }
    }
    for (const auto& d : report_domains) ++domains[d];
  }
  out.domains = ranked(domains);
  out.urls = ranked(urls);
  out.ips = ranked(ips);
  out.powershell = ranked(shells);
  return out;
}

Table to_table(const IocRanking& r) {
  Table t{{"kind", "value", "count"}, {}};
  t.rows.push_back({"total", "url", std::to_string(r.url_total)});
  t.rows.push_back({"total", "ip", std::to_string(r.ip_total)});
  t.rows.push_back({"total", "powershell", std::to_string(r.powershell_total)});
  auto add = [&](const char* kind, const auto& list) {
    for (const auto& [value, n] : list) t.rows.push_back({kind, value, std::to_string(n)});
  };
  add("domain", r.domains);
  add("url", r.urls);
  add("ip", r.ips);
  add("powershell", r.powershell);
  return t;
}

ReleaseTimeline release_timeline(const std::vector<corpus::PackageRecord>& records, TimelineBucketing bucketing) {
  std::map<std::string, TimelineBucket> buckets;
  ReleaseTimeline out;
  for (const auto& r : records) {
    if (!r.release_time) {
      ++out.excluded;
      if (!r.available()) ++out.excluded_unavailable;
      continue;
    }
    const auto key = bucketing == TimelineBucketing::month ? month_bucket(*r.release_time) : year_bucket(*r.release_time);
    auto& b = buckets[key];
    b.bucket = key;
    ++b.all;
    if (!r.available()) ++b.unavailable;
  }
  for (auto& [_, b] : buckets) out.buckets.push_back(b);
  return out;
}

Table to_table(const ReleaseTimeline& t) {
  Table table{{"bucket", "all", "unavailable"}, {}};
  for (const auto& b : t.buckets) table.rows.push_back({b.bucket, std::to_string(b.all), std::to_string(b.unavailable)});
  if (t.excluded > 0) table.rows.push_back({"unknown", std::to_string(t.excluded), std::to_string(t.excluded_unavailable)});
  return table;
}

}  // namespace osskg::analytics
