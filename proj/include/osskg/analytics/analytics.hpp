#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "osskg/analytics/table.hpp"
#include "osskg/corpus/source_tree.hpp"
#include "osskg/graph/graph.hpp"
#include "osskg/reports/report.hpp"

namespace osskg::analytics {

using graph::KnowledgeGraph;
using graph::Subgraph;

// ---- overlap and occurrence -------------------------------------------------

/// counts[i][j] = identity groups holding records of both sources i and j.
/// The diagonal is unused and stays 0.
struct OverlapMatrix {
  std::vector<std::string> sources;  // sorted source ids
  std::vector<std::size_t> source_sizes;
  std::vector<std::vector<std::size_t>> counts;
};

OverlapMatrix overlap_matrix(const KnowledgeGraph& graph);
Table to_table(const OverlapMatrix& m);

/// Components under duplicated edges, every node included (singletons too).
std::vector<Subgraph> identity_groups(const KnowledgeGraph& graph);

struct OccurrenceRow {
  std::string ecosystem;  // or "all"
  std::size_t occurrence = 0;  // distinct sources in the identity group
  std::size_t groups = 0;
  double cdf = 0.0;
};

/// Histogram and CDF of occurrence per ecosystem, then the "all" rows.
std::vector<OccurrenceRow> occurrence_counts(const KnowledgeGraph& graph);
Table occurrence_table(const std::vector<OccurrenceRow>& rows);

// ---- missing rates ------------------------------------------------------------

struct SourceMissingRate {
  std::string source_id;
  std::size_t total = 0;
  std::size_t missing = 0;
  std::size_t unsupplemented = 0;  // missing and not available elsewhere
  double local_mr = 0.0;
  double global_mr = 0.0;
  bool zero_denominator = false;
};

struct MissingRateReport {
  std::vector<SourceMissingRate> sources;  // sorted by source id
  std::size_t total = 0;
  std::size_t unsupplemented = 0;
  double global_mr = 0.0;
};

/// local = missing / total per source. A missing record contributes 0 to its
/// source's global numerator when its identity group holds an available
/// record from another source, else 1.
MissingRateReport missing_rates(const KnowledgeGraph& graph);
Table to_table(const MissingRateReport& r);

// ---- subgraphs ----------------------------------------------------------------

struct SubgraphStatsRow {
  std::string ecosystem;  // an ecosystem name, "mixed", or "all"
  std::size_t count = 0;
  double avg_size = 0.0;
  std::size_t max_size = 0;
  std::size_t packages = 0;
};

/// Components of size >= 2 per member ecosystem; components spanning more
/// than one ecosystem go to "mixed". Ends with the "all" row.
std::vector<SubgraphStatsRow> subgraph_stats(const KnowledgeGraph& graph, graph::EdgeKind kind);
Table subgraph_table(const std::vector<SubgraphStatsRow>& rows);

struct ReuseRow {
  std::string record_id;
  std::string name;
  std::string ecosystem;
  std::size_t in_degree = 0;
};

/// Dependency in-degree per target, entries with in-degree >= 2, descending
/// (ties by record id).
std::vector<ReuseRow> dependency_reuse_counts(const KnowledgeGraph& graph);
Table reuse_table(const std::vector<ReuseRow>& rows);

// ---- change operations --------------------------------------------------------

enum class ChangeOp { CN, CV, CD, CDep, CC };
inline constexpr std::array<ChangeOp, 5> kAllChangeOps = {ChangeOp::CN, ChangeOp::CV, ChangeOp::CD,
                                                          ChangeOp::CDep, ChangeOp::CC};
std::string_view to_string(ChangeOp op) noexcept;

struct ChangeOps {
  std::set<ChangeOp> ops;
  std::size_t changed_lines = 0;  // max(deleted, inserted); meaningful with CC
  bool code_undetermined = false;  // a document was missing
  bool has(ChangeOp op) const { return ops.contains(op); }
};

/// Lines removed from `a` and lines added in `b` under a minimal line diff.
std::pair<std::size_t, std::size_t> line_diff_counts(std::string_view a, std::string_view b);

/// Absent descriptions compare equal to empty ones; dependency lists compare
/// as sets of (name, constraint).
ChangeOps classify_change_ops(const corpus::PackageRecord& a, const corpus::PackageRecord& b,
                              const corpus::CodeDocument* doc_a, const corpus::CodeDocument* doc_b);

struct OpShare {
  ChangeOp op = ChangeOp::CN;
  std::size_t components = 0;
  double component_pct = 0.0;
  std::size_t pairs = 0;
  double pair_pct = 0.0;
};

struct OpDistribution {
  graph::EdgeKind kind = graph::EdgeKind::similar;
  std::size_t components = 0;           // with >= 1 classified pair
  std::size_t excluded_components = 0;  // fewer than 2 timed members
  std::size_t pairs = 0;
  std::size_t cc_undetermined_pairs = 0;
  double mean_changed_lines = 0.0;      // over pairs with CC
  std::vector<OpShare> shares;          // kAllChangeOps order
};

/// Members ordered by (release_time, name, record_id); untimed members are
/// left out. Component share = components with the op at least once over
/// classified components; pair share = pairs with the op over all pairs.
OpDistribution op_distribution(const KnowledgeGraph& graph, graph::EdgeKind kind,
                               const std::map<std::string, corpus::CodeDocument>& documents);
Table to_table(const OpDistribution& d);

// ---- active periods -----------------------------------------------------------

/// floor(t_last - t_first) in days; nullopt without any timed member.
std::optional<long long> active_period(const Subgraph& subgraph);

struct ActivePeriodCdf {
  graph::EdgeKind kind = graph::EdgeKind::similar;
  std::vector<long long> periods;  // sorted
  std::size_t excluded = 0;        // components without timestamps
  double mean_days = 0.0;
  /// (period, components with exactly that period, cumulative fraction)
  std::vector<std::tuple<long long, std::size_t, double>> steps;
};

ActivePeriodCdf active_period_cdf(const KnowledgeGraph& graph, graph::EdgeKind kind);
Table to_table(const ActivePeriodCdf& c);

// ---- IoCs and timeline --------------------------------------------------------

struct IocRanking {
  std::vector<std::pair<std::string, std::size_t>> domains;  // reports per domain, descending
  std::vector<std::pair<std::string, std::size_t>> urls;
  std::vector<std::pair<std::string, std::size_t>> ips;
  std::vector<std::pair<std::string, std::size_t>> powershell;
  std::size_t url_total = 0;  // sum over reports of distinct URLs
  std::size_t ip_total = 0;
  std::size_t powershell_total = 0;
};

IocRanking ioc_rankings(const std::vector<reports::SecurityReport>& reports);
Table to_table(const IocRanking& r);

struct TimelineBucket {
  std::string bucket;
  std::size_t all = 0;
  std::size_t unavailable = 0;
};

struct ReleaseTimeline {
  std::vector<TimelineBucket> buckets;  // chronological
  std::size_t excluded = 0;             // records without release_time
  std::size_t excluded_unavailable = 0;
};

enum class TimelineBucketing { month, year };

ReleaseTimeline release_timeline(const std::vector<corpus::PackageRecord>& records,
                                 TimelineBucketing bucketing = TimelineBucketing::month);
Table to_table(const ReleaseTimeline& t);

}  // namespace osskg::analytics
