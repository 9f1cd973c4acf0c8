#include <gtest/gtest.h>

#include "common/synth.hpp"
#include "osskg/analytics/analytics.hpp"
#include "osskg/edges/duplicates.hpp"
#include "osskg/reports/report.hpp"

using namespace osskg;
using namespace osskg::analytics;
using namespace osskg::edges;
using synth::record;

namespace {

graph::KnowledgeGraph with_duplicates(const std::vector<corpus::PackageRecord>& rs) {
  graph::KnowledgeGraph g;
  for (const auto& r : rs) g.add_node(r);
  for (const auto& e : build_duplicated_edges(rs)) g.add_edge(e);
  return g;
}

// Three sources covering: supplemented by another source, missing everywhere,
// missing in one source only, and available only.
std::vector<corpus::PackageRecord> missing_fixture() {
  return {record("s1a", "p1", "1", "S1", true),  record("s1b", "p2", "1", "S1", false),
          record("s1c", "p3", "1", "S1", false), record("s1d", "p4", "1", "S1", false),
          record("s2a", "p2", "1", "S2", true),  record("s2b", "p5", "1", "S2", false),
          record("s2c", "p1", "1", "S2", false), record("s3a", "p3", "1", "S3", false),
          record("s3b", "p5", "1", "S3", true)};
}

}  // namespace

TEST(Missing, HandComputedRates) {
  const auto r = missing_rates(with_duplicates(missing_fixture()));
  ASSERT_EQ(r.sources.size(), 3u);
  const auto& s1 = r.sources[0];
  EXPECT_EQ(s1.total, 4u);
  EXPECT_EQ(s1.missing, 3u);
  EXPECT_EQ(s1.unsupplemented, 2u);
  EXPECT_DOUBLE_EQ(s1.local_mr, 0.75);
  EXPECT_DOUBLE_EQ(s1.global_mr, 0.5);
  EXPECT_DOUBLE_EQ(r.sources[1].local_mr, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(r.sources[1].global_mr, 0.0);
  EXPECT_DOUBLE_EQ(r.sources[2].local_mr, 0.5);
  EXPECT_DOUBLE_EQ(r.sources[2].global_mr, 0.5);
  EXPECT_EQ(r.total, 9u);
  EXPECT_EQ(r.unsupplemented, 3u);
  EXPECT_DOUBLE_EQ(r.global_mr, 3.0 / 9.0);
  const auto t = to_table(r);
  EXPECT_EQ(t.rows[0], (std::vector<std::string>{"S1", "4", "3", "2", "75.00", "50.00", "false"}));
  EXPECT_EQ(t.rows.back()[0], "all");
}

TEST(Overlap, CountsIdentityGroupsPerSourcePair) {
  const auto m = overlap_matrix(with_duplicates(missing_fixture()));
  EXPECT_EQ(m.sources, (std::vector<std::string>{"S1", "S2", "S3"}));
  EXPECT_EQ(m.source_sizes, (std::vector<std::size_t>{4, 3, 2}));
  EXPECT_EQ(m.counts[0][1], 2u);  // p1, p2
  EXPECT_EQ(m.counts[1][0], 2u);
  EXPECT_EQ(m.counts[0][2], 1u);  // p3
  EXPECT_EQ(m.counts[1][2], 1u);  // p5
  EXPECT_EQ(m.counts[0][0], 0u);
  const auto t = to_table(m);
  EXPECT_EQ(t.header, (std::vector<std::string>{"source", "size", "S1", "S2", "S3"}));
  EXPECT_EQ(t.rows[0], (std::vector<std::string>{"S1", "4", "", "2", "1"}));
}

TEST(Occurrence, HistogramAndCdf) {
  const auto rows = occurrence_counts(with_duplicates(missing_fixture()));
  // groups: p1{S1,S2} p2{S1,S2} p3{S1,S3} p4{S1} p5{S2,S3}, all npm
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0].occurrence, 1u);
  EXPECT_EQ(rows[0].groups, 1u);
  EXPECT_DOUBLE_EQ(rows[0].cdf, 0.2);
  EXPECT_EQ(rows[1].groups, 4u);
  EXPECT_DOUBLE_EQ(rows[1].cdf, 1.0);
  EXPECT_EQ(rows[2].ecosystem, "all");
}

TEST(Subgraphs, PerEcosystemMixedAndAll) {
  graph::KnowledgeGraph g;
  for (const auto& r : {record("a", "a", "1", "s", true), record("b", "b", "1", "s", true),
                        record("c", "c", "1", "s", true), record("d", "d", "1", "s", true, corpus::Ecosystem::pypi()),
                        record("e", "e", "1", "s", true)}) {
    g.add_node(r);
  }
  g.add_edge(make_edge("a", "b", CoexistingEvidence{{"r"}, false}));
  g.add_edge(make_edge("b", "c", CoexistingEvidence{{"r"}, false}));
  g.add_edge(make_edge("d", "e", CoexistingEvidence{{"r"}, true}));
  const auto rows = subgraph_stats(g, EdgeKind::coexisting);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0].ecosystem, "npm");
  EXPECT_EQ(rows[0].max_size, 3u);
  EXPECT_EQ(rows[1].ecosystem, "mixed");
  EXPECT_EQ(rows[2].ecosystem, "all");
  EXPECT_EQ(rows[2].count, 2u);
  EXPECT_DOUBLE_EQ(rows[2].avg_size, 2.5);
  EXPECT_EQ(rows[2].packages, 5u);
}

TEST(Reuse, InDegreeAtLeastTwo) {
  graph::KnowledgeGraph g;
  for (const char* id : {"a", "b", "c", "t", "u"}) g.add_node(record(id, id, "1", "s", true));
  for (const char* src : {"a", "b", "c"}) g.add_edge(make_edge(src, "t", DependencyEvidence{"t", {}}));
  g.add_edge(make_edge("a", "u", DependencyEvidence{"u", {}}));
  const auto rows = dependency_reuse_counts(g);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].record_id, "t");
  EXPECT_EQ(rows[0].in_degree, 3u);
}

TEST(ChangeOps, LineDiff) {
  EXPECT_EQ(line_diff_counts("a\nb\nc", "a\nb\nc"), (std::pair<std::size_t, std::size_t>{0, 0}));
  EXPECT_EQ(line_diff_counts("a\nb\nc", "a\nx\nc\nd"), (std::pair<std::size_t, std::size_t>{1, 2}));
  EXPECT_EQ(line_diff_counts("", "a\nb"), (std::pair<std::size_t, std::size_t>{0, 2}));
}

TEST(ChangeOps, NameTakesPrecedenceOverVersion) {
  auto a = record("a", "x", "1", "s", false);
  auto b = record("b", "y", "2", "s", false);
  auto ops = classify_change_ops(a, b, nullptr, nullptr);
  EXPECT_TRUE(ops.has(ChangeOp::CN));
  EXPECT_FALSE(ops.has(ChangeOp::CV));
  EXPECT_TRUE(ops.code_undetermined);
  b.name = "x";
  ops = classify_change_ops(a, b, nullptr, nullptr);
  EXPECT_EQ(ops.ops, (std::set<ChangeOp>{ChangeOp::CV}));
  a.description = "";
  EXPECT_FALSE(classify_change_ops(a, b, nullptr, nullptr).has(ChangeOp::CD));
}

TEST(ActivePeriod, FloorDaysAndSingletons) {
  graph::Subgraph s;
  s.members = {"a", "b"};
  s.t_first = *parse_iso8601("2023-08-09T00:00:00Z");
  s.t_last = *parse_iso8601("2023-08-19T00:00:00Z");
  EXPECT_EQ(active_period(s), 10);
  s.t_last = s.t_first;
  EXPECT_EQ(active_period(s), 0);
  s.t_first.reset();
  s.t_last.reset();
  EXPECT_FALSE(active_period(s));
}

TEST(Ioc, RankingsDeduplicatePerReport) {
  reports::SecurityReport r1, r2;
  r1.report_id = "1";
  r1.iocs = {{reports::IoCKind::url, "http://a.evil.com/x", "evil.com"},
             {reports::IoCKind::url, "http://b.evil.com/y", "evil.com"},
             {reports::IoCKind::ip, "1.2.3.4", std::nullopt}};
  r2.report_id = "2";
  r2.iocs = {{reports::IoCKind::url, "http://a.evil.com/x", "evil.com"}, {reports::IoCKind::ip, "1.2.3.4", std::nullopt}};
  const auto r = ioc_rankings({r1, r2});
  ASSERT_EQ(r.domains.size(), 1u);
  EXPECT_EQ(r.domains[0], (std::pair<std::string, std::size_t>{"evil.com", 2}));
  EXPECT_EQ(r.urls[0], (std::pair<std::string, std::size_t>{"http://a.evil.com/x", 2}));
  EXPECT_EQ(r.url_total, 3u);
  EXPECT_EQ(r.ip_total, 2u);
}

TEST(Timeline, MonthsAndUnknown) {
  auto a = record("a", "a", "1", "s", true);
  a.release_time = synth::day(2023, 8, 9);
  auto b = record("b", "b", "1", "s", false);
  b.release_time = synth::day(2023, 8, 30);
  auto c = record("c", "c", "1", "s", false);
  const auto t = release_timeline({a, b, c});
  ASSERT_EQ(t.buckets.size(), 1u);
  EXPECT_EQ(t.buckets[0].bucket, "2023-08");
  EXPECT_EQ(t.buckets[0].all, 2u);
  EXPECT_EQ(t.buckets[0].unavailable, 1u);
  EXPECT_EQ(t.excluded, 1u);
  EXPECT_EQ(t.excluded_unavailable, 1u);
  EXPECT_EQ(to_table(t).rows.back(), (std::vector<std::string>{"unknown", "1", "1"}));
  EXPECT_EQ(release_timeline({a}, TimelineBucketing::year).buckets[0].bucket, "2023");
}

TEST(Table, CsvQuotingAndText) {
  Table t{{"a", "b"}, {{"x,y", "say \"hi\""}, {"1", ""}}};
  EXPECT_EQ(to_csv(t), "a,b\n\"x,y\",\"say \"\"hi\"\"\"\n1,\n");
  const auto text = to_text(t);
  EXPECT_NE(text.find("x,y"), std::string::npos);
  EXPECT_EQ(fixed(2.5, 2), "2.50");
  EXPECT_EQ(fixed(1.0 / 3.0, 4), "0.3333");
}
