#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <set>

#include "common/synth.hpp"
#include "osskg/edges/coexisting.hpp"
#include "osskg/edges/dependencies.hpp"
#include "osskg/edges/duplicates.hpp"
#include "osskg/edges/ioc.hpp"
#include "osskg/edges/similar.hpp"
#include "osskg/fingerprint/embedding.hpp"
#include "osskg/util/error.hpp"

using namespace osskg;
using namespace osskg::edges;
using osskg::corpus::Ecosystem;

namespace {

std::vector<std::string> hit_names(const std::vector<CodeDependencyHit>& hits) {
  std::vector<std::string> out;
  for (const auto& h : hits) out.push_back(h.dep_name);
  return out;
}

std::vector<std::string> scan_js(const std::string& code, const std::set<std::string>& names,
                                 const std::string& path = "index.js") {
  return hit_names(scan_code_dependencies(corpus::build_code_document("r", {{path, code}}), names));
}

fingerprint::PackageVector pv(std::string id, std::vector<double> v) {
  fingerprint::PackageVector p;
  p.record_id = std::move(id);
  p.dim = v.size();
  p.values = std::move(v);
  p.snippet_count = 1;
  return p;
}

std::set<std::pair<std::string, std::string>> edge_pairs(const std::vector<KGEdge>& edges) {
  std::set<std::pair<std::string, std::string>> out;
  for (const auto& e : edges) out.insert({e.u, e.v});
  return out;
}

}  // namespace

// ---- duplicated -------------------------------------------------------------

TEST(Duplicated, LinksSameKeyAcrossSourcesOnly) {
  std::vector<corpus::PackageRecord> rs = {
      synth::record("a", "x", "1", "s1", true), synth::record("b", "x", "1", "s2", false),
      synth::record("c", "x", "2", "s3", true), synth::record("d", "x", "1", "s3", true, Ecosystem::pypi())};
  const auto edges = build_duplicated_edges(rs);
  ASSERT_EQ(edges.size(), 1u);
  EXPECT_EQ(edges[0].u, "a");
  EXPECT_EQ(edges[0].v, "b");
  EXPECT_EQ(std::get<DuplicatedEvidence>(edges[0].evidence).basis, DuplicateBasis::name_version);
}

TEST(Duplicated, HashRules) {
  const std::string h1(64, 'a'), h2(64, 'b');
  auto a = synth::record("a", "x", "1", "s1", true);
  auto b = synth::record("b", "x", "1", "s2", true);
  auto c = synth::record("c", "x", "1", "s3", false);
  a.sha256 = h1;
  b.sha256 = h1;
  auto edges = build_duplicated_edges({a, b, c});
  EXPECT_EQ(edge_pairs(edges), (std::set<std::pair<std::string, std::string>>{{"a", "b"}, {"a", "c"}, {"b", "c"}}));
  for (const auto& e : edges) {
    const auto basis = std::get<DuplicatedEvidence>(e.evidence).basis;
    EXPECT_EQ(basis, e.u == "a" && e.v == "b" ? DuplicateBasis::name_version_hash : DuplicateBasis::name_version);
  }

  b.sha256 = h2;
  Diagnostics diags;
  edges = build_duplicated_edges({a, b, c}, &diags);
  EXPECT_TRUE(edge_pairs(edges).empty());
  std::set<std::string> codes;
  for (const auto& d : diags) codes.insert(d.code);
  EXPECT_TRUE(codes.contains("hash-conflict"));
  EXPECT_TRUE(codes.contains("ambiguous-duplicate"));
}

// ---- similar ----------------------------------------------------------------

TEST(Similar, TwoObviousGroups) {
  std::vector<fingerprint::PackageVector> v = {pv("a1", {1, 0, 0}), pv("a2", {0.98, 0.05, 0}),
                                               pv("a3", {0.97, 0, 0.05}), pv("b1", {0, 1, 0}),
                                               pv("b2", {0.02, 0.99, 0}), pv("c", {0, 0, 1})};
  const auto r = cluster_similar_detailed(v);
  std::set<std::vector<std::string>> groups;
  for (const auto& c : r.clusters) groups.insert(c.members);
  EXPECT_TRUE(groups.contains((std::vector<std::string>{"a1", "a2", "a3"})));
  EXPECT_TRUE(groups.contains((std::vector<std::string>{"b1", "b2"})));
  for (const auto& c : r.clusters) {
    EXPECT_GE(c.members.size(), 2u);
    EXPECT_GE(c.silhouette, 0.3);
    EXPECT_GE(c.mean_intra_cosine, 0.7);
    EXPECT_EQ(c.pair_cosine.size(), c.members.size() * (c.members.size() - 1) / 2);
  }
}

TEST(Similar, DegenerateInputs) {
  EXPECT_TRUE(cluster_similar({}).empty());
  EXPECT_TRUE(cluster_similar({pv("a", {1, 0})}).empty());
  const auto same = cluster_similar({pv("a", {1, 1}), pv("b", {2, 2}), pv("c", {1, 1})});
  ASSERT_EQ(same.size(), 1u);
  EXPECT_EQ(same[0].members, (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_DOUBLE_EQ(same[0].silhouette, 1.0);
  EXPECT_THROW(cluster_similar({pv("a", {1, 0}), pv("b", {1, 0, 0})}), std::invalid_argument);
  EXPECT_THROW(cluster_similar({pv("a", {0, 0}), pv("b", {1, 0})}), std::invalid_argument);
}

TEST(Similar, DeterministicAndSeedIndependentOnClearData) {
  std::vector<fingerprint::PackageVector> v;
  const auto backend = fingerprint::make_embedding_backend("shingle3", 256);
  fingerprint::FingerprintConfig cfg;
  for (int fam = 0; fam < 4; ++fam) {
    const auto base = synth::code_base(100 + fam);
    for (int k = 0; k < 4; ++k) {
      const auto doc = synth::js_document("f" + std::to_string(fam) + "v" + std::to_string(k),
                                          synth::join_lines(synth::variant(base, fam * 10 + k, k % 3)));
      v.push_back(fingerprint::fingerprint_document(doc, cfg, *backend));
    }
  }
  ClusterConfig a, b;
  b.seed = 999;
  const auto ra = cluster_similar(v, a);
  const auto rb = cluster_similar(v, b);
  ASSERT_EQ(ra.size(), 4u);
  ASSERT_EQ(ra.size(), rb.size());
  for (std::size_t i = 0; i < ra.size(); ++i) EXPECT_EQ(ra[i].members, rb[i].members);
  const auto again = cluster_similar(v, a);
  for (std::size_t i = 0; i < ra.size(); ++i) EXPECT_EQ(ra[i].pair_cosine, again[i].pair_cosine);
}

TEST(Similar, EdgesPerMemberPair) {
  SimilarCluster c;
  c.cluster_id = 3;
  c.members = {"a", "b", "c"};
  c.pair_cosine = {0.9, 0.8, 0.95};
  EXPECT_DOUBLE_EQ(c.cosine_between(2, 1), 0.95);
  const auto edges = build_similar_edges({c});
  ASSERT_EQ(edges.size(), 3u);
  EXPECT_EQ(std::get<SimilarEvidence>(edges[1].evidence).cluster_id, 3u);
  EXPECT_DOUBLE_EQ(std::get<SimilarEvidence>(edges[1].evidence).cosine, 0.8);
}

// ---- dependencies -----------------------------------------------------------

TEST(Dependencies, PatternFileMatchesBuiltInDefaults) {
  const auto loaded = PatternSet::load(std::filesystem::path(OSSKG_SOURCE_DIR) / "data" / "dependency_patterns.tsv");
  const auto defaults = PatternSet::defaults();
  ASSERT_EQ(loaded.patterns().size(), defaults.patterns().size());
  for (std::size_t i = 0; i < defaults.patterns().size(); ++i) {
    EXPECT_EQ(loaded.patterns()[i].id, defaults.patterns()[i].id);
    EXPECT_EQ(loaded.patterns()[i].source, defaults.patterns()[i].source);
  }
}

TEST(Dependencies, PatternFileVersioning) {
  EXPECT_EQ(PatternSet::parse("version\t1\nx\timport [\\w]+\n").patterns().size(), 1u);
  try {
    PatternSet::parse("version\t2\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::version_mismatch);
  }
  try {
    PatternSet::parse("version\t1\nbad\t([unclosed\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::parse);
  }
}

TEST(Dependencies, CoverRequiresTheMatchToSpanTheName) {
  const auto p = PatternSet::defaults();
  const std::string w = "x = 1; require('evil-pkg'); log('evil-pkg')";
  const auto first = w.find("evil-pkg");
  const auto second = w.rfind("evil-pkg");
  EXPECT_TRUE(p.covers(w, first, first + 8));
  EXPECT_FALSE(p.covers(w, second, second + 8));
}

TEST(Dependencies, EverySyntacticFormIsFound) {
  const std::set<std::string> names = {"evilpkg"};
  const std::vector<std::pair<std::string, std::string>> forms = {
      {"index.js", "import foo from 'evilpkg'"},
      {"index.js", "import a from \"evilpkg\";"},
      {"a.py", "from 'evilpkg' import thing"},
      {"index.js", "import x from evilpkg"},
      {"a.py", "from evilpkg import run"},
      {"index.js", "import 'evilpkg';"},
      {"a.py", "import evilpkg"},
      {"index.js", "import ./evilpkg"},
      {"index.js", "import ../evilpkg"},
      {"a.py", "import os.evilpkg"},
      {"a.py", "from evilpkg.sub import run"},
      {"index.js", "const e = require('evilpkg');"},
      {"index.js", "require(\"evilpkg\")"},
      {"x.rb", "require 'evilpkg'"},
      {"index.js", "fetch('https://registry.example.com/evilpkg/-/evilpkg.tgz')"},
      {"index.js", "require('./lib/evilpkg/')"},
  };
  for (const auto& [path, code] : forms) {
    const auto hits = scan_js(code, names, path);
    EXPECT_EQ(std::set<std::string>(hits.begin(), hits.end()), names) << path << ": " << code;
  }
}

TEST(Dependencies, CommentsAndSubstringTrapsAreIgnored) {
  const std::set<std::string> names = {"evil", "evil-pkg", "pkg"};
  EXPECT_TRUE(scan_js("// const e = require('evil-pkg');\n", names).empty());
  EXPECT_TRUE(scan_js("/* require('evil-pkg')\n import evil */ x();\n", names).empty());
  EXPECT_TRUE(scan_js("# import evil-pkg\n", names, "a.py").empty());
  EXPECT_TRUE(scan_js("=begin\nrequire 'evil-pkg'\n=end\n", names, "a.rb").empty());
  EXPECT_TRUE(scan_js("const s = \"// not a comment\"; const e = require('good-evil-pkgs');\n", names).empty());
  EXPECT_TRUE(scan_js("console.log('evil-pkg is bad');\n", names).empty());
  EXPECT_EQ(scan_js("const e = require('evil-pkg'); // evil\n", names), std::vector<std::string>{"evil-pkg"});
  EXPECT_EQ(scan_js("const s = '// x'; const e = require('evil-pkg');\n", names), std::vector<std::string>{"evil-pkg"});
}

TEST(Dependencies, InCommentLexer) {
  const std::string js = "a('//x'); // c\n/* b */ d";
  EXPECT_FALSE(in_comment("x.js", js, js.find("//x")));
  EXPECT_TRUE(in_comment("x.js", js, js.find("c\n")));
  EXPECT_TRUE(in_comment("x.js", js, js.find("b */")));
  EXPECT_FALSE(in_comment("x.js", js, js.find("d")));
  const std::string py = "s = '#no'\n# yes\n\"\"\"#doc\"\"\"\n";
  EXPECT_FALSE(in_comment("x.py", py, py.find("#no")));
  EXPECT_TRUE(in_comment("x.py", py, py.find("yes")));
  EXPECT_FALSE(in_comment("x.py", py, py.find("#doc")));
}

TEST(Dependencies, OffsetsArePerFile) {
  const auto doc = corpus::build_code_document("r", {{"a.js", "x();\n"}, {"b.js", "require('evilpkg')"}});
  const auto hits = scan_code_dependencies(doc, {"evilpkg"});
  ASSERT_EQ(hits.size(), 1u);
  EXPECT_EQ(hits[0].file, "b.js");
  EXPECT_EQ(hits[0].offset, 9u);
}

TEST(Dependencies, EdgesFromManifestAndCodeWithSuppression) {
  auto front = synth::record("f", "front", "1", "s1", true);
  front.declared_deps = {{"payload", "^1"}};
  auto other = synth::record("o", "other", "1", "s1", true);
  auto payload = synth::record("p", "payload", "1", "s1", true);
  auto payload_py = synth::record("q", "payload", "1", "s2", true, Ecosystem::pypi());
  auto self = synth::record("s", "front", "2", "s2", true);
  const std::vector<corpus::CodeDocument> docs = {
      synth::js_document("f", "const p = require('payload'); require('front');\n"),
      synth::js_document("o", "require('payload')\n")};
  auto edges = build_dependency_edges({front, other, payload, payload_py, self}, docs);
  EXPECT_EQ(edge_pairs(edges), (std::set<std::pair<std::string, std::string>>{{"f", "p"}, {"o", "p"}}));
  const auto& ev = std::get<DependencyEvidence>(edges[0].evidence);
  EXPECT_EQ(ev.loci.size(), 2u);
  EXPECT_TRUE(edges[0].directed());

  auto sup = SuppressionList::parse("# ignore\no\tpayload\n");
  DependencyScanOptions opts;
  opts.suppressions = &sup;
  edges = build_dependency_edges({front, other, payload, payload_py, self}, docs, opts);
  EXPECT_EQ(edge_pairs(edges), (std::set<std::pair<std::string, std::string>>{{"f", "p"}}));
}

// ---- IoCs -------------------------------------------------------------------

TEST(Ioc, Ipv4Validation) {
  EXPECT_TRUE(is_ipv4("8.8.8.8"));
  EXPECT_TRUE(is_ipv4("255.255.255.255"));
  EXPECT_FALSE(is_ipv4("256.1.1.1"));
  EXPECT_FALSE(is_ipv4("1.2.3"));
  EXPECT_FALSE(is_ipv4("1.2.3.4.5"));
  EXPECT_FALSE(is_ipv4("1.2.3.1234"));
}

TEST(Ioc, DomainsAndHosts) {
  EXPECT_EQ(url_host("https://User@Sub.Example.COM:8443/x?y"), "sub.example.com");
  EXPECT_EQ(registrable_domain("a.b.example.co.uk"), "example.co.uk");
  EXPECT_EQ(registrable_domain("x.evil.com"), "evil.com");
  EXPECT_EQ(registrable_domain("localhost"), "localhost");
}

TEST(Ioc, ExtractionWithTrapsAndDedup) {
  const auto iocs = extract_iocs(
      "Hosts 1.2.3.4, 1.2.3.4 and 999.2.3.4 and version 1.2.3.4.5 and v10.0.0.1x.\n"
      "Fetch (https://cdn.evil.com/p.js). Then\n  powershell -enc AAAA  \nDone.\n");
  std::vector<std::string> ips, urls, shells;
  for (const auto& i : iocs) {
    if (i.kind == reports::IoCKind::ip) ips.push_back(i.value);
    if (i.kind == reports::IoCKind::url) {
      urls.push_back(i.value);
      EXPECT_EQ(i.domain, "evil.com");
    }
    if (i.kind == reports::IoCKind::powershell) shells.push_back(i.value);
  }
  EXPECT_EQ(shells, std::vector<std::string>{"powershell -enc AAAA"});
  EXPECT_EQ(ips, std::vector<std::string>{"1.2.3.4"});
  EXPECT_EQ(urls, std::vector<std::string>{"https://cdn.evil.com/p.js"});
  EXPECT_TRUE(std::is_sorted(iocs.begin(), iocs.end()));
}

// ---- co-existing ------------------------------------------------------------

TEST(Coexisting, ResolutionAndPairs) {
  std::vector<corpus::PackageRecord> rs = {
      synth::record("a", "Alpha", "1", "s1", true), synth::record("b", "beta", "1", "s1", true),
      synth::record("b2", "beta", "2", "s2", true), synth::record("c", "gamma", "1", "s1", true, Ecosystem::pypi())};
  reports::PackageMention alpha{std::nullopt, "alpha", std::nullopt};
  EXPECT_EQ(resolve_mention(alpha, rs), std::vector<std::string>{"a"});
  reports::PackageMention beta1{Ecosystem::npm(), "beta", "1"};
  EXPECT_EQ(resolve_mention(beta1, rs), std::vector<std::string>{"b"});
  reports::PackageMention ghost{std::nullopt, "ghost", std::nullopt};
  EXPECT_TRUE(resolve_mention(ghost, rs).empty());

  reports::SecurityReport r1;
  r1.report_id = "r1";
  r1.mentioned_packages = {alpha, {std::nullopt, "gamma", std::nullopt}, ghost};
  reports::SecurityReport r2 = r1;
  r2.report_id = "r2";
  r2.mentioned_packages = {alpha, {std::nullopt, "gamma", std::nullopt}};
  MentionResolution stats;
  const auto edges = build_coexisting_edges({r1, r2}, rs, &stats);
  ASSERT_EQ(edges.size(), 1u);
  const auto& ev = std::get<CoexistingEvidence>(edges[0].evidence);
  EXPECT_EQ(ev.report_ids, (std::vector<std::string>{"r1", "r2"}));
  EXPECT_TRUE(ev.cross_ecosystem);
  EXPECT_EQ(stats.resolved, 4u);
  EXPECT_EQ(stats.unresolved, 1u);
}
