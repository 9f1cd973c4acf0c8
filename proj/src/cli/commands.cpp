#include "osskg/cli/commands.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <thread>

#include "osskg/analytics/analytics.hpp"
#include "osskg/cli/workspace.hpp"
#include "osskg/corpus/archive.hpp"
#include "osskg/corpus/catalog.hpp"
#include "osskg/corpus/manifest.hpp"
#include "osskg/detect/detect.hpp"
#include "osskg/edges/coexisting.hpp"
#include "osskg/edges/dependencies.hpp"
#include "osskg/edges/duplicates.hpp"
#include "osskg/fingerprint/hashing.hpp"
#include "osskg/graph/graph.hpp"
#include "osskg/reports/report.hpp"

namespace osskg::cli {
namespace {

using nlohmann::ordered_json;
using edges::EdgeKind;

unsigned worker_count(unsigned requested, std::size_t jobs) {
  unsigned n = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(jobs, 1)));
}

/// Runs fn(i) for i in [0, n) on up to `threads` workers. The first
/// exception is rethrown after all workers stop.
template <typename Fn>
void parallel_for(std::size_t n, unsigned threads, Fn fn) {
  const unsigned workers = worker_count(threads, n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

void clear_directory(const fs::path& dir) {
  std::error_code ec;
  if (fs::exists(dir)) {
    for (const auto& e : fs::directory_iterator(dir)) fs::remove_all(e.path(), ec);
  }
  fs::create_directories(dir);
}

struct IngestedPackage {
  corpus::PackageRecord record;
  std::optional<corpus::CodeDocument> document;
  Diagnostics diagnostics;
};

IngestedPackage ingest_record(corpus::PackageRecord record, const std::optional<fs::path>& archive_root) {
  IngestedPackage out;
  if (!record.available()) {
    out.record = std::move(record);
    return out;
  }
  const fs::path archive = archive_root ? *archive_root / *record.archive_path : fs::path(*record.archive_path);
  try {
    auto scratch = corpus::unpack_archive(archive);
    auto doc = corpus::build_code_document(record, scratch.path());
    const auto digest = fingerprint::package_sha256(scratch.path());
    if (record.sha256 && *record.sha256 != digest) {
      out.diagnostics.push_back({Severity::warning, "sha256-mismatch", record.record_id,
                                 "catalog digest " + *record.sha256 + " replaced by computed " + digest});
    }
    record.sha256 = digest;
    for (auto& dep : corpus::parse_manifest(scratch.path(), record.ecosystem, &out.diagnostics)) {
      const bool known = std::any_of(record.declared_deps.begin(), record.declared_deps.end(),
                                     [&](const corpus::Dependency& d) { return d.name == dep.name; });
      if (!known) record.declared_deps.push_back(std::move(dep));
    }
    for (auto& d : out.diagnostics) {
      if (d.subject.empty()) d.subject = record.record_id;
    }
    if (doc.code_empty()) {
      out.diagnostics.push_back({Severity::info, "code-empty", record.record_id, "no .js/.py/.rb files"});
    }
    out.document = std::move(doc);
  } catch (const Error& e) {
    out.diagnostics.push_back({Severity::error, std::string(to_string(e.kind())), record.record_id, e.what()});
  }
  out.record = std::move(record);
  return out;
}

std::vector<IngestedPackage> ingest_all(std::vector<corpus::PackageRecord> records,
                                        const std::optional<fs::path>& archive_root, unsigned threads) {
  std::vector<IngestedPackage> results(records.size());
  parallel_for(records.size(), threads,
               [&](std::size_t i) { results[i] = ingest_record(std::move(records[i]), archive_root); });
  std::sort(results.begin(), results.end(),
            [](const auto& a, const auto& b) { return a.record.record_id < b.record.record_id; });
  return results;
}

void copy_archive(const fs::path& root, const std::string& relative, const fs::path& dest_root) {
  const fs::path src = root / relative;
  const fs::path dst = dest_root / relative;
  if (fs::exists(src) && fs::weakly_canonical(src) == fs::weakly_canonical(dst)) return;
  fs::create_directories(dst.parent_path());
  fs::copy_file(src, dst, fs::copy_options::overwrite_existing);
}

std::string edge_kinds_label(const std::set<EdgeKind>& kinds) {
  std::string out;
  for (auto k : kinds) {
    if (!out.empty()) out += ',';
    out += edges::to_string(k);
  }
  return out;
}

std::map<std::string, corpus::CodeDocument> documents_by_id(std::vector<corpus::CodeDocument> docs) {
  std::map<std::string, corpus::CodeDocument> out;
  for (auto& d : docs) {
    auto id = d.record_id;
    out.emplace(std::move(id), std::move(d));
  }
  return out;
}

std::set<std::string> corpus_names(const std::vector<corpus::PackageRecord>& records) {
  std::set<std::string> names;
  for (const auto& r : records) names.insert(r.name);
  return names;
}

void emit(std::ostream& log, const fs::path& dir, const std::string& file, const std::string& title,
          const analytics::Table& table) {
  analytics::write_csv(dir / file, table);
  log << "== " << title << " (" << file << ")\n" << analytics::to_text(table) << '\n';
}

ordered_json fresh_manifest(const CommonOptions& c) {
  ordered_json m;
  m["format"] = kWorkspaceFormat;
  m["version"] = kWorkspaceVersion;
  m["tool_version"] = OSSKG_VERSION;
  m["seed"] = c.seed;
  m["stages"] = ordered_json::object();
  return m;
}

/// Stage check happens before locking so a missing workspace reads as a
/// stage-order problem rather than a lock failure.
void require_before_lock(const Workspace& ws, const std::string& stage, const std::string& needed_by) {
  if (!fs::exists(ws.manifest_path())) ws.require_stage(stage, needed_by);
}

}  // namespace

void cmd_ingest(const IngestOptions& options, std::ostream& log) {
  if (options.catalogs.empty()) throw Error(ErrorKind::bad_flag, "ingest needs at least one --catalog");
  Workspace ws(options.common.workspace);
  ws.create_layout();
  WorkspaceLock lock(ws.root());
  if (ws.initialized()) ws.load_manifest();  // refuse foreign workspaces

  std::vector<corpus::SourceCatalog> catalogs;
  std::set<std::string> ids;
  for (const auto& path : options.catalogs) {
    auto catalog = corpus::load_catalog(path, options.archives);
    for (const auto& r : catalog.records) {
      if (!ids.insert(r.record_id).second) {
        throw Error(ErrorKind::duplicate_id, "record_id '" + r.record_id + "' appears in more than one catalog");
      }
    }
    catalogs.push_back(std::move(catalog));
  }

  std::vector<corpus::PackageRecord> all;
  for (const auto& c : catalogs) all.insert(all.end(), c.records.begin(), c.records.end());
  auto packages = ingest_all(std::move(all), options.archives, options.common.threads);

  for (const auto& dir : {ws.catalogs(), ws.documents(), ws.reports(), ws.graph_dir(), ws.out()}) clear_directory(dir);
  if (options.archives && fs::weakly_canonical(*options.archives) != fs::weakly_canonical(ws.archives())) {
    clear_directory(ws.archives());
  }

  Diagnostics diagnostics;
  std::map<std::string, std::vector<corpus::PackageRecord>> by_source;
  std::vector<corpus::CodeDocument> documents;
  std::size_t available = 0, code_empty = 0, failed = 0;
  for (auto& p : packages) {
    diagnostics.insert(diagnostics.end(), p.diagnostics.begin(), p.diagnostics.end());
    if (p.record.available()) {
      ++available;
      if (options.archives) copy_archive(*options.archives, *p.record.archive_path, ws.archives());
      if (!p.document) ++failed;
    }
    if (p.document) {
      if (p.document->code_empty()) ++code_empty;
      documents.push_back(std::move(*p.document));
    }
    by_source[p.record.source_id].push_back(std::move(p.record));
  }
  for (const auto& [source, records] : by_source) {
    atomic_write(ws.catalogs() / (source + ".jsonl"), serialize_records(records));
  }
  atomic_write(ws.code_documents_file(), serialize_documents(documents));

  std::size_t report_count = 0;
  if (options.reports) {
    std::set<std::string> names;
    for (const auto& [_, records] : by_source) {
      for (const auto& r : records) names.insert(r.name);
    }
    const auto loaded = reports::load_reports(*options.reports, names, &diagnostics);
    report_count = loaded.size();
    for (const auto& e : fs::directory_iterator(*options.reports)) {
      if (e.is_regular_file() && e.path().extension() == ".json") {
        fs::copy_file(e.path(), ws.reports() / e.path().filename(), fs::copy_options::overwrite_existing);
      }
    }
  }

  std::size_t benign_count = 0;
  if (options.benign) {
    const auto root = options.benign_archives ? options.benign_archives : options.archives;
    auto catalog = corpus::load_catalog(*options.benign, root);
    auto benign = ingest_all(std::move(catalog.records), root, options.common.threads);
    std::vector<corpus::PackageRecord> records;
    std::vector<corpus::CodeDocument> docs;
    for (auto& p : benign) {
      diagnostics.insert(diagnostics.end(), p.diagnostics.begin(), p.diagnostics.end());
      if (!p.document) continue;
      docs.push_back(std::move(*p.document));
      records.push_back(std::move(p.record));
    }
    benign_count = records.size();
    atomic_write(ws.benign_catalog_file(), serialize_records(records));
    atomic_write(ws.benign_documents_file(), serialize_documents(docs));
  }
  atomic_write(ws.documents() / "diagnostics.txt", serialize_diagnostics(diagnostics));

  ordered_json manifest = fresh_manifest(options.common);
  ordered_json stage;
  auto sources = ordered_json::array();
  std::size_t total = 0;
  for (const auto& [source, records] : by_source) {
    sources.push_back({{"source_id", source}, {"records", records.size()}});
    total += records.size();
  }
  stage["sources"] = std::move(sources);
  stage["records"] = total;
  stage["available"] = available;
  stage["documents"] = documents.size();
  stage["code_empty"] = code_empty;
  stage["failed_archives"] = failed;
  stage["reports"] = report_count;
  stage["benign"] = benign_count;
  stage["diagnostics"] = diagnostics.size();
  manifest["stages"]["ingest"] = std::move(stage);
  ws.save_manifest(manifest);

  log << "ingest: " << total << " records from " << by_source.size() << " sources, " << documents.size()
      << " code documents (" << code_empty << " code-empty, " << failed << " failed archives), " << report_count
      << " reports, " << benign_count << " benign packages, " << diagnostics.size() << " diagnostics\n";
}

void cmd_graph_build(const GraphOptions& options, std::ostream& log) {
  Workspace ws(options.common.workspace);
  require_before_lock(ws, "ingest", "graph build");
  WorkspaceLock lock(ws.root());
  ws.require_stage("ingest", "graph build");
  auto manifest = ws.load_manifest();

  const auto records = read_catalog_dir(ws.catalogs());
  const auto documents = read_documents(ws.code_documents_file());
  Diagnostics diagnostics;

  graph::KnowledgeGraph g;
  for (const auto& r : records) g.add_node(r);

  ordered_json stage;
  stage["edges_requested"] = edge_kinds_label(options.kinds);

  if (options.kinds.contains(EdgeKind::duplicated)) {
    for (const auto& e : edges::build_duplicated_edges(records, &diagnostics)) g.add_edge(e);
  }

  std::string clusters_out;
  if (options.kinds.contains(EdgeKind::similar)) {
    const auto backend =
        fingerprint::make_embedding_backend(options.fingerprint.embedding_backend, options.fingerprint.snippet_dim);
    std::vector<const corpus::CodeDocument*> usable;
    for (const auto& d : documents) {
      if (!d.code_empty() && g.has_node(d.record_id)) usable.push_back(&d);
    }
    std::vector<fingerprint::PackageVector> vectors(usable.size());
    parallel_for(usable.size(), options.common.threads, [&](std::size_t i) {
      vectors[i] = fingerprint::fingerprint_document(*usable[i], options.fingerprint, *backend);
    });
    auto cfg = options.cluster;
    cfg.seed = options.common.seed;
    const auto result = edges::cluster_similar_detailed(vectors, cfg);
    for (const auto& e : edges::build_similar_edges(result.clusters)) g.add_edge(e);
    for (const auto& c : result.clusters) {
      ordered_json j;
      j["cluster_id"] = c.cluster_id;
      j["members"] = c.members;
      j["mean_intra_cosine"] = c.mean_intra_cosine;
      j["mean_centroid_cosine"] = c.mean_centroid_cosine;
      j["silhouette"] = c.silhouette;
      clusters_out += j.dump() + "\n";
    }
    ordered_json cl;
    cl["vectors"] = vectors.size();
    cl["unique_vectors"] = result.unique_points;
    cl["chosen_k"] = result.chosen_k;
    cl["mean_silhouette"] = result.mean_silhouette;
    cl["clusters"] = result.clusters.size();
    cl["discarded_clusters"] = result.discarded_clusters;
    cl["embedding_backend"] = backend->name();
    cl["snippet_len"] = options.fingerprint.snippet_len;
    cl["snippet_dim"] = options.fingerprint.snippet_dim;
    cl["s_max"] = options.fingerprint.s_max;
    cl["min_similarity"] = cfg.min_similarity;
    cl["min_silhouette"] = cfg.min_silhouette;
    stage["clustering"] = std::move(cl);
  }

  if (options.kinds.contains(EdgeKind::dependency)) {
    std::optional<edges::PatternSet> patterns;
    if (options.patterns) patterns = edges::PatternSet::load(*options.patterns);
    std::optional<edges::SuppressionList> suppress;
    if (options.suppressions) suppress = edges::SuppressionList::load(*options.suppressions);
    edges::DependencyScanOptions scan;
    scan.patterns = patterns ? &*patterns : nullptr;
    scan.suppressions = suppress ? &*suppress : nullptr;
    for (const auto& e : edges::build_dependency_edges(records, documents, scan, &diagnostics)) g.add_edge(e);
  }

  if (options.kinds.contains(EdgeKind::coexisting)) {
    const auto reports = reports::load_reports(ws.reports(), corpus_names(records), &diagnostics);
    edges::MentionResolution res;
    for (const auto& e : edges::build_coexisting_edges(reports, records, &res)) g.add_edge(e);
    stage["reports"] = reports.size();
    stage["mentions_resolved"] = res.resolved;
    stage["mentions_unresolved"] = res.unresolved;
  }

  graph::export_graph(g, ws.graph_file());
  atomic_write(ws.clusters_file(), clusters_out);
  atomic_write(ws.graph_dir() / "diagnostics.txt", serialize_diagnostics(diagnostics));

  stage["nodes"] = g.node_count();
  ordered_json counts;
  for (auto k : edges::kAllEdgeKinds) counts[std::string(edges::to_string(k))] = g.edge_count(k);
  stage["edges"] = std::move(counts);
  stage["diagnostics"] = diagnostics.size();
  manifest["seed"] = options.common.seed;
  auto& stages = manifest["stages"];
  stages.erase("analyze");
  stages.erase("detect");
  stages["graph"] = std::move(stage);
  ws.save_manifest(manifest);

  log << "graph: " << g.node_count() << " nodes";
  for (auto k : edges::kAllEdgeKinds) log << ", " << g.edge_count(k) << ' ' << edges::to_string(k);
  log << " edges, " << diagnostics.size() << " diagnostics\n";
}

void cmd_analyze(const AnalyzeOptions& options, std::ostream& log) {
  static const std::vector<std::string> kKnown = {"overlap", "missing", "occurrences", "subgraphs", "ops",
                                                  "active",  "dep-reuse", "ioc",       "timeline",  "all"};
  if (std::find(kKnown.begin(), kKnown.end(), options.analysis) == kKnown.end()) {
    throw Error(ErrorKind::bad_flag, "unknown analysis '" + options.analysis + "'");
  }
  Workspace ws(options.common.workspace);
  require_before_lock(ws, "graph", "analyze " + options.analysis);
  WorkspaceLock lock(ws.root());
  ws.require_stage("graph", "analyze " + options.analysis);
  auto manifest = ws.load_manifest();
  const fs::path out = options.out.value_or(ws.out());
  fs::create_directories(out);

  const auto g = graph::import_graph(ws.graph_file());
  const bool all = options.analysis == "all";
  auto wants = [&](const char* name) { return all || options.analysis == name; };
  auto kinds_or = [&](std::vector<EdgeKind> defaults) { return options.kinds.empty() ? defaults : options.kinds; };
  std::vector<std::string> written;
  auto put = [&](const std::string& file, const std::string& title, const analytics::Table& t) {
    emit(log, out, file, title, t);
    written.push_back(file);
  };

  if (wants("overlap")) put("overlap.csv", "source overlap", analytics::to_table(analytics::overlap_matrix(g)));
  if (wants("missing")) put("missing_rates.csv", "missing rates (%)", analytics::to_table(analytics::missing_rates(g)));
  if (wants("occurrences")) {
    put("occurrences.csv", "occurrence per identity group", analytics::occurrence_table(analytics::occurrence_counts(g)));
  }
  if (wants("subgraphs")) {
    for (auto k : kinds_or({edges::kAllEdgeKinds, edges::kAllEdgeKinds + 4})) {
      const std::string name(edges::to_string(k));
      put("subgraphs_" + name + ".csv", name + " subgraphs", analytics::subgraph_table(analytics::subgraph_stats(g, k)));
    }
  }
  if (wants("ops")) {
    const auto docs = documents_by_id(read_documents(ws.code_documents_file()));
    for (auto k : kinds_or({EdgeKind::similar, EdgeKind::coexisting})) {
      const std::string name(edges::to_string(k));
      put("ops_" + name + ".csv", name + " change operations", analytics::to_table(analytics::op_distribution(g, k, docs)));
    }
  }
  if (wants("active")) {
    for (auto k : kinds_or({EdgeKind::similar, EdgeKind::dependency, EdgeKind::coexisting})) {
      const std::string name(edges::to_string(k));
      put("active_" + name + ".csv", name + " active periods", analytics::to_table(analytics::active_period_cdf(g, k)));
    }
  }
  if (wants("dep-reuse")) {
    put("dep_reuse.csv", "dependency reuse", analytics::reuse_table(analytics::dependency_reuse_counts(g)));
  }
  if (wants("ioc")) {
    Diagnostics ignored;
    const auto reports = reports::load_reports(ws.reports(), corpus_names(g.records()), &ignored);
    put("ioc.csv", "indicators of compromise", analytics::to_table(analytics::ioc_rankings(reports)));
  }
  if (wants("timeline")) {
    put("timeline.csv", "release timeline", analytics::to_table(analytics::release_timeline(g.records())));
  }

  auto& stage = manifest["stages"]["analyze"];
  if (!stage.is_object()) stage = ordered_json::object();
  auto files = stage.value("files", std::vector<std::string>{});
  files.insert(files.end(), written.begin(), written.end());
  std::sort(files.begin(), files.end());
  files.erase(std::unique(files.begin(), files.end()), files.end());
  stage["files"] = files;
  ws.save_manifest(manifest);
}

void cmd_detect_eval(const DetectOptions& options, std::ostream& log) {
  Workspace ws(options.common.workspace);
  require_before_lock(ws, "graph", "detect eval");
  WorkspaceLock lock(ws.root());
  ws.require_stage("graph", "detect eval");
  auto manifest = ws.load_manifest();
  const fs::path out = options.out.value_or(ws.out());
  fs::create_directories(out);

  const auto g = graph::import_graph(ws.graph_file());
  const auto docs = documents_by_id(read_documents(ws.code_documents_file()));
  if (!fs::exists(ws.benign_documents_file())) {
    throw Error(ErrorKind::stage_order, "detect eval needs a benign corpus (ingest --benign)");
  }
  const auto benign_records = read_records(ws.benign_catalog_file());
  const auto benign_docs = documents_by_id(read_documents(ws.benign_documents_file()));

  std::vector<std::vector<std::string>> clusters;
  std::vector<detect::FeatureVector> features;
  for (const auto& c : g.connected_components(options.clusters_from)) {
    std::vector<std::string> members;
    for (const auto& id : c.members) {
      auto it = docs.find(id);
      if (it == docs.end() || it->second.code_empty()) continue;
      members.push_back(id);
      features.push_back(detect::extract_features(&it->second, g.node(id), detect::Label::malicious));
    }
    if (members.size() >= 2) clusters.push_back(std::move(members));
  }
  std::vector<std::string> legitimate;
  for (const auto& r : benign_records) {
    auto it = benign_docs.find(r.record_id);
    features.push_back(detect::extract_features(it == benign_docs.end() ? nullptr : &it->second, r,
                                                detect::Label::legitimate));
    legitimate.push_back(r.record_id);
  }
  detect::scale_metadata(features);
  std::map<std::string, detect::FeatureVector> by_id;
  for (auto& f : features) {
    auto id = f.record_id;
    if (!by_id.emplace(std::move(id), std::move(f)).second) {
      throw Error(ErrorKind::duplicate_id, "benign record id collides with a corpus record id");
    }
  }

  analytics::Table metrics{{"iteration", "strategy", "model", "accuracy", "recall"}, {}};
  analytics::Table summary{{"model", "strategy", "iterations", "skipped", "mean_accuracy", "mean_recall"}, {}};
  ordered_json results = ordered_json::array();
  for (const auto& model : options.models) {
    for (auto strategy : {detect::Strategy::cluster_aware, detect::Strategy::random}) {
      const auto splits = detect::make_splits(clusters, legitimate, options.n_clusters, options.iterations, strategy,
                                              options.common.seed);
      const auto r = detect::train_eval(splits, by_id, model);
      for (const auto& m : r.iterations) {
        metrics.rows.push_back({std::to_string(m.iteration), std::string(detect::to_string(strategy)), r.model,
                                analytics::fixed(m.accuracy, 6), analytics::fixed(m.recall, 6)});
      }
      summary.rows.push_back({r.model, std::string(detect::to_string(strategy)), std::to_string(r.iterations.size()),
                              std::to_string(r.skipped), analytics::fixed(r.mean_accuracy, 4),
                              analytics::fixed(r.mean_recall, 4)});
      results.push_back({{"model", r.model},
                         {"strategy", detect::to_string(strategy)},
                         {"mean_accuracy", r.mean_accuracy},
                         {"mean_recall", r.mean_recall},
                         {"skipped", r.skipped}});
    }
  }
  analytics::write_csv(out / "detect_metrics.csv", metrics);
  emit(log, out, "detect_summary.csv", "detection (" + std::to_string(clusters.size()) + " clusters, " +
                                           std::to_string(legitimate.size()) + " legitimate)", summary);

  ordered_json stage;
  stage["clusters_from"] = edges::to_string(options.clusters_from);
  stage["clusters"] = clusters.size();
  stage["n_clusters"] = options.n_clusters;
  stage["iterations"] = options.iterations;
  stage["seed"] = options.common.seed;
  stage["results"] = std::move(results);
  manifest["stages"]["detect"] = std::move(stage);
  ws.save_manifest(manifest);
}

void cmd_export(const ExportOptions& options, std::ostream& log) {
  Workspace ws(options.common.workspace);
  require_before_lock(ws, "graph", "export");
  WorkspaceLock lock(ws.root());
  ws.require_stage("graph", "export");
  std::vector<corpus::ArchiveEntry> entries;
  auto add_file = [&](const fs::path& file) {
    const auto rel = fs::relative(file, ws.root()).generic_string();
    entries.push_back({"osskg-bundle/" + rel, corpus::read_file_bytes(file), false});
  };
  add_file(ws.manifest_path());
  for (const auto& dir : {ws.catalogs(), ws.graph_dir(), ws.out()}) {
    std::vector<fs::path> files;
    for (const auto& e : fs::recursive_directory_iterator(dir)) {
      if (e.is_regular_file()) files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) add_file(f);
  }
  const auto bundle = corpus::gzip(corpus::write_tar(entries));
  if (options.bundle.has_parent_path()) fs::create_directories(options.bundle.parent_path());
  atomic_write(options.bundle, bundle);
  log << "export: " << entries.size() << " files -> " << options.bundle.string() << '\n';
}

}  // namespace osskg::cli
