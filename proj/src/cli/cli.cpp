#include "osskg/cli/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "osskg/cli/commands.hpp"
#include "osskg/util/error.hpp"

namespace osskg::cli {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

/// key=value lines; '#' starts a comment. Underscores in keys become dashes.
std::vector<std::pair<std::string, std::string>> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot read config " + path);
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::bad_flag, path + ":" + std::to_string(line_no) + ": expected key=value");
    }
    auto key = trim(line.substr(0, eq));
    while (key.starts_with("-")) key.erase(0, 1);
    std::replace(key.begin(), key.end(), '_', '-');
    out.emplace_back(key, trim(line.substr(eq + 1)));
  }
  return out;
}

bool given(const std::vector<std::string>& args, const std::string& flag) {
  for (const auto& a : args) {
    if (a == flag || a.starts_with(flag + "=")) return true;
  }
  return false;
}

std::vector<edges::EdgeKind> parse_kinds(const std::vector<std::string>& items) {
  std::vector<edges::EdgeKind> out;
  for (const auto& item : items) {
    std::stringstream ss(item);
    std::string part;
    while (std::getline(ss, part, ',')) {
      part = trim(part);
      if (part.empty()) continue;
      if (part == "all") {
        out.assign(std::begin(edges::kAllEdgeKinds), std::end(edges::kAllEdgeKinds));
        continue;
      }
      auto k = edges::parse_edge_kind(part);
      if (!k) throw Error(ErrorKind::bad_flag, "unknown edge kind '" + part + "'");
      if (std::find(out.begin(), out.end(), *k) == out.end()) out.push_back(*k);
    }
  }
  return out;
}

struct Common {
  std::string workspace;
  std::uint64_t seed = 42;
  unsigned threads = 0;
  std::string config;

  void attach(CLI::App* app) {
    app->add_option("--workspace", workspace, "workspace directory (default: $OSSKG_WORKSPACE)");
    app->add_option("--seed", seed, "random seed")->capture_default_str();
    app->add_option("--threads", threads, "worker threads, 0 for all cores")->capture_default_str();
    app->add_option("--config", config, "key=value file supplying defaults for any flag");
  }

  CommonOptions resolve() const {
    CommonOptions c;
    std::string ws = workspace;
    if (ws.empty()) {
      if (const char* env = std::getenv("OSSKG_WORKSPACE")) ws = env;
    }
    if (ws.empty()) throw Error(ErrorKind::bad_flag, "no workspace: pass --workspace or set OSSKG_WORKSPACE");
    c.workspace = ws;
    c.seed = seed;
    c.threads = threads;
    return c;
  }
};

std::optional<fs::path> opt_path(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return fs::path(s);
}

/// Injects config-file values as flags the user did not pass explicitly.
/// Only options the selected leaf subcommand knows are injected.
std::vector<std::string> apply_config(std::vector<std::string> args, CLI::App& app) {
  std::string config_path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) config_path = args[i + 1];
    if (args[i].starts_with("--config=")) config_path = args[i].substr(9);
  }
  if (config_path.empty()) return args;

  CLI::App* leaf = &app;
  for (const auto& a : args) {
    if (a.starts_with("-")) break;
    CLI::App* sub = nullptr;
    try {
      sub = leaf->get_subcommand(a);
    } catch (const CLI::OptionNotFound&) {
      break;
    }
    leaf = sub;
  }
  for (const auto& [key, value] : read_config(config_path)) {
    const std::string flag = "--" + key;
    if (key == "config" || given(args, flag)) continue;
    const CLI::Option* opt = leaf->get_option_no_throw(flag);
    if (!opt) continue;
    if (opt->get_expected_min() == 0) {
      if (value == "true" || value == "1" || value == "yes") args.push_back(flag);
    } else {
      args.push_back(flag);
      args.push_back(value);
    }
  }
  return args;
}

}  // namespace

int run_cli(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Malicious open-source package knowledge graph toolkit", "osskg"};
  app.set_version_flag("--version", std::string(OSSKG_VERSION));
  app.require_subcommand(1);

  std::function<void()> action;

  // ingest
  Common ingest_common;
  std::vector<std::string> ingest_catalogs;
  std::string ingest_out, ingest_archives, ingest_reports, ingest_benign, ingest_benign_archives;
  auto* ingest = app.add_subcommand("ingest", "load catalogs and archives into a workspace");
  ingest_common.attach(ingest);
  ingest->add_option("--catalog", ingest_catalogs, "source catalog (.jsonl), repeatable")->required();
  ingest->add_option("--archives", ingest_archives, "directory that archive_path values are relative to");
  ingest->add_option("--reports", ingest_reports, "directory of security report .json files");
  ingest->add_option("--benign", ingest_benign, "catalog of legitimate packages for detection");
  ingest->add_option("--benign-archives", ingest_benign_archives, "archive root for --benign (default --archives)");
  ingest->add_option("--out", ingest_out, "workspace to create (alias of --workspace)");
  ingest->callback([&] {
    IngestOptions o;
    if (!ingest_out.empty()) {
      if (!ingest_common.workspace.empty() && ingest_common.workspace != ingest_out) {
        throw Error(ErrorKind::bad_flag, "--out and --workspace disagree");
      }
      ingest_common.workspace = ingest_out;
    }
    o.common = ingest_common.resolve();
    o.catalogs.assign(ingest_catalogs.begin(), ingest_catalogs.end());
    o.archives = opt_path(ingest_archives);
    o.reports = opt_path(ingest_reports);
    o.benign = opt_path(ingest_benign);
    o.benign_archives = opt_path(ingest_benign_archives);
    action = [&out, o] { cmd_ingest(o, out); };
  });

  // graph build
  Common graph_common;
  std::vector<std::string> graph_edges;
  std::string graph_suppress, graph_patterns;
  GraphOptions graph_defaults;
  auto* graph = app.add_subcommand("graph", "knowledge graph construction");
  graph->require_subcommand(1);
  auto* build = graph->add_subcommand("build", "build all edge kinds and export the graph");
  graph_common.attach(build);
  build->add_option("--edges", graph_edges, "edge kinds: dup,sim,dep,coex (default all)");
  build->add_option("--suppressions", graph_suppress, "record_id<TAB>dep_name lines to ignore");
  build->add_option("--patterns", graph_patterns, "dependency pattern file");
  build->add_option("--snippet-len", graph_defaults.fingerprint.snippet_len)->capture_default_str();
  build->add_option("--snippet-dim", graph_defaults.fingerprint.snippet_dim)->capture_default_str();
  build->add_option("--s-max", graph_defaults.fingerprint.s_max)->capture_default_str();
  build->add_option("--embedding", graph_defaults.fingerprint.embedding_backend)->capture_default_str();
  build->add_option("--min-similarity", graph_defaults.cluster.min_similarity)->capture_default_str();
  build->add_option("--min-silhouette", graph_defaults.cluster.min_silhouette)->capture_default_str();
  build->add_option("--k-max", graph_defaults.cluster.k_max)->capture_default_str();
  build->add_option("--restarts", graph_defaults.cluster.restarts)->capture_default_str();
  build->callback([&] {
    GraphOptions o = graph_defaults;
    o.common = graph_common.resolve();
    if (!graph_edges.empty()) {
      const auto kinds = parse_kinds(graph_edges);
      o.kinds = std::set<edges::EdgeKind>(kinds.begin(), kinds.end());
    }
    o.suppressions = opt_path(graph_suppress);
    o.patterns = opt_path(graph_patterns);
    action = [&out, o] { cmd_graph_build(o, out); };
  });

  // analyze <analysis>
  Common analyze_common;
  std::vector<std::string> analyze_kinds;
  std::string analyze_out;
  auto* analyze = app.add_subcommand("analyze", "tables over the built graph");
  analyze->require_subcommand(1);
  const std::vector<std::pair<std::string, std::string>> analyses = {
      {"overlap", "source overlap matrix"},
      {"missing", "local and global missing rates"},
      {"occurrences", "sources per identity group"},
      {"subgraphs", "subgraph counts and sizes (--kind)"},
      {"ops", "change operations inside subgraphs (--kind)"},
      {"active", "active-period CDF (--kind)"},
      {"dep-reuse", "most reused dependency targets"},
      {"ioc", "IoC and domain rankings"},
      {"timeline", "releases per month"},
      {"all", "every analysis"}};
  for (const auto& [name, help] : analyses) {
    auto* sub = analyze->add_subcommand(name, help);
    analyze_common.attach(sub);
    sub->add_option("--out", analyze_out, "output directory (default <workspace>/out)");
    if (name == "subgraphs" || name == "ops" || name == "active" || name == "all") {
      sub->add_option("--kind", analyze_kinds, "edge kind(s), comma separated");
    }
    sub->callback([&, name = name] {
      AnalyzeOptions o;
      o.common = analyze_common.resolve();
      o.analysis = name;
      o.kinds = parse_kinds(analyze_kinds);
      o.out = opt_path(analyze_out);
      action = [&out, o] { cmd_analyze(o, out); };
    });
  }

  // detect eval
  Common detect_common;
  std::string detect_from = "similar", detect_out;
  std::vector<std::string> detect_models;
  DetectOptions detect_defaults;
  auto* detect = app.add_subcommand("detect", "detector evaluation");
  detect->require_subcommand(1);
  auto* eval = detect->add_subcommand("eval", "cluster-aware vs random split evaluation");
  detect_common.attach(eval);
  eval->add_option("--clusters-from", detect_from, "edge kind whose components form clusters")->capture_default_str();
  eval->add_option("--n-clusters", detect_defaults.n_clusters, "clusters drawn into each test set")
      ->capture_default_str();
  eval->add_option("--iters", detect_defaults.iterations, "iterations")->capture_default_str();
  eval->add_option("--model", detect_models, "knn|linear, repeatable (default both)");
  eval->add_option("--out", detect_out, "output directory (default <workspace>/out)");
  eval->callback([&] {
    DetectOptions o = detect_defaults;
    o.common = detect_common.resolve();
    auto kind = edges::parse_edge_kind(detect_from);
    if (!kind) throw Error(ErrorKind::bad_flag, "unknown edge kind '" + detect_from + "'");
    o.clusters_from = *kind;
    if (!detect_models.empty()) {
      o.models.clear();
      for (const auto& m : detect_models) {
        std::stringstream ss(m);
        std::string part;
        while (std::getline(ss, part, ',')) {
          if (part != "knn" && part != "linear") throw Error(ErrorKind::bad_flag, "unknown model '" + part + "'");
          o.models.push_back(part);
        }
      }
    }
    o.out = opt_path(detect_out);
    action = [&out, o] { cmd_detect_eval(o, out); };
  });

  // export
  Common export_common;
  std::string export_bundle;
  auto* exp = app.add_subcommand("export", "bundle manifest, graph, catalogs and tables into a .tar.gz");
  export_common.attach(exp);
  exp->add_option("--out", export_bundle, "bundle path")->required();
  exp->callback([&] {
    ExportOptions o;
    o.common = export_common.resolve();
    o.bundle = export_bundle;
    action = [&out, o] { cmd_export(o, out); };
  });

  try {
    auto args = apply_config(raw_args, app);
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
    if (action) action();
    return 0;
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << OSSKG_VERSION << '\n';
    return 0;
  } catch (const CLI::ParseError& e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    err << "error: bad-flag: " << msg << '\n';
    return 2;
  } catch (const Error& e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    err << "error: " << to_string(e.kind()) << ": " << msg << '\n';
    return e.kind() == ErrorKind::bad_flag ? 2 : 1;
  } catch (const std::exception& e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    err << "error: internal: " << msg << '\n';
    return 1;
  }
}

int run_cli(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run_cli(args, std::cout, std::cerr);
}

}  // namespace osskg::cli
