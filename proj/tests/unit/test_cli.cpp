#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "osskg/cli/cli.hpp"
#include "osskg/cli/workspace.hpp"

namespace fs = std::filesystem;
using osskg::cli::run_cli;

namespace {

const fs::path kDemo = fs::path(OSSKG_SOURCE_DIR) / "demo";

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path fresh(const std::string& name) {
  auto p = fs::temp_directory_path() / ("osskg_cli_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(p);
  return p;
}

std::vector<std::string> ingest_args(const fs::path& ws) {
  std::vector<std::string> a = {"ingest", "--out", ws.string(), "--archives", (kDemo / "archives").string(),
                                "--reports", (kDemo / "reports").string(), "--benign",
                                (kDemo / "benign" / "catalog.jsonl").string(), "--benign-archives",
                                (kDemo / "benign" / "archives").string()};
  for (const char* s : {"acad-a", "ind-b", "ind-c"}) {
    a.push_back("--catalog");
    a.push_back((kDemo / "catalogs" / (std::string(s) + ".jsonl")).string());
  }
  return a;
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    std::ifstream in(e.path(), std::ios::binary);
    files[fs::relative(e.path(), dir).generic_string()] = std::string(std::istreambuf_iterator<char>(in), {});
  }
  return files;
}

}  // namespace

TEST(Cli, StageOrderBeforeIngest) {
  const auto ws = fresh("order");
  const auto r = run({"analyze", "missing", "--workspace", ws.string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.err.rfind("error: stage-order: ", 0), 0u) << r.err;
  EXPECT_EQ(std::count(r.err.begin(), r.err.end(), '\n'), 1);
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  const auto r = run({"graph", "build", "--workspace", "/tmp/x", "--edges", "dup,bogus"});
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(r.err.rfind("error: bad-flag: ", 0), 0u) << r.err;
  EXPECT_EQ(run({"analyze", "missing", "--no-such-flag"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, WorkspaceFromEnvironment) {
  const auto ws = fresh("env");
  ::setenv("OSSKG_WORKSPACE", ws.string().c_str(), 1);
  const auto r = run({"graph", "build"});
  ::unsetenv("OSSKG_WORKSPACE");
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find(ws.string()), std::string::npos) << r.err;
}

TEST(Cli, LockAndVersionMismatch) {
  const auto ws = fresh("lock");
  ASSERT_EQ(run(ingest_args(ws)).code, 0);
  {
    osskg::cli::WorkspaceLock held(ws);
    const auto r = run({"graph", "build", "--workspace", ws.string()});
    EXPECT_EQ(r.err.rfind("error: locked: ", 0), 0u) << r.err;
  }
  std::ofstream(ws / "manifest.json") << R"({"format":"osskg-workspace","version":99,"stages":{}})";
  const auto r = run({"graph", "build", "--workspace", ws.string()});
  EXPECT_EQ(r.err.rfind("error: version-mismatch: ", 0), 0u) << r.err;
  fs::remove_all(ws);
}

TEST(Cli, ConfigFileSuppliesFlagsAndFlagsWin) {
  const auto ws = fresh("config");
  const auto conf = fresh("config_file");
  {
    std::ofstream(conf) << "# demo\nn_clusters = 99\niters=3\nseed=7\n";
  }
  ASSERT_EQ(run(ingest_args(ws)).code, 0);
  ASSERT_EQ(run({"graph", "build", "--workspace", ws.string()}).code, 0);
  const auto bad = run({"detect", "eval", "--workspace", ws.string(), "--config", conf.string()});
  EXPECT_EQ(bad.err.rfind("error: insufficient-data: ", 0), 0u) << bad.err;
  const auto ok = run({"detect", "eval", "--workspace", ws.string(), "--config", conf.string(), "--n-clusters", "2"});
  ASSERT_EQ(ok.code, 0) << ok.err;
  const auto manifest = osskg::cli::Workspace(ws).load_manifest();
  EXPECT_EQ(manifest["stages"]["detect"]["iterations"], 3);
  EXPECT_EQ(manifest["stages"]["detect"]["seed"], 7);
  fs::remove_all(ws);
  fs::remove(conf);
}

TEST(Cli, StagesAreIdempotentAndExportIsStable) {
  const auto ws = fresh("idem");
  ASSERT_EQ(run(ingest_args(ws)).code, 0);
  ASSERT_EQ(run({"graph", "build", "--workspace", ws.string()}).code, 0);
  ASSERT_EQ(run({"analyze", "all", "--workspace", ws.string()}).code, 0);
  const auto first = snapshot(ws);
  ASSERT_EQ(run(ingest_args(ws)).code, 0);
  ASSERT_EQ(run({"graph", "build", "--workspace", ws.string()}).code, 0);
  ASSERT_EQ(run({"analyze", "all", "--workspace", ws.string()}).code, 0);
  EXPECT_EQ(snapshot(ws), first);

  const auto b1 = ws / "b1.tar.gz";
  const auto b2 = ws / "b2.tar.gz";
  ASSERT_EQ(run({"export", "--workspace", ws.string(), "--out", b1.string()}).code, 0);
  ASSERT_EQ(run({"export", "--workspace", ws.string(), "--out", b2.string()}).code, 0);
  const auto files = snapshot(ws);
  EXPECT_EQ(files.at("b1.tar.gz"), files.at("b2.tar.gz"));

  ASSERT_EQ(run(ingest_args(ws)).code, 0);
  EXPECT_EQ(run({"analyze", "overlap", "--workspace", ws.string()}).err.rfind("error: stage-order: ", 0), 0u);
  fs::remove_all(ws);
}
