#include <gtest/gtest.h>

#include <fstream>
#include <set>

#include "common/synth.hpp"
#include "osskg/corpus/archive.hpp"
#include "osskg/corpus/catalog.hpp"
#include "osskg/corpus/manifest.hpp"
#include "osskg/corpus/source_tree.hpp"
#include "osskg/util/error.hpp"

using namespace osskg;
using namespace osskg::corpus;
namespace fs = std::filesystem;

namespace {

const fs::path kFixtures = fs::path(OSSKG_SOURCE_DIR) / "tests" / "fixtures" / "archives";

fs::path temp_dir(const std::string& name) {
  auto p = fs::temp_directory_path() / ("osskg_test_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

void write(const fs::path& p, const std::string& s) {
  fs::create_directories(p.parent_path());
  std::ofstream(p, std::ios::binary) << s;
}

template <typename Fn>
ErrorKind error_kind(Fn fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no osskg::Error thrown";
  return ErrorKind::io;
}

const char* kRow =
    R"({"record_id":"a1","ecosystem":"npm","name":"x","version":"1.0.0","source_id":"acad-a",)"
    R"("source_category":"academia","availability":"available","archive_path":"x.tgz",)"
    R"("release_time":"2023-08-09T00:00:00Z","declared_deps":["lodash",["left-pad","^1"]]})";

}  // namespace

TEST(Record, EcosystemParsing) {
  EXPECT_EQ(Ecosystem::parse("NPM"), Ecosystem::npm());
  EXPECT_EQ(Ecosystem::parse("gem"), Ecosystem::rubygems());
  EXPECT_EQ(Ecosystem::parse("PyPI"), Ecosystem::pypi());
  EXPECT_EQ(Ecosystem::parse("cargo").name(), "cargo");
}

TEST(Record, InvariantsNameTheViolatedField) {
  auto r = synth::record("a", "x", "1", "acad-a", true);
  EXPECT_FALSE(first_invalid_field(r));
  auto missing_archive = r;
  missing_archive.archive_path.reset();
  EXPECT_EQ(first_invalid_field(missing_archive), "archive_path");
  auto unavailable_with_archive = synth::record("a", "x", "1", "acad-a", false);
  unavailable_with_archive.archive_path = "x.tgz";
  EXPECT_EQ(first_invalid_field(unavailable_with_archive), "archive_path");
  auto bad_hash = r;
  bad_hash.sha256 = "ABC";
  EXPECT_EQ(first_invalid_field(bad_hash), "sha256");
  auto backwards = r;
  backwards.release_time = synth::day(2023, 8, 9);
  backwards.removal_time = synth::day(2023, 8, 1);
  EXPECT_EQ(first_invalid_field(backwards), "removal_time");
}

TEST(Catalog, RoundTripsThroughJson) {
  const auto r = record_from_json(nlohmann::json::parse(kRow));
  EXPECT_EQ(r.declared_deps.size(), 2u);
  EXPECT_EQ(r.declared_deps[1].constraint, "^1");
  const auto again = record_from_json(nlohmann::json::parse(record_to_json(r).dump()));
  EXPECT_EQ(r, again);
}

TEST(Catalog, RejectsTheWholeFileAndNamesRowAndField) {
  const auto dir = temp_dir("catalog");
  std::string bad = kRow;
  bad.replace(bad.find("\"1.0.0\""), 7, "\"\"");
  write(dir / "c.jsonl", std::string(kRow) + "\n" + bad + "\n");
  try {
    load_catalog(dir / "c.jsonl");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::validation);
    const std::string msg = e.what();
    EXPECT_NE(msg.find("c.jsonl:2"), std::string::npos) << msg;
    EXPECT_NE(msg.find("version"), std::string::npos) << msg;
  }
}

TEST(Catalog, DuplicateIdsAndUnknownKeys) {
  const auto dir = temp_dir("catalog_dup");
  write(dir / "d.jsonl", std::string(kRow) + "\n" + kRow + "\n");
  EXPECT_EQ(error_kind([&] { load_catalog(dir / "d.jsonl"); }), ErrorKind::duplicate_id);
  std::string extra = kRow;
  extra.insert(1, R"("colour":"red",)");
  write(dir / "u.jsonl", extra + "\n");
  EXPECT_EQ(error_kind([&] { load_catalog(dir / "u.jsonl"); }), ErrorKind::validation);
}

TEST(Catalog, ArchiveRootIsChecked) {
  const auto dir = temp_dir("catalog_root");
  write(dir / "c.jsonl", std::string(kRow) + "\n");
  EXPECT_EQ(error_kind([&] { load_catalog(dir / "c.jsonl", dir); }), ErrorKind::validation);
  write(dir / "x.tgz", "data");
  EXPECT_EQ(load_catalog(dir / "c.jsonl", dir).records.size(), 1u);
}

TEST(Archive, FormatDetection) {
  EXPECT_EQ(detect_format("a.TGZ"), ArchiveFormat::tar_gz);
  EXPECT_EQ(detect_format("a.tar.gz"), ArchiveFormat::tar_gz);
  EXPECT_EQ(detect_format("a.whl"), ArchiveFormat::zip);
  EXPECT_EQ(detect_format("a.gem"), ArchiveFormat::gem);
  EXPECT_FALSE(detect_format("a.rar"));
}

TEST(Archive, EntryPathNormalization) {
  EXPECT_EQ(normalize_entry_path("./a//b/./c.js"), "a/b/c.js");
  EXPECT_EQ(normalize_entry_path("a\\b.js"), "a/b.js");
  EXPECT_EQ(normalize_entry_path("a/b/../c.js"), "a/c.js");
  EXPECT_EQ(normalize_entry_path("./"), "");
  for (const char* bad : {"../x", "/etc/passwd", "a/../../x", "C:\\x"}) {
    EXPECT_EQ(error_kind([&] { normalize_entry_path(bad); }), ErrorKind::path_traversal) << bad;
  }
}

TEST(Archive, ReadsEveryContainerFromAnIndependentWriter) {
  const std::set<std::string> expected = {"pkg/README.md", "pkg/index.js", "pkg/lib/util.py"};
  for (const char* name : {"good.tar.gz", "good.tar", "stored.zip", "deflated.zip", "multimember.tar.gz"}) {
    const auto dir = temp_dir(std::string("unpack_") + name);
    EXPECT_EQ(unpack_archive_into(kFixtures / name, dir), 3u) << name;
    std::set<std::string> found;
    for (const auto& e : fs::recursive_directory_iterator(dir)) {
      if (e.is_regular_file()) found.insert(fs::relative(e.path(), dir).generic_string());
    }
    EXPECT_EQ(found, expected) << name;
    std::ifstream in(dir / "pkg/index.js");
    std::string first;
    std::getline(in, first);
    EXPECT_EQ(first, "const os = require('os');") << name;
  }
}

TEST(Archive, GemExpandsDataOneLevelAndKeepsMetadata) {
  const auto dir = temp_dir("gem");
  unpack_archive_into(kFixtures / "demo.gem", dir);
  EXPECT_TRUE(fs::exists(dir / "lib/gem.rb"));
  EXPECT_TRUE(fs::exists(dir / "inner.tar.gz"));  // nested archive left alone
  EXPECT_TRUE(fs::exists(dir / std::string(kGemMetadataFile)));
  const auto deps = parse_manifest(dir, Ecosystem::rubygems());
  ASSERT_EQ(deps.size(), 1u);
  EXPECT_EQ(deps[0].name, "rake");
}

TEST(Archive, HostileAndBrokenInputs) {
  const auto dir = temp_dir("hostile");
  EXPECT_EQ(error_kind([&] { unpack_archive_into(kFixtures / "traversal.tar.gz", dir); }), ErrorKind::path_traversal);
  EXPECT_FALSE(fs::exists(dir.parent_path() / "evil.js"));
  EXPECT_EQ(error_kind([&] { unpack_archive_into(kFixtures / "absolute.zip", dir); }), ErrorKind::path_traversal);
  EXPECT_EQ(error_kind([&] { unpack_archive_into(kFixtures / "truncated.tar.gz", dir); }), ErrorKind::corrupt_archive);
  EXPECT_EQ(error_kind([&] { unpack_archive_into(kFixtures / "notes.rar", dir); }), ErrorKind::unsupported_archive);

  const auto link_dir = temp_dir("symlink");
  EXPECT_EQ(unpack_archive_into(kFixtures / "symlink.tar.gz", link_dir), 1u);
  EXPECT_FALSE(fs::exists(fs::symlink_status(link_dir / "pkg/link.js")));
}

TEST(Archive, SizeLimitIsEnforced) {
  const auto dir = temp_dir("limit");
  UnpackLimits tight;
  tight.max_total_bytes = 16;
  EXPECT_EQ(error_kind([&] { unpack_archive_into(kFixtures / "good.tar.gz", dir, tight); }),
            ErrorKind::corrupt_archive);
}

TEST(Archive, WriterRoundTripsAndIsDeterministic) {
  std::vector<ArchiveEntry> entries = {{"a/b.js", "x = 1\n", false}, {std::string(120, 'n') + ".py", "y\n", false}};
  const auto tar = write_tar(entries);
  EXPECT_EQ(tar, write_tar(entries));
  const auto back = read_tar(gunzip(gzip(tar)));
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].path, "a/b.js");
  EXPECT_EQ(back[1].path, entries[1].path);
  EXPECT_EQ(back[1].data, "y\n");
  EXPECT_EQ(gzip("abc"), gzip("abc"));
}

TEST(ScratchDir, RemovedOnDestruction) {
  fs::path p;
  {
    auto s = ScratchDir::create();
    p = s.path();
    EXPECT_TRUE(fs::is_directory(p));
  }
  EXPECT_FALSE(fs::exists(p));
}

TEST(SourceTree, OnlyCodeFilesInByteOrderWithNewlineSeparator) {
  const auto doc = build_code_document("r", {{"b.py", "B"}, {"a.js", "A"}, {"README.md", "no"}, {"Z.rb", "Z"}});
  ASSERT_EQ(doc.files.size(), 3u);
  EXPECT_EQ(doc.files[0].relative_path, "Z.rb");
  EXPECT_EQ(doc.files[1].relative_path, "a.js");
  EXPECT_EQ(doc.merged_text, "Z\nA\nB");
  EXPECT_EQ(doc.file_text(1), "A");
  EXPECT_EQ(doc.file_offset(2), 4u);
  EXPECT_TRUE(build_code_document("e", {{"x.txt", "t"}}).code_empty());
}

TEST(SourceTree, InvalidUtf8IsReplacedDeterministically) {
  EXPECT_EQ(decode_utf8_lossy("a\xff" "b"), "a\xEF\xBF\xBD" "b");
  EXPECT_EQ(decode_utf8_lossy("\xC3\xA9"), "\xC3\xA9");
  EXPECT_EQ(decode_utf8_lossy("\xC3"), "\xEF\xBF\xBD");
}

TEST(Manifest, PackageJson) {
  const auto deps = parse_package_json(R"({"name":"x","dependencies":{"a":"^1","b":"2.0.0"},"devDependencies":{"c":"1"}})");
  ASSERT_EQ(deps.size(), 2u);
  EXPECT_EQ(deps[0], (Dependency{"a", "^1"}));
  EXPECT_EQ(error_kind([] { parse_package_json("{not json"); }), ErrorKind::parse);
}

TEST(Manifest, PythonFormats) {
  const auto req = parse_requirements_txt("# c\nrequests>=2.0\n\nflask[async] ==2.1 ; python_version>'3'\n-e .\n");
  ASSERT_EQ(req.size(), 2u);
  EXPECT_EQ(req[0].name, "requests");
  EXPECT_EQ(req[1].name, "flask");
  const auto setup = parse_setup_py("setup(name='x', install_requires=['colorama', \"pycryptodome>=3\"])");
  ASSERT_EQ(setup.size(), 2u);
  EXPECT_EQ(setup[1].name, "pycryptodome");
  const auto cfg = parse_setup_cfg("[options]\ninstall_requires =\n    six\n    attrs>=20\n[other]\nx=1\n");
  ASSERT_EQ(cfg.size(), 2u);
  const auto info = parse_pkg_info("Name: x\nRequires-Dist: urllib3 (>=1.2)\nRequires-Dist: idna\n");
  ASSERT_EQ(info.size(), 2u);
  EXPECT_EQ(info[0].name, "urllib3");
}

TEST(Manifest, Gemspec) {
  const auto deps = parse_gemspec(
      "Gem::Specification.new do |s|\n  s.add_dependency 'rest-client', '~> 2.0'\n"
      "  s.add_runtime_dependency \"json\"\n  s.add_development_dependency 'rspec'\nend\n");
  ASSERT_EQ(deps.size(), 2u);
  EXPECT_EQ(deps[0].name, "rest-client");
  EXPECT_EQ(deps[1].name, "json");
}

TEST(Manifest, MalformedManifestIsAWarningNotAFailure) {
  const auto dir = temp_dir("manifest");
  write(dir / "package/package.json", "{broken");
  Diagnostics diags;
  EXPECT_TRUE(parse_manifest(dir, Ecosystem::npm(), &diags).empty());
  ASSERT_EQ(diags.size(), 1u);
  EXPECT_EQ(diags[0].severity, Severity::warning);
}
