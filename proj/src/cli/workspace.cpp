#include "osskg/cli/workspace.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>

#include "osskg/corpus/archive.hpp"
#include "osskg/corpus/catalog.hpp"

namespace osskg::cli {
namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

Workspace::Workspace(fs::path root) : root_(std::move(root)) {}

void Workspace::create_layout() const {
  for (const auto& dir : {root_, catalogs(), archives(), documents(), reports(), graph_dir(), out()}) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(ErrorKind::io, "cannot create " + dir.string() + ": " + ec.message());
  }
}

bool Workspace::initialized() const { return fs::is_regular_file(manifest_path()); }

ordered_json Workspace::load_manifest() const {
  if (!initialized()) {
    throw Error(ErrorKind::stage_order, "workspace " + root_.string() + " has not been ingested (run osskg ingest first)");
  }
  ordered_json m;
  try {
    m = ordered_json::parse(corpus::read_file_bytes(manifest_path()));
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::parse, "manifest.json: " + std::string(e.what()));
  }
  if (!m.is_object() || m.value("format", std::string{}) != kWorkspaceFormat) {
    throw Error(ErrorKind::version_mismatch, "manifest.json is not an osskg workspace manifest");
  }
  if (!m.contains("version") || m["version"] != kWorkspaceVersion) {
    throw Error(ErrorKind::version_mismatch, "workspace version " + m.value("version", json()).dump() +
                                                 " (supported: " + std::to_string(kWorkspaceVersion) + ")");
  }
  return m;
}

void Workspace::save_manifest(const ordered_json& manifest) const {
  atomic_write(manifest_path(), manifest.dump(2) + "\n");
}

void Workspace::require_stage(std::string_view stage, std::string_view needed_by) const {
  const auto m = load_manifest();
  const auto stages = m.find("stages");
  if (stages == m.end() || !stages->contains(std::string(stage))) {
    throw Error(ErrorKind::stage_order,
                std::string(needed_by) + " needs stage '" + std::string(stage) + "' to have completed");
  }
}

WorkspaceLock::WorkspaceLock(const fs::path& root) : path_(root / ".lock") {
  const int fd = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
  if (fd < 0) {
    if (errno == EEXIST) {
      throw Error(ErrorKind::locked, "workspace is in use (remove " + path_.string() + " if no command is running)");
    }
    throw Error(ErrorKind::io, "cannot create " + path_.string() + ": " + std::strerror(errno));
  }
  const std::string pid = std::to_string(::getpid()) + "\n";
  [[maybe_unused]] auto n = ::write(fd, pid.data(), pid.size());
  ::close(fd);
}

WorkspaceLock::~WorkspaceLock() {
  std::error_code ec;
  fs::remove(path_, ec);
}

void atomic_write(const fs::path& path, std::string_view content) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::io, "cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error(ErrorKind::io, "write failed: " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw Error(ErrorKind::io, "cannot rename " + tmp.string() + ": " + ec.message());
}

std::string document_to_json_line(const corpus::CodeDocument& doc) {
  ordered_json j;
  j["record_id"] = doc.record_id;
  auto files = ordered_json::array();
  for (const auto& f : doc.files) files.push_back({{"path", f.relative_path}, {"bytes", f.byte_length}});
  j["files"] = std::move(files);
  j["token_count"] = doc.token_count;
  j["merged_text"] = doc.merged_text;
  return j.dump() + "\n";
}

std::string serialize_documents(const std::vector<corpus::CodeDocument>& docs) {
  std::string out;
  for (const auto& d : docs) out += document_to_json_line(d);
  return out;
}

std::vector<corpus::CodeDocument> read_documents(const fs::path& path) {
  std::vector<corpus::CodeDocument> docs;
  if (!fs::exists(path)) return docs;
  std::istringstream in(corpus::read_file_bytes(path));
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const auto j = json::parse(line);
      corpus::CodeDocument d;
      d.record_id = j.at("record_id").get<std::string>();
      for (const auto& f : j.at("files")) {
        d.files.push_back({f.at("path").get<std::string>(), f.at("bytes").get<std::size_t>()});
      }
      d.token_count = j.at("token_count").get<std::size_t>();
      d.merged_text = j.at("merged_text").get<std::string>();
      docs.push_back(std::move(d));
    } catch (const json::exception& e) {
      throw Error(ErrorKind::parse, path.filename().string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return docs;
}

std::vector<corpus::PackageRecord> read_records(const fs::path& jsonl) {
  std::vector<corpus::PackageRecord> records;
  std::istringstream in(corpus::read_file_bytes(jsonl));
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      records.push_back(corpus::record_from_json(json::parse(line)));
    } catch (const std::exception& e) {
      throw Error(ErrorKind::parse, jsonl.filename().string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return records;
}

std::vector<corpus::PackageRecord> read_catalog_dir(const fs::path& dir) {
  std::vector<fs::path> files;
  if (fs::is_directory(dir)) {
    for (const auto& e : fs::directory_iterator(dir)) {
      if (e.is_regular_file() && e.path().extension() == ".jsonl") files.push_back(e.path());
    }
  }
  std::sort(files.begin(), files.end());
  std::vector<corpus::PackageRecord> records;
  for (const auto& f : files) {
    auto part = read_records(f);
    records.insert(records.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
  }
  return records;
}

std::string serialize_records(const std::vector<corpus::PackageRecord>& records) {
  std::string out;
  for (const auto& r : records) out += corpus::record_to_json(r).dump() + "\n";
  return out;
}

std::string serialize_diagnostics(const Diagnostics& diagnostics) {
  std::string out;
  for (const auto& d : diagnostics) out += format_diagnostic(d) + "\n";
  return out;
}

}  // namespace osskg::cli
