#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace osskg::corpus {

enum class ArchiveFormat { tar_gz, tar, zip, gem };

/// By file name: .tar.gz/.tgz, .tar, .zip/.whl, .gem. Case-insensitive.
std::optional<ArchiveFormat> detect_format(const std::filesystem::path& path);

/// Owns a freshly created temporary directory and removes it on destruction.
class ScratchDir {
 public:
  static ScratchDir create(std::string_view prefix = "osskg");

  ScratchDir(ScratchDir&& other) noexcept;
  ScratchDir& operator=(ScratchDir&& other) noexcept;
  ScratchDir(const ScratchDir&) = delete;
  ScratchDir& operator=(const ScratchDir&) = delete;
  ~ScratchDir();

  const std::filesystem::path& path() const noexcept { return path_; }

 private:
  explicit ScratchDir(std::filesystem::path p) : path_(std::move(p)) {}
  void release() noexcept;
  std::filesystem::path path_;
};

struct ArchiveEntry {
  std::string path;  // as stored in the container, '/'-separated
  std::string data;
  bool directory = false;
};

struct UnpackLimits {
  std::uint64_t max_total_bytes = 512ull << 20;
  std::size_t max_entries = 200000;
};

/// Lexically normalizes an entry name ('\\' treated as '/'), dropping "." and
/// empty components. Throws Error(path_traversal) for absolute names, drive
/// letters, or names that still contain ".." after normalization. Returns ""
/// for names that normalize to the archive root.
std::string normalize_entry_path(std::string_view raw);

std::string gunzip(std::string_view compressed, const UnpackLimits& limits = {});
/// Deterministic gzip stream (mtime 0, no file name).
std::string gzip(std::string_view data);

std::vector<ArchiveEntry> read_tar(std::string_view bytes, const UnpackLimits& limits = {});
std::vector<ArchiveEntry> read_zip(std::string_view bytes, const UnpackLimits& limits = {});
/// ustar stream with mtime 0, mode 0644/0755, uid/gid 0.
std::string write_tar(const std::vector<ArchiveEntry>& entries);

/// Extracts into `dest` (which must exist). Regular files and directories
/// only; links and device entries are skipped. For .gem containers the inner
/// data.tar.gz is expanded one level into `dest` and metadata.gz is written
/// as `kGemMetadataFile`. Nested archives are never expanded. Returns the
/// number of files written.
std::size_t unpack_archive_into(const std::filesystem::path& archive,
                                const std::filesystem::path& dest,
                                const UnpackLimits& limits = {});

inline constexpr std::string_view kGemMetadataFile = "metadata.gem.yaml";

/// Extracts into a new scratch directory; the returned object owns the tree.
ScratchDir unpack_archive(const std::filesystem::path& archive, const UnpackLimits& limits = {});

std::string read_file_bytes(const std::filesystem::path& path);

}  // namespace osskg::corpus
