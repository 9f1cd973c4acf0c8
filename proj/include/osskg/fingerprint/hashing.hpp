#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace osskg::corpus {
struct CodeDocument;
}

namespace osskg::fingerprint {

/// Incremental SHA-256 over OpenSSL's EVP interface.
class Sha256 {
 public:
  Sha256();
  ~Sha256();
  Sha256(const Sha256&) = delete;
  Sha256& operator=(const Sha256&) = delete;

  void update(std::string_view bytes);
  /// Lowercase hex digest. The object must not be updated afterwards.
  std::string finish();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

std::string sha256_hex(std::string_view bytes);

/// Digest of the canonical stream: for each source file in byte-wise path
/// order, `path + '\0' + content + '\0'`. Non-source files are ignored.
std::string package_sha256(std::vector<std::pair<std::string, std::string>> files);
/// Same stream read from an unpacked tree (raw file bytes).
std::string package_sha256(const std::filesystem::path& tree);
/// Same stream over a document's decoded file texts; equals the tree digest
/// whenever every file is valid UTF-8.
std::string package_sha256(const corpus::CodeDocument& doc);

/// 64-bit FNV-1a seeded by mixing `seed` into the offset basis. Platform
/// independent: operates on bytes only.
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed = 0) noexcept;

}  // namespace osskg::fingerprint
