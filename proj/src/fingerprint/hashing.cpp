#include "osskg/fingerprint/hashing.hpp"

#include <openssl/evp.h>

#include <algorithm>

#include "osskg/corpus/archive.hpp"
#include "osskg/corpus/source_tree.hpp"
#include "osskg/util/error.hpp"

namespace osskg::fingerprint {

struct Sha256::Impl {
  EVP_MD_CTX* ctx = nullptr;
};

Sha256::Sha256() : impl_(std::make_unique<Impl>()) {
  impl_->ctx = EVP_MD_CTX_new();
  if (!impl_->ctx || EVP_DigestInit_ex(impl_->ctx, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorKind::io, "SHA-256 initialization failed");
  }
}

Sha256::~Sha256() {
  if (impl_ && impl_->ctx) EVP_MD_CTX_free(impl_->ctx);
}

void Sha256::update(std::string_view bytes) {
  if (EVP_DigestUpdate(impl_->ctx, bytes.data(), bytes.size()) != 1) {
    throw Error(ErrorKind::io, "SHA-256 update failed");
  }
}

std::string Sha256::finish() {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_DigestFinal_ex(impl_->ctx, md, &len) != 1) throw Error(ErrorKind::io, "SHA-256 final failed");
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned i = 0; i < len; ++i) {
    out += kHex[md[i] >> 4];
    out += kHex[md[i] & 0xf];
  }
  return out;
}

std::string sha256_hex(std::string_view bytes) {
  Sha256 h;
  h.update(bytes);
  return h.finish();
}

std::string package_sha256(std::vector<std::pair<std::string, std::string>> files) {
  std::erase_if(files, [](const auto& f) { return !corpus::is_source_file(f.first); });
  std::sort(files.begin(), files.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  Sha256 h;
  for (const auto& [path, content] : files) {
    h.update(path);
    h.update(std::string_view("\0", 1));
    h.update(content);
    h.update(std::string_view("\0", 1));
  }
  return h.finish();
}

std::string package_sha256(const std::filesystem::path& tree) {
  Sha256 h;
  for (const auto& rel : corpus::enumerate_source_files(tree)) {
    h.update(rel);
    h.update(std::string_view("\0", 1));
    h.update(corpus::read_file_bytes(tree / std::filesystem::path(rel)));
    h.update(std::string_view("\0", 1));
  }
  return h.finish();
}

std::string package_sha256(const corpus::CodeDocument& doc) {
  Sha256 h;
  for (std::size_t i = 0; i < doc.files.size(); ++i) {
    h.update(doc.files[i].relative_path);
    h.update(std::string_view("\0", 1));
    h.update(doc.file_text(i));
    h.update(std::string_view("\0", 1));
  }
  return h.finish();
}

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed) noexcept {
  constexpr std::uint64_t kOffset = 0xcbf29ce484222325ull;
  constexpr std::uint64_t kPrime = 0x100000001b3ull;
  std::uint64_t h = kOffset;
  for (int i = 0; i < 8; ++i) {
    h ^= (seed >> (8 * i)) & 0xff;
    h *= kPrime;
  }
  for (unsigned char c : bytes) {
    h ^= c;
    h *= kPrime;
  }
  return h;
}

}  // namespace osskg::fingerprint
