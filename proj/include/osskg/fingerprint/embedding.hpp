#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "osskg/fingerprint/tokenize.hpp"

namespace osskg::corpus {
struct CodeDocument;
}

namespace osskg::fingerprint {

struct FingerprintConfig {
  std::size_t snippet_len = kDefaultSnippetLen;
  std::size_t snippet_dim = 256;
  std::size_t s_max = 16;
  std::string embedding_backend = "shingle3";
};

/// Maps one snippet to a fixed-length vector. Implementations must be pure
/// and deterministic so that equal snippets give equal vectors.
class EmbeddingBackend {
 public:
  virtual ~EmbeddingBackend() = default;
  virtual std::string name() const = 0;
  virtual std::size_t dim() const noexcept = 0;
  /// Precondition: snippet is non-empty.
  virtual std::vector<double> embed(const Snippet& snippet) const = 0;
};

/// Hashed token shingles: every contiguous n-token shingle increments one of
/// `dim` buckets chosen by a seeded FNV-1a hash; the count vector is
/// L2-normalized. Snippets shorter than n fall back to all 1- and 2-grams.
class ShingleEmbedding final : public EmbeddingBackend {
 public:
  static constexpr std::uint64_t kSeed = 0x6f73736b67ull;

  explicit ShingleEmbedding(std::size_t dim = 256, std::size_t n = 3, std::uint64_t seed = kSeed);

  std::string name() const override { return "shingle" + std::to_string(n_); }
  std::size_t dim() const noexcept override { return dim_; }
  std::vector<double> embed(const Snippet& snippet) const override;

 private:
  std::size_t bucket(const std::vector<std::string>& tokens, std::size_t begin, std::size_t n) const;

  std::size_t dim_;
  std::size_t n_;
  std::uint64_t seed_;
};

/// Known names: "shingle3" (default), "shingle2", "shingle4". Throws
/// Error(bad_flag) for anything else.
std::unique_ptr<EmbeddingBackend> make_embedding_backend(const std::string& name, std::size_t dim);

/// Fixed-dimension package fingerprint: first s_max snippet vectors
/// concatenated, zero-padded to snippet_dim * s_max.
struct PackageVector {
  std::string record_id;
  std::size_t dim = 0;
  std::vector<double> values;
  std::size_t snippet_count = 0;  // before capping at s_max

  friend bool operator==(const PackageVector&, const PackageVector&) = default;
};

/// Throws Error(code_empty) when `snippets` is empty.
PackageVector package_vector(std::string record_id, const std::vector<Snippet>& snippets,
                             const EmbeddingBackend& backend, std::size_t s_max = 16);

/// tokenize -> split_snippets -> package_vector.
PackageVector fingerprint_document(const corpus::CodeDocument& doc, const FingerprintConfig& config,
                                   const EmbeddingBackend& backend);

double cosine(std::span<const double> a, std::span<const double> b) noexcept;

}  // namespace osskg::fingerprint
