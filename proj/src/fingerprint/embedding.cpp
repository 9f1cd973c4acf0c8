#include "osskg/fingerprint/embedding.hpp"

#include <cmath>
#include <stdexcept>

#include "osskg/corpus/source_tree.hpp"
#include "osskg/fingerprint/hashing.hpp"
#include "osskg/util/error.hpp"

namespace osskg::fingerprint {

ShingleEmbedding::ShingleEmbedding(std::size_t dim, std::size_t n, std::uint64_t seed)
    : dim_(dim), n_(n), seed_(seed) {
  if (dim == 0 || n == 0) throw std::invalid_argument("shingle embedding needs dim >= 1 and n >= 1");
}

std::size_t ShingleEmbedding::bucket(const std::vector<std::string>& tokens, std::size_t begin,
                                     std::size_t n) const {
  // Arity prefix keeps 1-, 2- and 3-grams of the same text apart; 0x1f never
  // appears inside a token.
  std::string key(1, static_cast<char>('0' + n));
  for (std::size_t k = 0; k < n; ++k) {
    key += '\x1f';
    key += tokens[begin + k];
  }
  return static_cast<std::size_t>(fnv1a64(key, seed_) % dim_);
}

std::vector<double> ShingleEmbedding::embed(const Snippet& snippet) const {
  const auto& t = snippet.tokens;
  if (t.empty()) throw std::invalid_argument("cannot embed an empty snippet");
  std::vector<double> v(dim_, 0.0);
  if (t.size() >= n_) {
    for (std::size_t i = 0; i + n_ <= t.size(); ++i) v[bucket(t, i, n_)] += 1.0;
  } else {
    for (std::size_t n = 1; n <= std::min<std::size_t>(2, t.size()); ++n) {
      for (std::size_t i = 0; i + n <= t.size(); ++i) v[bucket(t, i, n)] += 1.0;
    }
  }
  double norm = 0.0;
  for (double x : v) norm += x * x;
  norm = std::sqrt(norm);
  for (double& x : v) x /= norm;
  return v;
}

std::unique_ptr<EmbeddingBackend> make_embedding_backend(const std::string& name, std::size_t dim) {
  if (name == "shingle3") return std::make_unique<ShingleEmbedding>(dim, 3);
  if (name == "shingle2") return std::make_unique<ShingleEmbedding>(dim, 2);
  if (name == "shingle4") return std::make_unique<ShingleEmbedding>(dim, 4);
  throw Error(ErrorKind::bad_flag, "unknown embedding backend: " + name);
}

PackageVector package_vector(std::string record_id, const std::vector<Snippet>& snippets,
                             const EmbeddingBackend& backend, std::size_t s_max) {
  if (snippets.empty()) throw Error(ErrorKind::code_empty, "no snippets for " + record_id);
  PackageVector pv;
  pv.record_id = std::move(record_id);
  pv.dim = backend.dim() * s_max;
  pv.values.assign(pv.dim, 0.0);
  pv.snippet_count = snippets.size();
  const std::size_t used = std::min(s_max, snippets.size());
  for (std::size_t s = 0; s < used; ++s) {
    const auto v = backend.embed(snippets[s]);
    std::copy(v.begin(), v.end(), pv.values.begin() + static_cast<std::ptrdiff_t>(s * backend.dim()));
  }
  return pv;
}

PackageVector fingerprint_document(const corpus::CodeDocument& doc, const FingerprintConfig& config,
                                   const EmbeddingBackend& backend) {
  const auto snippets = split_snippets(tokenize(doc.merged_text), config.snippet_len);
  return package_vector(doc.record_id, snippets, backend, config.s_max);
}

double cosine(std::span<const double> a, std::span<const double> b) noexcept {
  const std::size_t n = std::min(a.size(), b.size());
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  for (std::size_t i = n; i < a.size(); ++i) na += a[i] * a[i];
  for (std::size_t i = n; i < b.size(); ++i) nb += b[i] * b[i];
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

}  // namespace osskg::fingerprint
