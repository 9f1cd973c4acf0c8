#include "osskg/edges/similar.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>
#include <tuple>

#include "osskg/util/random.hpp"

namespace osskg::edges {
namespace {

// Gram matrix of the distinct unit vectors plus their multiplicities.
struct WeightedGram {
  std::size_t n = 0;
  std::vector<double> g;
  std::vector<double> w;

  double operator()(std::size_t i, std::size_t j) const { return g[i * n + j]; }
};

struct Partition {
  std::vector<std::size_t> assign;
  double inertia = std::numeric_limits<double>::infinity();
};

// Weighted sums acc[i*k + c] = sum_{j in c} w_j g_ij and per-cluster totals.
struct ClusterSums {
  std::vector<double> acc;
  std::vector<double> weight;
  std::vector<double> self;  // sum_{j,l in c} w_j w_l g_jl

  ClusterSums(const WeightedGram& G, const std::vector<std::size_t>& assign, std::size_t k)
      : acc(G.n * k, 0.0), weight(k, 0.0), self(k, 0.0) {
    for (std::size_t j = 0; j < G.n; ++j) weight[assign[j]] += G.w[j];
    for (std::size_t i = 0; i < G.n; ++i) {
      double* row = &acc[i * k];
      for (std::size_t j = 0; j < G.n; ++j) row[assign[j]] += G.w[j] * G(i, j);
    }
    for (std::size_t j = 0; j < G.n; ++j) self[assign[j]] += G.w[j] * acc[j * k + assign[j]];
  }

  double distance(const WeightedGram& G, std::size_t i, std::size_t c, std::size_t k) const {
    const double W = weight[c];
    return G(i, i) - 2.0 * acc[i * k + c] / W + self[c] / (W * W);
  }
};

double point_distance(const WeightedGram& G, std::size_t i, std::size_t j) {
  return G(i, i) + G(j, j) - 2.0 * G(i, j);
}

Partition run_kmeans(const WeightedGram& G, std::size_t k, std::size_t first_center,
                     const ClusterConfig& cfg) {
  const std::size_t n = G.n;
  // Farthest-first seeding from the given first center.
  std::vector<std::size_t> centers{first_center};
  std::vector<double> min_d(n);
  for (std::size_t i = 0; i < n; ++i) min_d[i] = point_distance(G, i, first_center);
  while (centers.size() < k) {
    std::size_t best = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (std::find(centers.begin(), centers.end(), i) != centers.end()) continue;
      if (best == n || min_d[i] > min_d[best]) best = i;
    }
    centers.push_back(best);
    for (std::size_t i = 0; i < n; ++i) min_d[i] = std::min(min_d[i], point_distance(G, i, best));
  }
  Partition p;
  p.assign.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < k; ++c) {
      const double d = point_distance(G, i, centers[c]);
      if (d < best) {
        best = d;
        p.assign[i] = c;
      }
    }
  }
  for (std::size_t c = 0; c < k; ++c) p.assign[centers[c]] = c;

  for (std::size_t iter = 0; iter < cfg.max_iterations; ++iter) {
    const ClusterSums old(G, p.assign, k);
    std::vector<std::size_t> next(n);
    for (std::size_t i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < k; ++c) {
        if (old.weight[c] == 0.0) continue;
        const double d = old.distance(G, i, c, k);
        if (d < best) {
          best = d;
          next[i] = c;
        }
      }
    }
    // Refill empty clusters with the point farthest from its centroid, taken
    // from a cluster that still has at least two distinct points.
    for (;;) {
      std::vector<std::size_t> counts(k, 0);
      for (auto c : next) ++counts[c];
      auto empty = std::find(counts.begin(), counts.end(), 0u);
      if (empty == counts.end()) break;
      std::size_t donor = n;
      double far = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (counts[next[i]] < 2 || old.weight[next[i]] == 0.0) continue;
        const double d = old.distance(G, i, next[i], k);
        if (d > far) {
          far = d;
          donor = i;
        }
      }
      if (donor == n) break;
      next[donor] = static_cast<std::size_t>(empty - counts.begin());
    }

    const bool unchanged = next == p.assign;
    double max_shift = 0.0;
    if (!unchanged) {
      const ClusterSums now(G, next, k);
      for (std::size_t c = 0; c < k; ++c) {
        if (old.weight[c] == 0.0 || now.weight[c] == 0.0) {
          max_shift = std::numeric_limits<double>::infinity();
          continue;
        }
        double cross = 0.0;
        for (std::size_t b = 0; b < n; ++b) {
          if (next[b] == c) cross += G.w[b] * old.acc[b * k + c];
        }
        const double shift2 = now.self[c] / (now.weight[c] * now.weight[c]) +
                              old.self[c] / (old.weight[c] * old.weight[c]) -
                              2.0 * cross / (now.weight[c] * old.weight[c]);
        max_shift = std::max(max_shift, std::sqrt(std::max(0.0, shift2)));
      }
    }
    p.assign = std::move(next);
    if (unchanged || max_shift <= cfg.tolerance) break;
  }

  const ClusterSums fin(G, p.assign, k);
  p.inertia = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    p.inertia += G.w[i] * std::max(0.0, fin.distance(G, i, p.assign[i], k));
  }
  return p;
}

// Per distinct point silhouette with cosine distance, copies counted by weight.
std::vector<double> silhouette_samples(const WeightedGram& G, const std::vector<std::size_t>& assign,
                                       std::size_t k) {
  const std::size_t n = G.n;
  std::vector<double> weight(k, 0.0);
  for (std::size_t i = 0; i < n; ++i) weight[assign[i]] += G.w[i];
  std::vector<double> s(n, 0.0);
  std::vector<double> dsum(k);
  for (std::size_t i = 0; i < n; ++i) {
    std::fill(dsum.begin(), dsum.end(), 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      dsum[assign[j]] += G.w[j] * std::max(0.0, 1.0 - G(i, j));
    }
    const std::size_t own = assign[i];
    if (weight[own] <= 1.0) continue;  // lone point: silhouette 0
    const double a = dsum[own] / (weight[own] - 1.0);
    double b = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < k; ++c) {
      if (c != own && weight[c] > 0.0) b = std::min(b, dsum[c] / weight[c]);
    }
    if (!std::isfinite(b)) continue;
    const double m = std::max(a, b);
    s[i] = m > 0.0 ? (b - a) / m : 0.0;
  }
  return s;
}

}  // namespace

double SimilarCluster::cosine_between(std::size_t i, std::size_t j) const {
  if (i == j) return 1.0;
  if (i > j) std::swap(i, j);
  const std::size_t m = members.size();
  const std::size_t row_start = i * m - i * (i + 1) / 2;
  return pair_cosine.at(row_start + (j - i - 1));
}

ClusteringResult cluster_similar_detailed(const std::vector<fingerprint::PackageVector>& vectors,
                                          const ClusterConfig& cfg) {
  ClusteringResult result;
  const std::size_t N = vectors.size();
  if (N < 2) return result;
  const std::size_t dim = vectors.front().values.size();
  for (const auto& v : vectors) {
    if (v.values.size() != dim) throw std::invalid_argument("package vectors differ in dimension");
  }

  // Normalize, then merge byte-identical vectors into weighted points.
  std::vector<std::vector<double>> unit(N);
  std::vector<std::size_t> support(N, 0);  // length of the non-zero prefix
  for (std::size_t i = 0; i < N; ++i) {
    unit[i] = vectors[i].values;
    double norm = 0.0;
    for (double x : unit[i]) norm += x * x;
    norm = std::sqrt(norm);
    if (norm == 0.0) throw std::invalid_argument("zero package vector: " + vectors[i].record_id);
    for (double& x : unit[i]) x /= norm;
    std::size_t last = dim;
    while (last > 0 && unit[i][last - 1] == 0.0) --last;
    support[i] = last;
  }
  std::map<std::vector<double>, std::size_t> first_seen;
  std::vector<std::size_t> rep_of(N);
  std::vector<std::size_t> reps;
  for (std::size_t i = 0; i < N; ++i) {
    auto [it, inserted] = first_seen.emplace(unit[i], reps.size());
    if (inserted) reps.push_back(i);
    rep_of[i] = it->second;
  }
  const std::size_t U = reps.size();
  result.unique_points = U;

  WeightedGram G;
  G.n = U;
  G.g.assign(U * U, 0.0);
  G.w.assign(U, 0.0);
  for (std::size_t i = 0; i < N; ++i) G.w[rep_of[i]] += 1.0;
  for (std::size_t a = 0; a < U; ++a) {
    for (std::size_t b = a; b < U; ++b) {
      const auto& x = unit[reps[a]];
      const auto& y = unit[reps[b]];
      const std::size_t len = std::min(support[reps[a]], support[reps[b]]);
      double dot = 0.0;
      for (std::size_t t = 0; t < len; ++t) dot += x[t] * y[t];
      if (a == b) dot = 1.0;
      G.g[a * U + b] = G.g[b * U + a] = dot;
    }
  }

  std::vector<std::size_t> labels(U, 0);
  std::vector<double> sil(U, 1.0);
  std::size_t k_final = 1;
  if (U == 1) {
    result.chosen_k = 1;
    result.mean_silhouette = 1.0;
  } else {
    const std::size_t k_hi = std::min({U, N - 1, cfg.k_max});
    double best_score = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 2; k <= k_hi; ++k) {
      std::vector<std::size_t> order(U);
      std::iota(order.begin(), order.end(), 0);
      auto rng = make_rng(cfg.seed, {k});
      portable_shuffle(order, rng);
      const std::size_t runs = std::min(cfg.restarts, U);
      Partition best;
      for (std::size_t r = 0; r < runs; ++r) {
        Partition p = run_kmeans(G, k, order[r], cfg);
        if (p.inertia < best.inertia) best = std::move(p);
      }
      const auto s = silhouette_samples(G, best.assign, k);
      double mean = 0.0;
      for (std::size_t i = 0; i < U; ++i) mean += G.w[i] * s[i];
      mean /= static_cast<double>(N);
      result.scan.push_back({k, mean, best.inertia});
      if (mean > best_score) {
        best_score = mean;
        labels = best.assign;
        sil = s;
        k_final = k;
      }
    }
    if (result.scan.empty()) return result;
    result.chosen_k = k_final;
    result.mean_silhouette = best_score;
  }

  // Materialize clusters over the original records.
  for (std::size_t c = 0; c < k_final; ++c) {
    std::vector<std::size_t> pts;
    for (std::size_t i = 0; i < U; ++i) {
      if (labels[i] == c) pts.push_back(i);
    }
    double W = 0.0, sil_sum = 0.0, self = 0.0;
    for (auto i : pts) {
      W += G.w[i];
      sil_sum += G.w[i] * sil[i];
      for (auto j : pts) self += G.w[i] * G.w[j] * G(i, j);
    }
    if (W == 0.0) continue;
    std::vector<std::size_t> member_idx;
    for (std::size_t i = 0; i < N; ++i) {
      if (labels[rep_of[i]] == c) member_idx.push_back(i);
    }
    std::sort(member_idx.begin(), member_idx.end(),
              [&](std::size_t a, std::size_t b) { return vectors[a].record_id < vectors[b].record_id; });

    SimilarCluster cl;
    for (auto i : member_idx) cl.members.push_back(vectors[i].record_id);
    cl.silhouette = sil_sum / W;
    double pair_sum = 0.0;
    for (std::size_t a = 0; a < member_idx.size(); ++a) {
      for (std::size_t b = a + 1; b < member_idx.size(); ++b) {
        const double cs = G(rep_of[member_idx[a]], rep_of[member_idx[b]]);
        cl.pair_cosine.push_back(cs);
        pair_sum += cs;
      }
    }
    const std::size_t m = member_idx.size();
    cl.mean_intra_cosine = m >= 2 ? pair_sum / (static_cast<double>(m) * (m - 1) / 2.0) : 1.0;
    const double centroid_norm = std::sqrt(std::max(self, 0.0)) / W;
    double cc = 0.0;
    for (auto i : pts) {
      double dot = 0.0;
      for (auto j : pts) dot += G.w[j] * G(i, j);
      dot /= W;
      cc += G.w[i] * (centroid_norm > 0.0 ? dot / centroid_norm : 0.0);
    }
    cl.mean_centroid_cosine = cc / W;

    if (m < 2 || cl.silhouette < cfg.min_silhouette || cl.mean_intra_cosine < cfg.min_similarity) {
      ++result.discarded_clusters;
      continue;
    }
    result.clusters.push_back(std::move(cl));
  }
  std::sort(result.clusters.begin(), result.clusters.end(),
            [](const SimilarCluster& a, const SimilarCluster& b) { return a.members.front() < b.members.front(); });
  for (std::size_t i = 0; i < result.clusters.size(); ++i) {
    auto& cl = result.clusters[i];
    cl.cluster_id = i;
    if (cl.members.size() < 2 || cl.silhouette < cfg.min_silhouette ||
        cl.mean_intra_cosine < cfg.min_similarity) {
      throw std::logic_error("similar cluster violates its acceptance thresholds");
    }
  }
  return result;
}

std::vector<SimilarCluster> cluster_similar(const std::vector<fingerprint::PackageVector>& vectors,
                                            const ClusterConfig& config) {
  return cluster_similar_detailed(vectors, config).clusters;
}

std::vector<KGEdge> build_similar_edges(const std::vector<SimilarCluster>& clusters) {
  std::vector<KGEdge> edges;
  for (const auto& cl : clusters) {
    for (std::size_t i = 0; i < cl.members.size(); ++i) {
      for (std::size_t j = i + 1; j < cl.members.size(); ++j) {
        const double cs = cl.pair_cosine.empty() ? 1.0 : cl.cosine_between(i, j);
        edges.push_back(make_edge(cl.members[i], cl.members[j], SimilarEvidence{cl.cluster_id, cs}));
      }
    }
  }
  std::sort(edges.begin(), edges.end(),
            [](const KGEdge& x, const KGEdge& y) { return std::tie(x.u, x.v) < std::tie(y.u, y.v); });
  return edges;
}

}  // namespace osskg::edges
