#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "osskg/edges/edge.hpp"
#include "osskg/fingerprint/embedding.hpp"

namespace osskg::edges {

struct ClusterConfig {
  double min_similarity = 0.7;  // mean pairwise cosine a cluster must reach
  double min_silhouette = 0.3;
  std::size_t k_max = 64;
  std::size_t restarts = 50;
  std::size_t max_iterations = 300;
  double tolerance = 1e-6;  // max centroid movement at convergence
  std::uint64_t seed = 42;
};

struct SimilarCluster {
  std::size_t cluster_id = 0;
  std::vector<std::string> members;  // sorted record ids, size >= 2
  double mean_intra_cosine = 0.0;    // mean over member pairs
  double mean_centroid_cosine = 0.0; // mean member-to-centroid cosine
  double silhouette = 0.0;           // mean silhouette of the members
  /// Cosine of every member pair (i < j) in row-major upper-triangular order.
  std::vector<double> pair_cosine;

  double cosine_between(std::size_t i, std::size_t j) const;
};

struct KScore {
  std::size_t k = 0;
  double mean_silhouette = 0.0;
  double inertia = 0.0;
};

struct ClusteringResult {
  std::vector<SimilarCluster> clusters;  // surviving clusters only
  std::size_t chosen_k = 0;              // 0 when no scan was possible
  double mean_silhouette = 0.0;
  std::size_t unique_points = 0;
  std::size_t discarded_clusters = 0;
  std::vector<KScore> scan;
};

/// K-means over unit-normalized package vectors (squared-Euclidean objective,
/// i.e. cosine geometry). Byte-identical vectors are merged into weighted
/// points first. K is scanned over [2, min(U, N-1, k_max)] (U = distinct
/// vectors) and the K with the highest mean cosine silhouette wins; ties go to
/// the smaller K. Each K keeps the lowest-inertia run among up to `restarts`
/// farthest-first initializations with distinct, seeded first centers.
/// Clusters smaller than 2, below min_silhouette, or below min_similarity are
/// dropped. When every vector is identical (U = 1, N >= 2) the single group
/// is returned with silhouette 1. Fewer than 2 vectors give an empty result.
/// Throws std::invalid_argument on mismatched dimensions.
ClusteringResult cluster_similar_detailed(const std::vector<fingerprint::PackageVector>& vectors,
                                          const ClusterConfig& config = {});

std::vector<SimilarCluster> cluster_similar(const std::vector<fingerprint::PackageVector>& vectors,
                                            const ClusterConfig& config = {});

/// One undirected similar edge per member pair, carrying cluster id and cosine.
std::vector<KGEdge> build_similar_edges(const std::vector<SimilarCluster>& clusters);

}  // namespace osskg::edges
