#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "osskg/corpus/record.hpp"
#include "osskg/corpus/source_tree.hpp"

namespace osskg::detect {

enum class Label { malicious, legitimate };

inline constexpr std::size_t kTextDim = 512;
inline constexpr std::size_t kMetaDim = 4;  // file count, token count, dep count, description length
inline constexpr std::size_t kFeatureDim = kTextDim + kMetaDim;

struct FeatureVector {
  std::string record_id;
  Label label = Label::malicious;
  std::vector<double> values;  // kFeatureDim
  bool code_empty = false;
  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

/// Hashed token frequencies (L2-normalized) followed by the raw metadata
/// values. A missing or empty document yields a zero text block and sets
/// code_empty. Call scale_metadata over the whole corpus afterwards.
FeatureVector extract_features(const corpus::CodeDocument* document, const corpus::PackageRecord& record,
                               Label label);

/// Min-max scales the metadata block of every vector to [0, 1]; constant
/// columns become 0.
void scale_metadata(std::vector<FeatureVector>& features);

enum class Strategy { cluster_aware, random };
std::string_view to_string(Strategy s) noexcept;

struct SplitPlan {
  std::size_t iteration = 0;
  Strategy strategy = Strategy::cluster_aware;
  std::vector<std::string> test_malicious;
  std::vector<std::string> test_legitimate;
  std::vector<std::string> train_malicious;
  std::vector<std::string> train_legitimate;
  friend bool operator==(const SplitPlan&, const SplitPlan&) = default;
};

/// Per iteration: n_clusters distinct clusters, two distinct members each,
/// form the malicious test set; the draw depends only on (seed, iteration)
/// so both strategies share it. cluster_aware training takes up to two
/// non-test members from every cluster; random training takes the same count
/// uniformly from all non-test clustered members. Each side gets as many
/// legitimate ids as malicious ones, disjoint from each other.
/// Throws Error(insufficient_data) when n_clusters exceeds the cluster count,
/// a cluster has fewer than two members, or legitimate ids run out.
std::vector<SplitPlan> make_splits(const std::vector<std::vector<std::string>>& clusters,
                                   const std::vector<std::string>& legitimate_ids, std::size_t n_clusters,
                                   std::size_t iterations, Strategy strategy, std::uint64_t seed);

class Classifier {
 public:
  virtual ~Classifier() = default;
  virtual std::string name() const = 0;
  /// labels: 1 = malicious.
  virtual void fit(const std::vector<const std::vector<double>*>& x, const std::vector<int>& labels) = 0;
  virtual int predict(const std::vector<double>& x) const = 0;
};

/// k-nearest neighbours under Euclidean distance; equal distances resolve to
/// the earlier training sample. k must be odd.
std::unique_ptr<Classifier> make_nearest_neighbor(std::size_t k = 5);

/// Logistic regression by full-batch gradient descent with a small L2
/// penalty; stops when the gradient norm drops below `tolerance`.
std::unique_ptr<Classifier> make_linear_logistic(double learning_rate = 0.5, double l2 = 1e-4,
                                                 double tolerance = 1e-6, std::size_t max_iterations = 5000);

/// "knn" or "linear"; Error(bad_flag) otherwise.
std::unique_ptr<Classifier> make_classifier(const std::string& name);

struct IterationMetrics {
  std::size_t iteration = 0;
  double accuracy = 0.0;
  double recall = 0.0;
};

struct EvalResult {
  Strategy strategy = Strategy::cluster_aware;
  std::string model;
  std::vector<IterationMetrics> iterations;
  std::size_t skipped = 0;  // single-class training sets
  double mean_accuracy = 0.0;
  double mean_recall = 0.0;
};

/// Trains a fresh classifier per split. Throws Error(validation) for ids
/// without features.
EvalResult train_eval(const std::vector<SplitPlan>& splits, const std::map<std::string, FeatureVector>& features,
                      const std::string& model);

}  // namespace osskg::detect
