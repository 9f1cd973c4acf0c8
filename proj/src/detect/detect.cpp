#include "osskg/detect/detect.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "osskg/fingerprint/hashing.hpp"
#include "osskg/fingerprint/tokenize.hpp"
#include "osskg/util/error.hpp"
#include "osskg/util/random.hpp"

namespace osskg::detect {
namespace {

constexpr std::uint64_t kFeatureSeed = 0x646574656374ull;

class NearestNeighbor final : public Classifier {
 public:
  explicit NearestNeighbor(std::size_t k) : k_(k) {
    if (k == 0 || k % 2 == 0) throw Error(ErrorKind::bad_flag, "nearest-neighbour k must be odd");
  }
  std::string name() const override { return "knn"; }
  void fit(const std::vector<const std::vector<double>*>& x, const std::vector<int>& labels) override {
    x_ = x;
    y_ = labels;
  }
  int predict(const std::vector<double>& q) const override {
    std::vector<std::pair<double, std::size_t>> d;
    d.reserve(x_.size());
    for (std::size_t i = 0; i < x_.size(); ++i) {
      double s = 0.0;
      for (std::size_t t = 0; t < q.size(); ++t) {
        const double diff = q[t] - (*x_[i])[t];
        s += diff * diff;
      }
      d.emplace_back(s, i);
    }
    const std::size_t k = std::min(k_, d.size());
    std::partial_sort(d.begin(), d.begin() + static_cast<long>(k), d.end());
    std::size_t votes = 0;
    for (std::size_t i = 0; i < k; ++i) votes += static_cast<std::size_t>(y_[d[i].second]);
    return 2 * votes > k ? 1 : 0;
  }

 private:
  std::size_t k_;
  std::vector<const std::vector<double>*> x_;
  std::vector<int> y_;
};

class LinearLogistic final : public Classifier {
 public:
  LinearLogistic(double lr, double l2, double tol, std::size_t max_iter)
      : lr_(lr), l2_(l2), tol_(tol), max_iter_(max_iter) {}
  std::string name() const override { return "linear"; }
  void fit(const std::vector<const std::vector<double>*>& x, const std::vector<int>& labels) override {
    const std::size_t n = x.size();
    const std::size_t dim = n ? x.front()->size() : 0;
    w_.assign(dim, 0.0);
    b_ = 0.0;
    // Hashed text features are mostly zero; skipping them only drops exact
    // zero terms, so the sums match the dense loop bit for bit.
    std::vector<std::vector<std::pair<std::size_t, double>>> sparse(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t t = 0; t < dim; ++t) {
        if ((*x[i])[t] != 0.0) sparse[i].emplace_back(t, (*x[i])[t]);
      }
    }
    std::vector<double> grad(dim);
    for (std::size_t iter = 0; iter < max_iter_; ++iter) {
      std::fill(grad.begin(), grad.end(), 0.0);
      double grad_b = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        double z = b_;
        for (const auto& [t, v] : sparse[i]) z += w_[t] * v;
        const double err = sigmoid(z) - labels[i];
        for (const auto& [t, v] : sparse[i]) grad[t] += err * v;
        grad_b += err;
      }
      double norm = 0.0;
      for (std::size_t t = 0; t < dim; ++t) {
        grad[t] = grad[t] / static_cast<double>(n) + l2_ * w_[t];
        norm += grad[t] * grad[t];
      }
      grad_b /= static_cast<double>(n);
      norm += grad_b * grad_b;
      if (std::sqrt(norm) < tol_) break;
      for (std::size_t t = 0; t < dim; ++t) w_[t] -= lr_ * grad[t];
      b_ -= lr_ * grad_b;
    }
  }
  int predict(const std::vector<double>& x) const override { return score(x) > 0.0 ? 1 : 0; }

 private:
  static double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }
  double score(const std::vector<double>& x) const {
    double s = b_;
    for (std::size_t t = 0; t < w_.size(); ++t) s += w_[t] * x[t];
    return s;
  }
  double lr_, l2_, tol_;
  std::size_t max_iter_;
  std::vector<double> w_;
  double b_ = 0.0;
};

const FeatureVector& lookup(const std::map<std::string, FeatureVector>& features, const std::string& id) {
  auto it = features.find(id);
  if (it == features.end()) throw Error(ErrorKind::validation, "no features for '" + id + "'");
  return it->second;
}

}  // namespace

std::string_view to_string(Strategy s) noexcept { return s == Strategy::cluster_aware ? "cluster_aware" : "random"; }

FeatureVector extract_features(const corpus::CodeDocument* document, const corpus::PackageRecord& record,
                               Label label) {
  FeatureVector f;
  f.record_id = record.record_id;
  f.label = label;
  f.values.assign(kFeatureDim, 0.0);
  f.code_empty = !document || document->code_empty();
  std::size_t files = 0, tokens = 0;
  if (!f.code_empty) {
    const auto toks = fingerprint::tokenize(document->merged_text);
    for (const auto& t : toks) f.values[fingerprint::fnv1a64(t, kFeatureSeed) % kTextDim] += 1.0;
    double norm = 0.0;
    for (std::size_t i = 0; i < kTextDim; ++i) norm += f.values[i] * f.values[i];
    norm = std::sqrt(norm);
    if (norm > 0.0) {
      for (std::size_t i = 0; i < kTextDim; ++i) f.values[i] /= norm;
    }
    files = document->files.size();
    tokens = toks.size();
  }
  f.values[kTextDim + 0] = static_cast<double>(files);
  f.values[kTextDim + 1] = static_cast<double>(tokens);
  f.values[kTextDim + 2] = static_cast<double>(record.declared_deps.size());
  f.values[kTextDim + 3] = static_cast<double>(record.description.value_or("").size());
  return f;
}

void scale_metadata(std::vector<FeatureVector>& features) {
  for (std::size_t c = kTextDim; c < kFeatureDim; ++c) {
    double lo = INFINITY, hi = -INFINITY;
    for (const auto& f : features) {
      lo = std::min(lo, f.values[c]);
      hi = std::max(hi, f.values[c]);
    }
    for (auto& f : features) f.values[c] = hi > lo ? (f.values[c] - lo) / (hi - lo) : 0.0;
  }
}

std::vector<SplitPlan> make_splits(const std::vector<std::vector<std::string>>& clusters,
                                   const std::vector<std::string>& legitimate_ids, std::size_t n_clusters,
                                   std::size_t iterations, Strategy strategy, std::uint64_t seed) {
  if (n_clusters == 0 || n_clusters > clusters.size()) {
    throw Error(ErrorKind::insufficient_data, "n_clusters=" + std::to_string(n_clusters) + " but " +
                                                  std::to_string(clusters.size()) + " clusters are available");
  }
  for (const auto& c : clusters) {
    if (c.size() < 2) throw Error(ErrorKind::insufficient_data, "every cluster needs at least two members");
  }
  std::vector<std::vector<std::string>> sorted = clusters;
  for (auto& c : sorted) std::sort(c.begin(), c.end());
  std::vector<std::string> legit = legitimate_ids;
  std::sort(legit.begin(), legit.end());
  legit.erase(std::unique(legit.begin(), legit.end()), legit.end());

  std::vector<SplitPlan> plans;
  for (std::size_t it = 0; it < iterations; ++it) {
    SplitPlan plan;
    plan.iteration = it;
    plan.strategy = strategy;

    auto test_rng = make_rng(seed, {it, 1});
    std::vector<std::size_t> order(sorted.size());
    std::iota(order.begin(), order.end(), 0);
    const auto chosen = sample_without_replacement(order, n_clusters, test_rng);
    std::set<std::string> test;
    for (auto ci : chosen) {
      for (auto& id : sample_without_replacement(sorted[ci], 2, test_rng)) {
        test.insert(id);
        plan.test_malicious.push_back(std::move(id));
      }
    }
    if (legit.size() < plan.test_malicious.size()) {
      throw Error(ErrorKind::insufficient_data, "not enough legitimate packages for the test set");
    }
    plan.test_legitimate = sample_without_replacement(legit, plan.test_malicious.size(), test_rng);

    auto train_rng = make_rng(seed, {it, 2, static_cast<std::uint64_t>(strategy)});
    std::vector<std::string> aware;
    std::vector<std::string> pool;
    for (const auto& c : sorted) {
      std::vector<std::string> rest;
      for (const auto& id : c) {
        if (!test.contains(id)) rest.push_back(id);
      }
      pool.insert(pool.end(), rest.begin(), rest.end());
      if (strategy == Strategy::cluster_aware) {
        auto picked = sample_without_replacement(rest, std::min<std::size_t>(2, rest.size()), train_rng);
        aware.insert(aware.end(), picked.begin(), picked.end());
      }
    }
    if (strategy == Strategy::cluster_aware) {
      plan.train_malicious = std::move(aware);
    } else {
      // Same size as the cluster-aware training set would have.
      std::size_t count = 0;
      for (const auto& c : sorted) {
        const auto remaining = static_cast<std::size_t>(
            std::count_if(c.begin(), c.end(), [&](const std::string& id) { return !test.contains(id); }));
        count += std::min<std::size_t>(2, remaining);
      }
      std::sort(pool.begin(), pool.end());
      pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
      plan.train_malicious = sample_without_replacement(pool, std::min(count, pool.size()), train_rng);
    }

    std::set<std::string> used(plan.test_legitimate.begin(), plan.test_legitimate.end());
    std::vector<std::string> legit_left;
    for (const auto& id : legit) {
      if (!used.contains(id)) legit_left.push_back(id);
    }
    if (legit_left.size() < plan.train_malicious.size()) {
      throw Error(ErrorKind::insufficient_data, "not enough legitimate packages for the training set");
    }
    plan.train_legitimate = sample_without_replacement(legit_left, plan.train_malicious.size(), train_rng);
    plans.push_back(std::move(plan));
  }
  return plans;
}

std::unique_ptr<Classifier> make_nearest_neighbor(std::size_t k) { return std::make_unique<NearestNeighbor>(k); }

std::unique_ptr<Classifier> make_linear_logistic(double learning_rate, double l2, double tolerance,
                                                 std::size_t max_iterations) {
  return std::make_unique<LinearLogistic>(learning_rate, l2, tolerance, max_iterations);
}

std::unique_ptr<Classifier> make_classifier(const std::string& name) {
  if (name == "knn" || name == "nearest_neighbor") return make_nearest_neighbor();
  if (name == "linear" || name == "linear_logistic") return make_linear_logistic();
  throw Error(ErrorKind::bad_flag, "unknown model '" + name + "' (expected knn or linear)");
}

EvalResult train_eval(const std::vector<SplitPlan>& splits, const std::map<std::string, FeatureVector>& features,
                      const std::string& model) {
  EvalResult result;
  result.model = make_classifier(model)->name();
  if (!splits.empty()) result.strategy = splits.front().strategy;
  for (const auto& plan : splits) {
    std::vector<const std::vector<double>*> x;
    std::vector<int> y;
    for (const auto& id : plan.train_malicious) {
      x.push_back(&lookup(features, id).values);
      y.push_back(1);
    }
    for (const auto& id : plan.train_legitimate) {
      x.push_back(&lookup(features, id).values);
      y.push_back(0);
    }
    const auto positives = std::count(y.begin(), y.end(), 1);
    if (positives == 0 || positives == static_cast<long>(y.size())) {
      ++result.skipped;
      continue;
    }
    auto clf = make_classifier(model);
    clf->fit(x, y);
    std::size_t correct = 0, total = 0, tp = 0;
    for (const auto& id : plan.test_malicious) {
      const int p = clf->predict(lookup(features, id).values);
      correct += p == 1;
      tp += p == 1;
      ++total;
    }
    for (const auto& id : plan.test_legitimate) {
      correct += clf->predict(lookup(features, id).values) == 0;
      ++total;
    }
    IterationMetrics m;
    m.iteration = plan.iteration;
    m.accuracy = total ? static_cast<double>(correct) / static_cast<double>(total) : 0.0;
    m.recall = plan.test_malicious.empty()
                   ? 0.0
                   : static_cast<double>(tp) / static_cast<double>(plan.test_malicious.size());
    result.iterations.push_back(m);
  }
  for (const auto& m : result.iterations) {
    result.mean_accuracy += m.accuracy;
    result.mean_recall += m.recall;
  }
  if (!result.iterations.empty()) {
    result.mean_accuracy /= static_cast<double>(result.iterations.size());
    result.mean_recall /= static_cast<double>(result.iterations.size());
  }
  return result;
}

}  // namespace osskg::detect
