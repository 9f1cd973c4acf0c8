#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "common/synth.hpp"
#include "osskg/detect/detect.hpp"
#include "osskg/util/error.hpp"

using namespace osskg;
using namespace osskg::detect;

namespace {

std::vector<std::vector<std::string>> clusters(std::size_t n, std::size_t size) {
  std::vector<std::vector<std::string>> out(n);
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t m = 0; m < size; ++m) out[c].push_back("c" + std::to_string(c) + "m" + std::to_string(m));
  }
  return out;
}

std::vector<std::string> legit(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back("l" + std::to_string(i));
  return out;
}

std::set<std::string> as_set(const std::vector<std::string>& v) { return {v.begin(), v.end()}; }

}  // namespace

TEST(Features, LayoutAndCodeEmpty) {
  auto r = synth::record("a", "x", "1", "s", true);
  r.declared_deps = {{"d1", ""}, {"d2", ""}};
  r.description = "four";
  const auto doc = synth::js_document("a", "const a = 1;\nconst b = 2;\n");
  const auto f = extract_features(&doc, r, Label::malicious);
  ASSERT_EQ(f.values.size(), kFeatureDim);
  double sq = 0;
  for (std::size_t i = 0; i < kTextDim; ++i) sq += f.values[i] * f.values[i];
  EXPECT_NEAR(sq, 1.0, 1e-12);
  EXPECT_EQ(f.values[kTextDim + 0], 1.0);  // files
  EXPECT_EQ(f.values[kTextDim + 1], 10.0);  // tokens
  EXPECT_EQ(f.values[kTextDim + 2], 2.0);  // deps
  EXPECT_EQ(f.values[kTextDim + 3], 4.0);  // description length
  const auto empty = extract_features(nullptr, r, Label::legitimate);
  EXPECT_TRUE(empty.code_empty);
  for (std::size_t i = 0; i < kTextDim; ++i) EXPECT_EQ(empty.values[i], 0.0);
}

TEST(Features, MetadataScaling) {
  std::vector<FeatureVector> fs(3);
  for (std::size_t i = 0; i < 3; ++i) {
    fs[i].values.assign(kFeatureDim, 0.0);
    fs[i].values[kTextDim] = static_cast<double>(i * 5);
    fs[i].values[kTextDim + 1] = 7.0;
  }
  scale_metadata(fs);
  EXPECT_EQ(fs[0].values[kTextDim], 0.0);
  EXPECT_EQ(fs[1].values[kTextDim], 0.5);
  EXPECT_EQ(fs[2].values[kTextDim], 1.0);
  EXPECT_EQ(fs[1].values[kTextDim + 1], 0.0);
}

TEST(Splits, Properties) {
  const auto cs = clusters(10, 5);
  const auto ls = legit(100);
  const auto aware = make_splits(cs, ls, 3, 20, Strategy::cluster_aware, 42);
  const auto rnd = make_splits(cs, ls, 3, 20, Strategy::random, 42);
  ASSERT_EQ(aware.size(), 20u);
  for (std::size_t it = 0; it < aware.size(); ++it) {
    const auto& a = aware[it];
    const auto& r = rnd[it];
    EXPECT_EQ(a.test_malicious, r.test_malicious);
    EXPECT_EQ(a.test_malicious.size(), 6u);
    EXPECT_EQ(a.test_legitimate.size(), 6u);
    EXPECT_EQ(a.train_malicious.size(), r.train_malicious.size());
    EXPECT_EQ(a.train_legitimate.size(), a.train_malicious.size());
    for (const auto* plan : {&a, &r}) {
      const auto test = as_set(plan->test_malicious);
      for (const auto& id : plan->train_malicious) EXPECT_FALSE(test.contains(id));
      const auto test_l = as_set(plan->test_legitimate);
      for (const auto& id : plan->train_legitimate) EXPECT_FALSE(test_l.contains(id));
      EXPECT_EQ(as_set(plan->train_malicious).size(), plan->train_malicious.size());
    }
    // Two per test cluster, and cluster_aware trains on every cluster.
    std::map<std::string, int> per_cluster;
    for (const auto& id : a.test_malicious) ++per_cluster[id.substr(0, id.find('m'))];
    for (const auto& [_, n] : per_cluster) EXPECT_EQ(n, 2);
    std::set<std::string> trained;
    for (const auto& id : a.train_malicious) trained.insert(id.substr(0, id.find('m')));
    EXPECT_EQ(trained.size(), 10u);
  }
  EXPECT_EQ(aware, make_splits(cs, ls, 3, 20, Strategy::cluster_aware, 42));
  EXPECT_NE(aware, make_splits(cs, ls, 3, 20, Strategy::cluster_aware, 43));
}

TEST(Splits, InsufficientData) {
  for (auto fn : std::vector<std::function<void()>>{
           [] { make_splits(clusters(2, 5), legit(100), 3, 1, Strategy::random, 1); },
           [] { make_splits({{"a"}, {"b", "c"}}, legit(100), 1, 1, Strategy::random, 1); },
           [] { make_splits(clusters(4, 5), legit(3), 2, 1, Strategy::random, 1); }}) {
    try {
      fn();
      ADD_FAILURE();
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::insufficient_data);
    }
  }
}

TEST(Classifiers, NearestNeighborTiesGoToEarlierSample) {
  auto knn = make_nearest_neighbor(1);
  std::vector<double> a{0, 1}, b{0, -1};
  knn->fit({&a, &b}, {1, 0});
  EXPECT_EQ(knn->predict({0, 0}), 1);
  knn->fit({&b, &a}, {0, 1});
  EXPECT_EQ(knn->predict({0, 0}), 0);
}

TEST(Classifiers, LinearSeparatesSeparableData) {
  auto lr = make_linear_logistic();
  std::vector<std::vector<double>> xs;
  std::vector<int> ys;
  for (int i = 0; i < 20; ++i) {
    xs.push_back({1.0 + 0.01 * i, 0.1});
    ys.push_back(1);
    xs.push_back({-1.0 - 0.01 * i, 0.1});
    ys.push_back(0);
  }
  std::vector<const std::vector<double>*> ptrs;
  for (const auto& x : xs) ptrs.push_back(&x);
  lr->fit(ptrs, ys);
  EXPECT_EQ(lr->predict({0.8, 0.1}), 1);
  EXPECT_EQ(lr->predict({-0.8, 0.1}), 0);
  EXPECT_EQ(make_classifier("knn")->name(), "knn");
  EXPECT_THROW(make_classifier("svm"), Error);
}

TEST(TrainEval, MetricsAndMissingFeatures) {
  std::map<std::string, FeatureVector> fv;
  auto put = [&](const std::string& id, Label l, double x) {
    FeatureVector f;
    f.record_id = id;
    f.label = l;
    f.values = {x, 0.0};
    fv[id] = f;
  };
  SplitPlan p;
  p.test_malicious = {"m1"};
  p.test_legitimate = {"l1"};
  p.train_malicious = {"m2", "m3"};
  p.train_legitimate = {"l2", "l3"};
  put("m1", Label::malicious, 1.0);
  put("m2", Label::malicious, 1.1);
  put("m3", Label::malicious, 0.9);
  put("l1", Label::legitimate, -1.0);
  put("l2", Label::legitimate, -1.1);
  put("l3", Label::legitimate, -0.9);
  const auto r = train_eval({p}, fv, "linear");
  ASSERT_EQ(r.iterations.size(), 1u);
  EXPECT_DOUBLE_EQ(r.mean_accuracy, 1.0);
  EXPECT_DOUBLE_EQ(r.mean_recall, 1.0);

  SplitPlan single = p;
  single.train_legitimate.clear();
  EXPECT_EQ(train_eval({single}, fv, "knn").skipped, 1u);
  SplitPlan unknown = p;
  unknown.test_malicious = {"ghost"};
  EXPECT_THROW(train_eval({unknown}, fv, "knn"), Error);
}
