#include <gtest/gtest.h>

#include <random>
#include <set>
#include <sstream>

#include "trajtopo/evaluation.hpp"

using namespace trajtopo;

namespace {

std::vector<bool> labels_of(std::size_t pos, std::size_t neg) {
  std::vector<bool> out;
  for (std::size_t i = 0; i < pos + neg; ++i) out.push_back(i < pos);
  // Interleave so class membership does not line up with index order.
  std::mt19937_64 rng(pos * 31 + neg);
  std::shuffle(out.begin(), out.end(), rng);
  return out;
}

double pairwise_auc(const std::vector<double>& s, const std::vector<bool>& y) {
  double good = 0, pairs = 0;
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = 0; j < s.size(); ++j)
      if (y[i] && !y[j]) {
        pairs += 1;
        good += s[i] > s[j] ? 1.0 : (s[i] == s[j] ? 0.5 : 0.0);
      }
  return good / pairs;
}

}  // namespace

TEST(StratifiedKFold, EvenSplit) {
  const auto y = labels_of(10, 10);
  const auto folds = stratified_kfold(y, 5, 1);
  ASSERT_EQ(folds.size(), 5u);
  for (const auto& f : folds) {
    std::size_t pos = 0;
    for (auto i : f) pos += y[i];
    EXPECT_EQ(pos, 2u);
    EXPECT_EQ(f.size() - pos, 2u);
  }
}

TEST(StratifiedKFold, RemainderSpread) {
  const auto y = labels_of(7, 13);
  for (const auto& f : stratified_kfold(y, 5, 3)) {
    std::size_t pos = 0;
    for (auto i : f) pos += y[i];
    EXPECT_TRUE(pos == 1 || pos == 2);
  }
}

TEST(StratifiedKFold, PartitionsAndStaysProportional) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t k = 2 + rng() % 8;
    const std::size_t pos = k + rng() % 40, neg = k + rng() % 40;
    const auto y = labels_of(pos, neg);
    const auto folds = stratified_kfold(y, k, trial);
    std::set<std::size_t> seen;
    for (const auto& f : folds) {
      std::size_t p = 0;
      for (auto i : f) {
        EXPECT_TRUE(seen.insert(i).second);
        p += y[i];
      }
      EXPECT_LE(std::abs(static_cast<double>(p) - static_cast<double>(pos) / k), 1.0);
      EXPECT_LE(std::abs(static_cast<double>(f.size() - p) - static_cast<double>(neg) / k), 1.0);
      EXPECT_LE(std::abs(static_cast<double>(f.size()) - static_cast<double>(pos + neg) / k), 1.0);
    }
    EXPECT_EQ(seen.size(), y.size());
  }
}

TEST(StratifiedKFold, DeterministicAndValidated) {
  const auto y = labels_of(12, 9);
  EXPECT_EQ(stratified_kfold(y, 3, 8), stratified_kfold(y, 3, 8));
  EXPECT_NE(stratified_kfold(y, 3, 8), stratified_kfold(y, 3, 9));
  EXPECT_THROW(stratified_kfold(labels_of(4, 10), 5, 1), Error);
  EXPECT_THROW(stratified_kfold(y, 1, 1), Error);
}

TEST(TemporalSplit, Examples) {
  LabeledDataset d;
  d.feature_names = {"x"};
  for (int year : {2018, 2019, 2020, 2020}) d.rows.push_back({"u" + std::to_string(d.rows.size()), {0.0}, false, year});
  const auto [train, test] = temporal_split(d, 2019);
  EXPECT_EQ(train.rows.size(), 2u);
  ASSERT_EQ(test.rows.size(), 2u);
  for (const auto& r : test.rows) EXPECT_EQ(r.first_post_year, 2020);

  LabeledDataset old = d;
  for (auto& r : old.rows) r.first_post_year = 2018;
  EXPECT_THROW(temporal_split(old, 2019), Error);
  EXPECT_THROW(temporal_split(d, 2017), Error);
}

TEST(RocAuc, Examples) {
  const std::vector<bool> y{true, true, false, false};
  EXPECT_EQ(roc_auc(std::vector<double>{0.9, 0.8, 0.3, 0.1}, y), 1.0);
  EXPECT_EQ(roc_auc(std::vector<double>{0.9, 0.3, 0.8, 0.1}, y), 0.75);
  EXPECT_EQ(roc_auc(std::vector<double>{0.5, 0.5, 0.5, 0.5}, y), 0.5);
  EXPECT_EQ(roc_auc(std::vector<double>{0.1, 0.2}, {true, true}), 0.5);
}

TEST(RocAuc, MatchesPairwiseCount) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 4 + rng() % 40;
    std::vector<double> s;
    std::vector<bool> y;
    for (std::size_t i = 0; i < n; ++i) {
      s.push_back(static_cast<double>(rng() % 7) / 7.0);  // coarse scores force ties
      y.push_back(i < 2 ? i == 0 : rng() % 2 == 0);
    }
    EXPECT_NEAR(roc_auc(s, y), pairwise_auc(s, y), 1e-12);
  }
}

TEST(ScorePredictions, PerfectAndEmptyPositiveConvention) {
  const std::vector<bool> y{true, false, true, false};
  const auto m = score_predictions(std::vector<double>{0.9, 0.1, 0.7, 0.2}, y);
  EXPECT_EQ(m.accuracy, 1.0);
  EXPECT_EQ(m.precision, 1.0);
  EXPECT_EQ(m.f1, 1.0);
  EXPECT_EQ(m.auc, 1.0);

  const auto none = score_predictions(std::vector<double>{0.1, 0.1, 0.2, 0.3}, y);
  EXPECT_EQ(none.precision, 0.0);
  EXPECT_EQ(none.f1, 0.0);
  EXPECT_EQ(none.accuracy, 0.5);

  // 0.5 is predicted improved.
  const auto half = score_predictions(std::vector<double>{0.5, 0.49, 0.5, 0.5}, y);
  EXPECT_EQ(half.accuracy, 0.75);
  EXPECT_NEAR(half.precision, 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(half.f1, 0.8, 1e-15);
}

TEST(Summarize, SampleStandardDeviation) {
  std::vector<Metrics> folds{{0.5, 0.5, 0.5, 0.5}, {1.0, 1.0, 1.0, 1.0}, {0.75, 0.25, 0.0, 1.0}};
  const auto r = summarize("m", folds);
  EXPECT_EQ(r.folds, 3u);
  EXPECT_DOUBLE_EQ(r.accuracy.mean, 0.75);
  EXPECT_DOUBLE_EQ(r.accuracy.sd, 0.25);
  EXPECT_DOUBLE_EQ(r.auc.mean, 2.5 / 3.0);
  EXPECT_EQ(summarize("one", {folds[0]}).accuracy.sd, 0.0);
}

TEST(CrossValidate, BitReproducibleAndWellFormed) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  LabeledDataset d;
  d.feature_names = {"a", "b"};
  for (int i = 0; i < 60; ++i) {
    const bool pos = i % 3 == 0;
    d.rows.push_back({"u" + std::to_string(i), {g(rng) + (pos ? 2.0 : 0.0), g(rng)}, pos, 2019});
  }
  ForestConfig cfg;
  cfg.n_trees = 20;
  const std::vector<std::string> features{"a", "b"};
  const auto x = cross_validate(d, 5, 42, features, cfg, "topo");
  const auto y = cross_validate(d, 5, 42, features, cfg, "topo");
  std::stringstream sx, sy;
  write_metrics_table(sx, {x.report});
  write_metrics_table(sy, {y.report});
  EXPECT_EQ(sx.str(), sy.str());
  EXPECT_EQ(x.folds, y.folds);
  EXPECT_NE(sx.str().find("method,folds,accuracy,accuracy_sd,f1,f1_sd,auc,auc_sd,precision,precision_sd\n"),
            std::string::npos);
  for (const auto& m : x.per_fold)
    for (double v : {m.accuracy, m.precision, m.f1, m.auc}) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
  EXPECT_GT(x.report.accuracy.mean, 0.7);  // Bayes rate is Phi(1) = 0.84

  std::stringstream folds;
  write_fold_assignments(folds, d, x.folds);
  std::string header;
  std::getline(folds, header);
  EXPECT_EQ(header, "user_id,fold");
  std::size_t rows = 0;
  for (std::string line; std::getline(folds, line);) ++rows;
  EXPECT_EQ(rows, d.rows.size());
}
