#include "trajtopo/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <random>

#include "trajtopo/io.hpp"

namespace trajtopo {

std::vector<std::vector<std::size_t>> stratified_kfold(const std::vector<bool>& labels,
                                                       std::size_t k, std::uint64_t seed) {
  if (k < 2) throw Error("k-fold needs k >= 2");
  std::array<std::vector<std::size_t>, 2> by_class;
  for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i] ? 1 : 0].push_back(i);
  for (const auto& c : by_class)
    if (c.size() < k)
      throw Error("each class needs at least k=" + std::to_string(k) + " members for stratified folds");

  std::mt19937_64 rng(seed);
  std::vector<std::vector<std::size_t>> folds(k);
  std::size_t slot = 0;
  for (auto& members : by_class) {
    std::shuffle(members.begin(), members.end(), rng);
    for (std::size_t idx : members) {
      folds[slot].push_back(idx);
      slot = (slot + 1) % k;
    }
  }
  for (auto& f : folds) std::sort(f.begin(), f.end());
  return folds;
}

std::pair<LabeledDataset, LabeledDataset> temporal_split(const LabeledDataset& data, int cutoff_year) {
  LabeledDataset train, test;
  train.feature_names = test.feature_names = data.feature_names;
  for (const auto& r : data.rows) (r.first_post_year <= cutoff_year ? train : test).rows.push_back(r);
  if (train.rows.empty()) throw Error("temporal split: no rows at or before " + std::to_string(cutoff_year));
  if (test.rows.empty()) throw Error("temporal split: no rows after " + std::to_string(cutoff_year));
  return {std::move(train), std::move(test)};
}

double roc_auc(std::span<const double> scores, const std::vector<bool>& labels) {
  if (scores.size() != labels.size()) throw Error("auc: scores and labels differ in length");
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Mid-ranks (1-based) over tied blocks.
  std::vector<double> rank(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
    const double mid = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j + 1));
    for (std::size_t t = i; t <= j; ++t) rank[order[t]] = mid;
    i = j + 1;
  }
  double pos = 0.0, rank_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    if (labels[i]) pos += 1.0, rank_sum += rank[i];
  const double neg = static_cast<double>(n) - pos;
  if (pos == 0.0 || neg == 0.0) return 0.5;
  return (rank_sum - pos * (pos + 1.0) / 2.0) / (pos * neg);
}

Metrics score_predictions(std::span<const double> proba, const std::vector<bool>& labels) {
  if (proba.size() != labels.size()) throw Error("metrics: predictions and labels differ in length");
  if (proba.empty()) throw Error("metrics: empty test set");
  double tp = 0, fp = 0, fn = 0, correct = 0;
  for (std::size_t i = 0; i < proba.size(); ++i) {
    const bool predicted = proba[i] >= 0.5;
    if (predicted == labels[i]) correct += 1;
    if (predicted && labels[i]) tp += 1;
    if (predicted && !labels[i]) fp += 1;
    if (!predicted && labels[i]) fn += 1;
  }
  Metrics m;
  m.accuracy = correct / static_cast<double>(proba.size());
  m.precision = (tp + fp) > 0 ? tp / (tp + fp) : 0.0;
  m.f1 = (2 * tp + fp + fn) > 0 ? 2 * tp / (2 * tp + fp + fn) : 0.0;
  m.auc = roc_auc(proba, labels);
  return m;
}

Metrics evaluate(const ForestModel& model, const LabeledDataset& test) {
  const auto proba = predict_proba(model, test);
  return score_predictions(proba, test.labels());
}

namespace {

Summary summary_of(const std::vector<double>& xs) {
  Summary s;
  if (xs.empty()) return s;
  s.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  }
  return s;
}

}  // namespace

MetricsReport summarize(const std::string& method, const std::vector<Metrics>& per_fold) {
  auto field = [&](double Metrics::*member) {
    std::vector<double> xs;
    for (const auto& m : per_fold) xs.push_back(m.*member);
    return summary_of(xs);
  };
  MetricsReport r;
  r.method = method;
  r.accuracy = field(&Metrics::accuracy);
  r.f1 = field(&Metrics::f1);
  r.auc = field(&Metrics::auc);
  r.precision = field(&Metrics::precision);
  r.folds = per_fold.size();
  return r;
}

CrossValidation cross_validate(const LabeledDataset& data, std::size_t k, std::uint64_t seed,
                               std::span<const std::string> features, ForestConfig forest,
                               const std::string& method) {
  const LabeledDataset view = features.empty() ? data : data.select(features);
  CrossValidation cv;
  cv.folds = stratified_kfold(view.labels(), k, seed);
  for (std::size_t f = 0; f < k; ++f) {
    std::vector<std::size_t> train_idx;
    for (std::size_t g = 0; g < k; ++g)
      if (g != f) train_idx.insert(train_idx.end(), cv.folds[g].begin(), cv.folds[g].end());
    std::sort(train_idx.begin(), train_idx.end());
    forest.seed = seed + 1000003ULL * (f + 1);
    const ForestModel model = train_forest(view.subset(train_idx), forest);
    cv.per_fold.push_back(evaluate(model, view.subset(cv.folds[f])));
  }
  cv.report = summarize(method, cv.per_fold);
  return cv;
}

void write_metrics_table(std::ostream& out, const std::vector<MetricsReport>& reports) {
  out << "# f1 and precision use improved as the positive class; sd is the sample SD across folds\n";
  out << "method,folds,accuracy,accuracy_sd,f1,f1_sd,auc,auc_sd,precision,precision_sd\n";
  for (const auto& r : reports)
    out << r.method << ',' << r.folds << ',' << format_real(r.accuracy.mean) << ','
        << format_real(r.accuracy.sd) << ',' << format_real(r.f1.mean) << ',' << format_real(r.f1.sd)
        << ',' << format_real(r.auc.mean) << ',' << format_real(r.auc.sd) << ','
        << format_real(r.precision.mean) << ',' << format_real(r.precision.sd) << '\n';
}

void write_fold_assignments(std::ostream& out, const LabeledDataset& data,
                            const std::vector<std::vector<std::size_t>>& folds) {
  std::vector<std::size_t> fold_of(data.rows.size(), 0);
  for (std::size_t f = 0; f < folds.size(); ++f)
    for (std::size_t i : folds[f]) fold_of.at(i) = f;
  out << "user_id,fold\n";
  for (std::size_t i = 0; i < data.rows.size(); ++i) out << data.rows[i].user_id << ',' << fold_of[i] << '\n';
}

}  // namespace trajtopo
