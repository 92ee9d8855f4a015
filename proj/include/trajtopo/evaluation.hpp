#pragma once
// Cross-validation protocol, temporal holdout and classification metrics.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "trajtopo/forest.hpp"

namespace trajtopo {

/// Partitions indices into k folds; each class is shuffled and dealt
/// round-robin, so per-fold class counts differ from proportional by < 1.
std::vector<std::vector<std::size_t>> stratified_kfold(const std::vector<bool>& labels,
                                                       std::size_t k, std::uint64_t seed);

inline constexpr int kDefaultCutoffYear = 2019;

/// Train: first_post_year <= cutoff; test: the rest. Both must be non-empty.
std::pair<LabeledDataset, LabeledDataset> temporal_split(const LabeledDataset& data,
                                                         int cutoff_year = kDefaultCutoffYear);

/// Tie-adjusted Mann-Whitney estimate of P(score_pos > score_neg). 0.5 when
/// one class is absent.
double roc_auc(std::span<const double> scores, const std::vector<bool>& labels);

struct Metrics {
  double accuracy = 0.0;
  double precision = 0.0;  // positive class = improved; 0/0 -> 0
  double f1 = 0.0;
  double auc = 0.0;
};

/// Predicted class is improved when the probability is >= 0.5.
Metrics score_predictions(std::span<const double> proba, const std::vector<bool>& labels);

Metrics evaluate(const ForestModel& model, const LabeledDataset& test);

struct Summary {
  double mean = 0.0;
  double sd = 0.0;  // sample standard deviation (n - 1)
};

struct MetricsReport {
  std::string method;
  Summary accuracy, f1, auc, precision;
  std::size_t folds = 0;
};

MetricsReport summarize(const std::string& method, const std::vector<Metrics>& per_fold);

struct CrossValidation {
  MetricsReport report;
  std::vector<Metrics> per_fold;
  std::vector<std::vector<std::size_t>> folds;
};

/// k-fold stratified CV of a forest restricted to `features` (all when empty).
CrossValidation cross_validate(const LabeledDataset& data, std::size_t k, std::uint64_t seed,
                               std::span<const std::string> features, ForestConfig forest,
                               const std::string& method = "forest");

/// Table with columns mirroring the usual Accuracy / F1 / AUC / Precision
/// report, each as mean and SD.
void write_metrics_table(std::ostream& out, const std::vector<MetricsReport>& reports);

/// `user_id,fold` rows.
void write_fold_assignments(std::ostream& out, const LabeledDataset& data,
                            const std::vector<std::vector<std::size_t>>& folds);

}  // namespace trajtopo
