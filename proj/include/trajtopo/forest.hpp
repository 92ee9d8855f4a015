#pragma once
// Random forest of CART trees with balanced class weights.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "trajtopo/types.hpp"

namespace trajtopo {

struct LabeledRow {
  std::string user_id;
  std::vector<double> values;  // aligned with LabeledDataset::feature_names
  bool improved = false;
  int first_post_year = 0;
};

struct LabeledDataset {
  std::vector<std::string> feature_names;
  std::vector<LabeledRow> rows;

  std::size_t count(bool improved) const;
  /// Same rows restricted to (and reordered as) `names`.
  LabeledDataset select(std::span<const std::string> names) const;
  LabeledDataset subset(std::span<const std::size_t> indices) const;
  std::vector<bool> labels() const;
};

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;  // go left when value <= threshold
  int left = -1;
  int right = -1;
  double weight_negative = 0.0;
  double weight_positive = 0.0;

  bool is_leaf() const { return feature < 0; }
};

struct DecisionTree {
  std::vector<TreeNode> nodes;  // root at 0
};

struct ForestConfig {
  std::size_t n_trees = 100;
  std::uint64_t seed = 0;
  /// Features tried per split; 0 means ceil(sqrt(p)).
  std::size_t max_features = 0;
  bool bootstrap = true;
  /// Per-sample weights n / (2 n_class).
  bool balanced = true;
  std::size_t jobs = 1;
};

struct ForestModel {
  std::vector<std::string> feature_names;
  std::vector<DecisionTree> trees;
  std::uint64_t seed = 0;
};

/// Trees are grown to purity. Each tree draws from its own generator seeded
/// by (seed, tree index), so results do not depend on `jobs`.
ForestModel train_forest(const LabeledDataset& train, const ForestConfig& config);

/// Mean over trees of the leaf's positive-class weight fraction.
double predict_proba(const ForestModel& model, const std::map<std::string, double>& row);

/// Probabilities for every row of `data`, matching columns by name.
std::vector<double> predict_proba(const ForestModel& model, const LabeledDataset& data);

/// Flat text serialization:
///   trajtopo-forest 1
///   features <name>...
///   seed <seed>
///   trees <count>
///   tree <node count>
///   <feature> <threshold> <left> <right> <w_neg> <w_pos>   (per node)
void write_forest(std::ostream& out, const ForestModel& model);
ForestModel read_forest(std::istream& in);

}  // namespace trajtopo
