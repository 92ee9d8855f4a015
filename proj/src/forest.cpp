#include "trajtopo/forest.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <thread>

#include "trajtopo/io.hpp"

namespace trajtopo {

std::size_t LabeledDataset::count(bool improved) const {
  return static_cast<std::size_t>(std::count_if(
      rows.begin(), rows.end(), [&](const LabeledRow& r) { return r.improved == improved; }));
}

LabeledDataset LabeledDataset::select(std::span<const std::string> names) const {
  std::vector<std::size_t> cols;
  for (const auto& name : names) {
    auto it = std::find(feature_names.begin(), feature_names.end(), name);
    if (it == feature_names.end()) throw Error("dataset has no feature '" + name + "'");
    cols.push_back(static_cast<std::size_t>(it - feature_names.begin()));
  }
  LabeledDataset out;
  out.feature_names.assign(names.begin(), names.end());
  for (const auto& r : rows) {
    LabeledRow nr = r;
    nr.values.clear();
    for (std::size_t c : cols) nr.values.push_back(r.values[c]);
    out.rows.push_back(std::move(nr));
  }
  return out;
}

LabeledDataset LabeledDataset::subset(std::span<const std::size_t> indices) const {
  LabeledDataset out;
  out.feature_names = feature_names;
  for (std::size_t i : indices) out.rows.push_back(rows.at(i));
  return out;
}

std::vector<bool> LabeledDataset::labels() const {
  std::vector<bool> out;
  for (const auto& r : rows) out.push_back(r.improved);
  return out;
}

namespace {

struct Sample {
  std::size_t row;
  double weight;
};

class TreeBuilder {
 public:
  TreeBuilder(const LabeledDataset& data, std::size_t max_features, std::mt19937_64& rng)
      : data_(data), max_features_(max_features), rng_(rng) {}

  DecisionTree build(std::vector<Sample> samples) {
    DecisionTree tree;
    tree.nodes.emplace_back();
    struct Task {
      int node;
      std::vector<Sample> samples;
    };
    std::vector<Task> stack;
    stack.push_back({0, std::move(samples)});
    while (!stack.empty()) {
      Task task = std::move(stack.back());
      stack.pop_back();
      TreeNode node;
      for (const auto& s : task.samples)
        (data_.rows[s.row].improved ? node.weight_positive : node.weight_negative) += s.weight;

      Split split;
      if (node.weight_positive > 0.0 && node.weight_negative > 0.0) split = best_split(task.samples);
      if (split.feature >= 0) {
        std::vector<Sample> left, right;
        for (const auto& s : task.samples)
          (data_.rows[s.row].values[static_cast<std::size_t>(split.feature)] <= split.threshold
               ? left
               : right)
              .push_back(s);
        node.feature = split.feature;
        node.threshold = split.threshold;
        node.left = static_cast<int>(tree.nodes.size());
        node.right = node.left + 1;
        tree.nodes.emplace_back();
        tree.nodes.emplace_back();
        stack.push_back({node.right, std::move(right)});
        stack.push_back({node.left, std::move(left)});
      }
      tree.nodes[static_cast<std::size_t>(task.node)] = node;
    }
    return tree;
  }

 private:
  struct Split {
    int feature = -1;
    double threshold = 0.0;
    double impurity = INFINITY;
  };

  static double gini(double neg, double pos) {
    const double total = neg + pos;
    if (total <= 0.0) return 0.0;
    const double pn = neg / total, pp = pos / total;
    return 1.0 - pn * pn - pp * pp;
  }

  // Considers features in a random order until `max_features` non-constant
  // ones have been scored; thresholds are observed values (left: <=).
  Split best_split(std::vector<Sample>& samples) {
    const std::size_t p = data_.feature_names.size();
    std::vector<std::size_t> order(p);
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t i = p; i > 1; --i) {
      std::uniform_int_distribution<std::size_t> pick(0, i - 1);
      std::swap(order[i - 1], order[pick(rng_)]);
    }

    Split best;
    std::size_t scored = 0;
    double total_neg = 0.0, total_pos = 0.0;
    for (const auto& s : samples)
      (data_.rows[s.row].improved ? total_pos : total_neg) += s.weight;

    for (std::size_t f : order) {
      if (scored >= max_features_) break;
      auto value = [&](const Sample& s) { return data_.rows[s.row].values[f]; };
      std::sort(samples.begin(), samples.end(), [&](const Sample& a, const Sample& b) {
        return value(a) < value(b) || (value(a) == value(b) && a.row < b.row);
      });
      if (value(samples.front()) == value(samples.back())) continue;
      ++scored;

      double left_neg = 0.0, left_pos = 0.0;
      for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
        (data_.rows[samples[i].row].improved ? left_pos : left_neg) += samples[i].weight;
        const double v = value(samples[i]);
        if (v == value(samples[i + 1])) continue;
        const double right_neg = total_neg - left_neg, right_pos = total_pos - left_pos;
        const double impurity = (left_neg + left_pos) * gini(left_neg, left_pos) +
                                (right_neg + right_pos) * gini(right_neg, right_pos);
        if (impurity < best.impurity) best = {static_cast<int>(f), v, impurity};
      }
    }
    return best;
  }

  const LabeledDataset& data_;
  std::size_t max_features_;
  std::mt19937_64& rng_;
};

DecisionTree train_tree(const LabeledDataset& data, const ForestConfig& config,
                        std::size_t tree_index, const std::array<double, 2>& class_weight,
                        std::size_t max_features) {
  std::seed_seq seq{static_cast<std::uint32_t>(config.seed & 0xffffffffu),
                    static_cast<std::uint32_t>(config.seed >> 32),
                    static_cast<std::uint32_t>(tree_index)};
  std::mt19937_64 rng(seq);

  const std::size_t n = data.rows.size();
  std::vector<std::size_t> multiplicity(n, 1);
  if (config.bootstrap) {
    std::fill(multiplicity.begin(), multiplicity.end(), 0);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    for (std::size_t i = 0; i < n; ++i) ++multiplicity[pick(rng)];
  }
  std::vector<Sample> samples;
  for (std::size_t i = 0; i < n; ++i)
    if (multiplicity[i] > 0)
      samples.push_back({i, static_cast<double>(multiplicity[i]) *
                                class_weight[data.rows[i].improved ? 1 : 0]});
  return TreeBuilder(data, max_features, rng).build(std::move(samples));
}

double leaf_fraction(const DecisionTree& tree, std::span<const double> values) {
  const TreeNode* node = &tree.nodes.at(0);
  while (!node->is_leaf()) {
    const double v = values[static_cast<std::size_t>(node->feature)];
    node = &tree.nodes[static_cast<std::size_t>(v <= node->threshold ? node->left : node->right)];
  }
  const double total = node->weight_negative + node->weight_positive;
  return total > 0.0 ? node->weight_positive / total : 0.0;
}

double forest_proba(const ForestModel& model, std::span<const double> values) {
  if (model.trees.empty()) throw Error("forest has no trees");
  double sum = 0.0;
  for (const auto& t : model.trees) sum += leaf_fraction(t, values);
  return sum / static_cast<double>(model.trees.size());
}

}  // namespace

ForestModel train_forest(const LabeledDataset& train, const ForestConfig& config) {
  const std::size_t pos = train.count(true), neg = train.count(false);
  if (pos < 2 || neg < 2) throw Error("training needs at least 2 rows of each class");
  if (config.n_trees == 0) throw Error("forest needs at least one tree");
  const std::size_t p = train.feature_names.size();
  if (p == 0) throw Error("training needs at least one feature");
  for (const auto& r : train.rows) {
    if (r.values.size() != p) throw Error("row '" + r.user_id + "' has the wrong number of values");
    for (double v : r.values)
      if (!std::isfinite(v)) throw Error("row '" + r.user_id + "' has a non-finite feature");
  }

  const double n = static_cast<double>(train.rows.size());
  const std::array<double, 2> class_weight =
      config.balanced ? std::array<double, 2>{n / (2.0 * static_cast<double>(neg)),
                                              n / (2.0 * static_cast<double>(pos))}
                      : std::array<double, 2>{1.0, 1.0};
  const std::size_t max_features =
      config.max_features > 0
          ? std::min(config.max_features, p)
          : static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(p))));

  ForestModel model;
  model.feature_names = train.feature_names;
  model.seed = config.seed;
  model.trees.resize(config.n_trees);

  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(config.n_trees);
  auto worker = [&] {
    for (std::size_t t = next++; t < config.n_trees; t = next++) {
      try {
        model.trees[t] = train_tree(train, config, t, class_weight, max_features);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    }
  };
  const std::size_t jobs = std::clamp<std::size_t>(config.jobs, 1, config.n_trees);
  std::vector<std::thread> pool;
  for (std::size_t j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return model;
}

double predict_proba(const ForestModel& model, const std::map<std::string, double>& row) {
  std::vector<double> values;
  for (const auto& name : model.feature_names) {
    auto it = row.find(name);
    if (it == row.end()) throw Error("row is missing feature '" + name + "'");
    values.push_back(it->second);
  }
  return forest_proba(model, values);
}

std::vector<double> predict_proba(const ForestModel& model, const LabeledDataset& data) {
  const LabeledDataset aligned = data.select(model.feature_names);
  std::vector<double> out;
  out.reserve(aligned.rows.size());
  for (const auto& r : aligned.rows) out.push_back(forest_proba(model, r.values));
  return out;
}

void write_forest(std::ostream& out, const ForestModel& model) {
  out << "trajtopo-forest 1\n";
  out << "# criterion=gini max_depth=none min_samples_leaf=1 class_weight=balanced\n";
  out << "features";
  for (const auto& f : model.feature_names) out << ' ' << f;
  out << "\nseed " << model.seed << "\ntrees " << model.trees.size() << '\n';
  for (const auto& t : model.trees) {
    out << "tree " << t.nodes.size() << '\n';
    for (const auto& nd : t.nodes)
      out << nd.feature << ' ' << format_real(nd.threshold) << ' ' << nd.left << ' ' << nd.right
          << ' ' << format_real(nd.weight_negative) << ' ' << format_real(nd.weight_positive) << '\n';
  }
}

ForestModel read_forest(std::istream& in) {
  ForestModel model;
  std::string line;
  auto next_tokens = [&]() -> std::vector<std::string> {
    while (std::getline(in, line)) {
      auto tok = split_ws(line);
      if (!tok.empty() && tok[0][0] != '#') return tok;
    }
    return {};
  };
  auto tok = next_tokens();
  if (tok.size() != 2 || tok[0] != "trajtopo-forest") throw Error("not a forest model file");
  tok = next_tokens();
  if (tok.empty() || tok[0] != "features") throw Error("forest file: missing features line");
  model.feature_names.assign(tok.begin() + 1, tok.end());
  tok = next_tokens();
  if (tok.size() != 2 || tok[0] != "seed") throw Error("forest file: missing seed line");
  model.seed = std::stoull(tok[1]);
  tok = next_tokens();
  if (tok.size() != 2 || tok[0] != "trees") throw Error("forest file: missing trees line");
  const std::size_t n_trees = std::stoul(tok[1]);
  const int p = static_cast<int>(model.feature_names.size());
  for (std::size_t t = 0; t < n_trees; ++t) {
    tok = next_tokens();
    if (tok.size() != 2 || tok[0] != "tree") throw Error("forest file: missing tree header");
    DecisionTree tree;
    const std::size_t n_nodes = std::stoul(tok[1]);
    const int node_count = static_cast<int>(n_nodes);
    for (std::size_t k = 0; k < n_nodes; ++k) {
      tok = next_tokens();
      if (tok.size() != 6) throw Error("forest file: bad node row");
      TreeNode nd;
      nd.feature = std::stoi(tok[0]);
      nd.threshold = parse_real(tok[1]);
      nd.left = std::stoi(tok[2]);
      nd.right = std::stoi(tok[3]);
      nd.weight_negative = parse_real(tok[4]);
      nd.weight_positive = parse_real(tok[5]);
      if (!nd.is_leaf() && (nd.feature >= p || !std::isfinite(nd.threshold) || nd.left <= 0 ||
                            nd.right <= 0 || nd.left >= node_count || nd.right >= node_count))
        throw Error("forest file: invalid split node");
      if (nd.weight_negative < 0.0 || nd.weight_positive < 0.0)
        throw Error("forest file: negative leaf weight");
      tree.nodes.push_back(nd);
    }
    if (tree.nodes.empty()) throw Error("forest file: empty tree");
    model.trees.push_back(std::move(tree));
  }
  if (model.trees.empty()) throw Error("forest file has no trees");
  return model;
}

}  // namespace trajtopo
