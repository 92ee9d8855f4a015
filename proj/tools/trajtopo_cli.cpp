// trajtopo: command-line driver for the trajectory topology pipeline.
//
//   synth -> ingest -> reduce -> features -> label -> train -> evaluate
//   ph / plot for individual point clouds and diagrams
//
// Stages exchange plain files; every subcommand exits non-zero with a
// one-line diagnostic on error.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <thread>

#include "trajtopo/evaluation.hpp"
#include "trajtopo/features.hpp"
#include "trajtopo/forest.hpp"
#include "trajtopo/homology.hpp"
#include "trajtopo/ingest.hpp"
#include "trajtopo/io.hpp"
#include "trajtopo/labeling.hpp"
#include "trajtopo/reduce.hpp"
#include "trajtopo/stats.hpp"
#include "trajtopo/svg_plot.hpp"
#include "trajtopo/synth.hpp"

namespace {

using namespace trajtopo;

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "' for reading");
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  return out;
}

std::vector<Trajectory> load_corpus(const std::string& path) {
  auto in = open_in(path);
  return parse_corpus(in);
}

std::size_t default_jobs() { return std::max(1u, std::thread::hardware_concurrency()); }

struct RunConfig {
  std::string input, output;
  std::size_t k = kDefaultTraumaK;
  std::size_t min_posts = 10;
  double min_span_days = 90.0;
  int max_dim = 2;
  std::optional<double> max_eps;
  std::string reducer;
  std::string patterns;
  double theta_freq = kDefaultBehaviorTheta;
  double theta_resp = kDefaultBehaviorTheta;
  std::size_t trees = 100;
  std::size_t folds = 5;
  std::uint64_t seed = 42;
  std::optional<int> cutoff_year;
  std::size_t window = 10;
  std::size_t stride = 5;
  std::size_t jobs = default_jobs();

  // Subcommand-specific.
  std::string model_path, labels_path, corpus_path, fold_path, stats_path, baseline_path;
  std::string betti_output, title;
  std::string label_source = "pattern";
  std::string feature_list = "lp,fi,srv";
  int betti_dim = 1;
  std::size_t grid_steps = 64;
  std::size_t users = 200, posts = 20;
  double noise = 0.05, time_step = 7.0, radius = 1.0, drift = 0.5;
  bool mixed = false;

  CorpusFilter filter() const {
    CorpusFilter f{min_posts, min_span_days};
    f.validate();
    return f;
  }
  HomologyConfig homology() const { return {max_dim, max_eps}; }
};

void add_io(CLI::App* app, RunConfig& cfg, const std::string& in_help, const std::string& out_help) {
  app->add_option("--input", cfg.input, in_help)->required();
  app->add_option("--output", cfg.output, out_help)->required();
}

void add_filter(CLI::App* app, RunConfig& cfg) {
  app->add_option("--min-posts", cfg.min_posts, "Minimum posts per user (reference default)")
      ->capture_default_str()
      ->check(CLI::Range(2, 1 << 30));
  app->add_option("--min-span-days", cfg.min_span_days,
                  "Minimum days between first and last post (reference default)")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
}

void add_homology(CLI::App* app, RunConfig& cfg) {
  app->add_option("--max-dim", cfg.max_dim, "Highest homology dimension (0-2)")
      ->capture_default_str()
      ->check(CLI::Range(0, 2));
  app->add_option("--max-eps", cfg.max_eps,
                  "Filtration cap (default: enclosing radius; 'inf' for none)")
      ->transform([](std::string s) { return format_real(parse_real(s)); });
}

void add_jobs(CLI::App* app, RunConfig& cfg) {
  app->add_option("--jobs", cfg.jobs, "Worker threads (default: hardware concurrency)")
      ->check(CLI::Range(1, 4096));
}

// ---------------------------------------------------------------- ingest

int run_ingest(const RunConfig& cfg) {
  const auto corpus = load_corpus(cfg.input);
  const auto kept = apply_filter(corpus, cfg.filter());
  if (kept.empty()) throw Error("no users left after filtering");
  auto out = open_out(cfg.output);
  write_corpus(out, kept);
  std::cerr << "ingest: " << kept.size() << " of " << corpus.size() << " users kept\n";
  return 0;
}

// ---------------------------------------------------------------- reduce

std::vector<ReducedTrajectory> reduce_corpus(const std::vector<Trajectory>& corpus, ReducerMode mode,
                                             bool& rank_deficient,
                                             std::optional<ReducerModel>* fitted = nullptr) {
  std::vector<ReducedTrajectory> out;
  rank_deficient = false;
  if (mode == ReducerMode::kPassthrough) {
    for (const auto& t : corpus) out.push_back(passthrough(t));
    return out;
  }
  const ReducerModel model = fit_reducer(corpus);
  rank_deficient = model.rank_deficient;
  for (const auto& t : corpus) out.push_back(transform(model, t));
  if (fitted) *fitted = model;
  return out;
}

int run_reduce(const RunConfig& cfg) {
  const auto corpus = load_corpus(cfg.input);
  if (corpus.empty()) throw Error("input corpus is empty");
  bool rank_deficient = false;
  std::optional<ReducerModel> model;
  const auto reduced = reduce_corpus(corpus, parse_reducer_mode(cfg.reducer), rank_deficient, &model);

  std::vector<Trajectory> projected = corpus;
  for (std::size_t u = 0; u < corpus.size(); ++u)
    for (std::size_t i = 0; i < corpus[u].posts.size(); ++i) {
      const auto& p = reduced[u].points[i];
      projected[u].posts[i].embedding = {p[0], p[1], p[2]};
    }
  auto out = open_out(cfg.output);
  write_corpus(out, projected);
  if (!cfg.model_path.empty()) {
    if (!model) throw Error("--model needs --reducer pca3");
    auto mout = open_out(cfg.model_path);
    write_reducer(mout, *model);
  }
  if (rank_deficient) std::cerr << "reduce: warning: embeddings span fewer than 3 dimensions\n";
  return 0;
}

// ---------------------------------------------------------------- ph

int run_ph(const RunConfig& cfg, bool windowed) {
  auto in = open_in(cfg.input);
  const auto points = read_points(in);
  if (points.empty()) throw Error("no points in '" + cfg.input + "'");
  auto out = open_out(cfg.output);
  PersistenceDiagram whole;
  if (windowed) {
    ReducedTrajectory r;
    r.points = points;
    r.timestamps_days.assign(points.size(), 0.0);
    for (const auto& w : sliding_window_diagrams(r, cfg.window, cfg.stride, cfg.homology())) {
      out << "# window " << w.start << '\n';
      write_diagram(out, w.diagram);
    }
    whole = compute_diagram(points, cfg.homology());
  } else {
    whole = compute_diagram(points, cfg.homology());
    write_diagram(out, whole);
  }
  if (!cfg.betti_output.empty()) {
    const auto grid = default_grid(whole, cfg.grid_steps);
    auto bout = open_out(cfg.betti_output);
    write_betti_curve(bout, betti_curve(whole, cfg.betti_dim, grid));
  }
  return 0;
}

// ---------------------------------------------------------------- features

int run_features(const RunConfig& cfg) {
  const auto corpus = apply_filter(load_corpus(cfg.input), cfg.filter());
  if (corpus.empty()) throw Error("no users left after filtering");
  bool rank_deficient = false;
  const auto reduced = reduce_corpus(corpus, parse_reducer_mode(cfg.reducer), rank_deficient);
  FeatureConfig fc;
  fc.k = cfg.k;
  fc.homology = cfg.homology();
  const auto rows = extract_all(reduced, fc, rank_deficient, cfg.jobs);
  auto out = open_out(cfg.output);
  write_feature_table(out, rows);
  return 0;
}

// ---------------------------------------------------------------- label

std::vector<Label> paired(const std::map<std::string, Label>& a, const std::map<std::string, Label>& b,
                          std::vector<Label>& other) {
  std::vector<Label> first;
  other.clear();
  for (const auto& [user, la] : a) {
    auto it = b.find(user);
    if (it == b.end() || la == Label::kUnclear || it->second == Label::kUnclear) continue;
    first.push_back(la);
    other.push_back(it->second);
  }
  return first;
}

int run_label(const RunConfig& cfg) {
  const auto corpus = load_corpus(cfg.input);
  if (corpus.empty()) throw Error("input corpus is empty");
  PatternSet patterns = PatternSet::defaults();
  if (!cfg.patterns.empty()) {
    auto pin = open_in(cfg.patterns);
    patterns = PatternSet::parse(pin);
  }

  std::vector<LabelRecord> rows;
  std::map<LabelSource, std::map<std::string, Label>> by_source;
  auto add = [&](LabelRecord r) {
    by_source[r.source][r.user_id] = r.label;
    rows.push_back(std::move(r));
  };
  for (const auto& t : corpus) {
    // Users too short for a rule get an unclear label rather than failing the run.
    try {
      add(pattern_label(t, patterns));
    } catch (const Error&) {
      add({t.user_id, Label::kUnclear, LabelSource::kPattern});
    }
    try {
      add(frequency_label(t, cfg.theta_freq));
    } catch (const Error&) {
      add({t.user_id, Label::kUnclear, LabelSource::kBehaviorFrequency});
    }
    add(response_label(t, cfg.theta_resp));
  }
  auto out = open_out(cfg.output);
  write_label_table(out, rows,
                    "theta_freq=" + format_real(cfg.theta_freq) + " theta_resp=" + format_real(cfg.theta_resp));

  for (auto source : {LabelSource::kBehaviorFrequency, LabelSource::kBehaviorResponse}) {
    std::vector<Label> b;
    const auto a = paired(by_source[LabelSource::kPattern], by_source[source], b);
    if (a.empty()) continue;
    const Kappa k = cohens_kappa(a, b);
    std::cerr << "label: kappa(pattern, " << to_string(source) << ") = " << format_real(k.value)
              << " over " << a.size() << " users" << (k.degenerate ? " (degenerate)" : "") << '\n';
  }
  return 0;
}

// ---------------------------------------------------------------- dataset assembly

const std::vector<std::string> kFeatureColumns = {"lp",        "fi",         "srv",
                                                  "n_posts",   "span_days",  "hull_degenerate",
                                                  "dt_clamped"};

std::vector<std::string> parse_feature_list(const std::string& list) {
  std::vector<std::string> names;
  for (auto& n : split(list, ','))
    if (!n.empty()) names.push_back(n);
  if (names.empty()) throw Error("empty feature list");
  return names;
}

// Joins the feature table with one label source (unclear rows dropped),
// optional first-post years from a corpus, and optional baseline columns.
LabeledDataset assemble(const RunConfig& cfg) {
  auto fin = open_in(cfg.input);
  const auto features = read_feature_table(fin);
  auto lin = open_in(cfg.labels_path);
  const LabelSource source = parse_label_source(cfg.label_source);
  std::map<std::string, Label> labels;
  for (const auto& r : read_label_table(lin))
    if (r.source == source) labels[r.user_id] = r.label;

  std::map<std::string, int> years;
  if (!cfg.corpus_path.empty())
    for (const auto& t : load_corpus(cfg.corpus_path))
      if (!t.posts.empty()) years[t.user_id] = utc_year(t.posts.front().timestamp_seconds);

  std::vector<std::string> baseline_names;
  std::map<std::string, std::vector<double>> baseline;
  if (!cfg.baseline_path.empty()) {
    auto bin = open_in(cfg.baseline_path);
    std::string line;
    std::getline(bin, line);
    auto header = split(line, ',');
    if (header.size() < 2 || header[0] != "user_id") throw Error("baseline table needs a user_id column");
    baseline_names.assign(header.begin() + 1, header.end());
    while (std::getline(bin, line)) {
      if (line.empty()) continue;
      auto f = split(line, ',');
      if (f.size() != header.size()) throw Error("baseline table: ragged row");
      auto& v = baseline[f[0]];
      for (std::size_t i = 1; i < f.size(); ++i) v.push_back(parse_real(f[i]));
    }
  }

  LabeledDataset data;
  data.feature_names = kFeatureColumns;
  data.feature_names.insert(data.feature_names.end(), baseline_names.begin(), baseline_names.end());
  for (const auto& fv : features) {
    auto it = labels.find(fv.user_id);
    if (it == labels.end() || it->second == Label::kUnclear) continue;
    LabeledRow row;
    row.user_id = fv.user_id;
    row.improved = it->second == Label::kImproved;
    row.values = {fv.lp,
                  fv.fi,
                  fv.srv,
                  static_cast<double>(fv.n_posts),
                  fv.span_days,
                  fv.flags.count(FeatureFlag::kHullDegenerate) ? 1.0 : 0.0,
                  fv.flags.count(FeatureFlag::kDtClamped) ? 1.0 : 0.0};
    if (!baseline_names.empty()) {
      auto b = baseline.find(fv.user_id);
      if (b == baseline.end()) continue;
      row.values.insert(row.values.end(), b->second.begin(), b->second.end());
    }
    if (!years.empty()) {
      auto y = years.find(fv.user_id);
      if (y == years.end()) throw Error("user '" + fv.user_id + "' missing from --corpus");
      row.first_post_year = y->second;
    }
    data.rows.push_back(std::move(row));
  }
  if (data.rows.empty()) throw Error("no labelled rows after joining features and labels");
  return data;
}

ForestConfig forest_config(const RunConfig& cfg) {
  ForestConfig fc;
  fc.n_trees = cfg.trees;
  fc.seed = cfg.seed;
  fc.jobs = cfg.jobs;
  return fc;
}

// ---------------------------------------------------------------- train / evaluate

int run_train(const RunConfig& cfg) {
  LabeledDataset data = assemble(cfg);
  if (cfg.cutoff_year) {
    if (cfg.corpus_path.empty()) throw Error("--cutoff-year needs --corpus for first-post years");
    data = temporal_split(data, *cfg.cutoff_year).first;
  }
  const auto names = parse_feature_list(cfg.feature_list);
  const ForestModel model = train_forest(data.select(names), forest_config(cfg));
  auto out = open_out(cfg.output);
  write_forest(out, model);
  std::cerr << "train: " << data.rows.size() << " rows, " << model.trees.size() << " trees\n";
  return 0;
}

void write_group_stats(const std::string& path, const LabeledDataset& data,
                       const std::vector<std::string>& names) {
  auto out = open_out(path);
  out << "feature,mean_improved,mean_not_improved,cohens_d,welch_t,df,p,pearson_r,r_ci_low,r_ci_high,"
         "top_quartile_or,or_ci_low,or_ci_high,or_corrected\n";
  const auto labels = data.labels();
  for (const auto& name : names) {
    const auto col = data.select(std::vector<std::string>{name});
    std::vector<double> all, improved, rest, y;
    for (const auto& r : col.rows) {
      all.push_back(r.values[0]);
      (r.improved ? improved : rest).push_back(r.values[0]);
      y.push_back(r.improved ? 1.0 : 0.0);
    }
    auto mean = [](const std::vector<double>& v) {
      double s = 0;
      for (double x : v) s += x;
      return v.empty() ? 0.0 : s / static_cast<double>(v.size());
    };
    out << name << ',' << format_real(mean(improved)) << ',' << format_real(mean(rest));
    try {
      const GroupStats g = group_stats(improved, rest);
      out << ',' << format_real(g.cohens_d) << ',' << format_real(g.welch_t) << ','
          << format_real(g.df) << ',' << format_real(g.p_two_sided);
    } catch (const Error&) {
      out << ",nan,nan,nan,nan";
    }
    try {
      const Correlation c = pearson_r_ci(all, y);
      out << ',' << format_real(c.r) << ',' << format_real(c.ci_low) << ',' << format_real(c.ci_high);
    } catch (const Error&) {
      out << ",nan,nan,nan";
    }
    try {
      const OddsRatio o = quartile_odds_ratio(all, labels);
      out << ',' << format_real(o.odds_ratio) << ',' << format_real(o.ci_low) << ','
          << format_real(o.ci_high) << ',' << (o.corrected ? 1 : 0);
    } catch (const Error&) {
      out << ",nan,nan,nan,0";
    }
    out << '\n';
  }
}

int run_evaluate(const RunConfig& cfg) {
  const LabeledDataset data = assemble(cfg);
  std::vector<MetricsReport> reports;

  if (!cfg.model_path.empty()) {
    auto min = open_in(cfg.model_path);
    const ForestModel model = read_forest(min);
    LabeledDataset test = data;
    if (cfg.cutoff_year) {
      if (cfg.corpus_path.empty()) throw Error("--cutoff-year needs --corpus for first-post years");
      test = temporal_split(data, *cfg.cutoff_year).second;
    }
    reports.push_back(summarize("model", {evaluate(model, test)}));
  } else {
    const auto topo = parse_feature_list(cfg.feature_list);
    std::vector<std::pair<std::string, std::vector<std::string>>> runs = {{"topological", topo}};
    for (const auto& f : topo) runs.push_back({f + "_only", {f}});
    if (data.feature_names.size() > kFeatureColumns.size()) {
      std::vector<std::string> base(data.feature_names.begin() + kFeatureColumns.size(),
                                    data.feature_names.end());
      std::vector<std::string> combined = topo;
      combined.insert(combined.end(), base.begin(), base.end());
      runs.push_back({"baseline", base});
      runs.push_back({"combined", combined});
    }
    for (std::size_t i = 0; i < runs.size(); ++i) {
      const auto cv = cross_validate(data, cfg.folds, cfg.seed, runs[i].second, forest_config(cfg),
                                     runs[i].first);
      reports.push_back(cv.report);
      if (i == 0 && !cfg.fold_path.empty()) {
        auto fout = open_out(cfg.fold_path);
        write_fold_assignments(fout, data, cv.folds);
      }
    }
    if (cfg.cutoff_year) {
      if (cfg.corpus_path.empty()) throw Error("--cutoff-year needs --corpus for first-post years");
      auto [train, test] = temporal_split(data, *cfg.cutoff_year);
      const ForestModel model = train_forest(train.select(topo), forest_config(cfg));
      reports.push_back(summarize("temporal_holdout", {evaluate(model, test)}));
    }
  }
  auto out = open_out(cfg.output);
  write_metrics_table(out, reports);
  if (!cfg.stats_path.empty()) write_group_stats(cfg.stats_path, data, parse_feature_list(cfg.feature_list));
  return 0;
}

// ---------------------------------------------------------------- synth / plot

int run_synth(const RunConfig& cfg) {
  CorpusSpec spec;
  spec.n_users = cfg.users;
  spec.seed = cfg.seed;
  spec.include_mixed = cfg.mixed;
  spec.base.n_posts = cfg.posts;
  spec.base.noise_sigma = cfg.noise;
  spec.base.time_step_days = cfg.time_step;
  spec.base.loop_radius = cfg.radius;
  spec.base.drift_rate = cfg.drift;
  if (spec.n_users == 0) throw Error("--users must be positive");

  const auto users = generate_users(spec);
  std::vector<Trajectory> corpus;
  std::vector<LabelRecord> truth;
  std::uint64_t k = 0;
  for (const auto& u : users) {
    corpus.push_back(to_trajectory(u, spec.seed ^ (++k * 0x9e3779b97f4a7c15ULL)));
    truth.push_back({u.trajectory.user_id, u.label, LabelSource::kSyntheticTruth});
  }
  auto out = open_out(cfg.output);
  write_corpus(out, corpus);
  if (!cfg.labels_path.empty()) {
    auto lout = open_out(cfg.labels_path);
    write_label_table(lout, truth);
  }
  return 0;
}

int run_plot(const RunConfig& cfg) {
  auto in = open_in(cfg.input);
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();

  std::size_t columns = 3;
  std::istringstream scan(text);
  for (std::string line; std::getline(scan, line);) {
    const auto tok = split_ws(line);
    if (tok.empty() || tok[0][0] == '#') continue;
    columns = tok.size();
    break;
  }
  std::istringstream parse(text);
  std::string svg;
  if (columns == 2)
    svg = render_betti_svg(read_betti_curve(parse), cfg.title);
  else
    svg = render_diagram_svg(read_diagram(parse), cfg.title);
  auto out = open_out(cfg.output);
  out << svg;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"trajtopo: persistent-homology features of longitudinal post trajectories"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto* ingest = app.add_subcommand("ingest", "Validate, group and filter a line-delimited corpus");
  add_io(ingest, cfg, "Input records (JSON lines)", "Canonical corpus (JSON lines)");
  add_filter(ingest, cfg);

  auto* reduce = app.add_subcommand("reduce", "Project embeddings to 3D");
  add_io(reduce, cfg, "Corpus (JSON lines)", "Corpus with 3D embeddings (JSON lines)");
  cfg.reducer = "pca3";
  reduce->add_option("--reducer", cfg.reducer, "pca3 | passthrough")
      ->capture_default_str()
      ->check(CLI::IsMember({"pca3", "passthrough"}));
  reduce->add_option("--model", cfg.model_path, "Also write the fitted reducer here");

  auto* ph = app.add_subcommand("ph", "Persistence diagram of a point file (x y z per line)");
  add_io(ph, cfg, "Point file", "Diagram file (dim birth death per line)");
  add_homology(ph, cfg);
  ph->add_option("--window", cfg.window, "Sliding-window size in points (enables windowed output)")
      ->capture_default_str()
      ->check(CLI::Range(4, 1 << 30));
  ph->add_option("--stride", cfg.stride, "Sliding-window stride")
      ->capture_default_str()
      ->check(CLI::Range(1, 1 << 30));
  ph->add_option("--betti-output", cfg.betti_output, "Also write a Betti curve (eps count) here");
  ph->add_option("--betti-dim", cfg.betti_dim, "Dimension of the Betti curve")
      ->capture_default_str()
      ->check(CLI::Range(0, 2));
  ph->add_option("--grid-steps", cfg.grid_steps, "Grid points of the Betti curve")
      ->capture_default_str()
      ->check(CLI::Range(2, 1 << 20));

  auto* features = app.add_subcommand("features", "Compute LP, FI and SRV per user");
  add_io(features, cfg, "Corpus (JSON lines)", "Feature table (CSV)");
  add_filter(features, cfg);
  add_homology(features, cfg);
  add_jobs(features, cfg);
  features->add_option("--k", cfg.k, "Posts in the trauma center (reference default)")
      ->capture_default_str()
      ->check(CLI::Range(1, 1 << 20));
  features->add_option("--reducer", cfg.reducer, "pca3 | passthrough (default: passthrough)")
      ->check(CLI::IsMember({"pca3", "passthrough"}));

  auto* label = app.add_subcommand("label", "Derive proxy improvement labels");
  add_io(label, cfg, "Corpus (JSON lines)", "Label table (CSV)");
  label->add_option("--patterns", cfg.patterns, "Pattern file (default: built-in phrases)");
  label->add_option("--theta-freq", cfg.theta_freq, "Relative posting-rate drop for improved")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  label->add_option("--theta-resp", cfg.theta_resp, "Relative comment-rate rise for improved")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);

  auto add_dataset = [&](CLI::App* sub) {
    sub->add_option("--labels", cfg.labels_path, "Label table (CSV)")->required();
    sub->add_option("--label-source", cfg.label_source,
                    "pattern | behavior_frequency | behavior_response | synthetic_truth")
        ->capture_default_str();
    sub->add_option("--corpus", cfg.corpus_path, "Corpus, for first-post years (temporal holdout)");
    sub->add_option("--features", cfg.feature_list, "Comma-separated feature columns")
        ->capture_default_str();
    sub->add_option("--baseline", cfg.baseline_path, "Extra baseline columns (CSV with user_id)");
    sub->add_option("--trees", cfg.trees, "Trees per forest (reference default)")
        ->capture_default_str()
        ->check(CLI::Range(1, 100000));
    sub->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
    sub->add_option("--cutoff-year", cfg.cutoff_year,
                    "Temporal holdout: train on first-post year <= this (reference protocol: 2019)");
    add_jobs(sub, cfg);
  };

  auto* train = app.add_subcommand("train", "Train a random forest");
  add_io(train, cfg, "Feature table (CSV)", "Model file");
  add_dataset(train);

  auto* evaluate_cmd = app.add_subcommand("evaluate", "Cross-validate or score a model");
  add_io(evaluate_cmd, cfg, "Feature table (CSV)", "Metrics table (CSV)");
  add_dataset(evaluate_cmd);
  evaluate_cmd->add_option("--model", cfg.model_path, "Score this model instead of cross-validating");
  evaluate_cmd->add_option("--folds", cfg.folds, "Stratified folds (reference default)")
      ->capture_default_str()
      ->check(CLI::Range(2, 1000));
  evaluate_cmd->add_option("--fold-assignments", cfg.fold_path, "Write user_id,fold here");
  evaluate_cmd->add_option("--stats-output", cfg.stats_path,
                           "Write group statistics, correlation and odds ratios here");

  auto* synth = app.add_subcommand("synth", "Generate synthetic loop/flare trajectories");
  synth->add_option("--output", cfg.output, "Corpus (JSON lines, 3D embeddings)")->required();
  synth->add_option("--labels", cfg.labels_path, "Also write ground-truth labels here");
  synth->add_option("--users", cfg.users, "Users (alternating loop / flare)")->capture_default_str();
  synth->add_option("--posts", cfg.posts, "Posts per user")->capture_default_str()->check(CLI::Range(10, 100000));
  synth->add_option("--noise", cfg.noise, "Gaussian noise sigma")->capture_default_str()->check(CLI::NonNegativeNumber);
  synth->add_option("--time-step", cfg.time_step, "Days between posts")->capture_default_str()->check(CLI::PositiveNumber);
  synth->add_option("--radius", cfg.radius, "Loop radius")->capture_default_str()->check(CLI::PositiveNumber);
  synth->add_option("--drift", cfg.drift, "Flare drift per post")->capture_default_str()->check(CLI::PositiveNumber);
  synth->add_flag("--mixed", cfg.mixed, "Make every third user a flare-then-loop trajectory");
  synth->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();

  auto* plot = app.add_subcommand("plot", "Render a diagram or Betti curve file to SVG");
  add_io(plot, cfg, "Diagram (3 columns) or Betti curve (2 columns)", "SVG file");
  plot->add_option("--title", cfg.title, "Plot title");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (cfg.reducer.empty()) cfg.reducer = "passthrough";
    if (*ingest) return run_ingest(cfg);
    if (*reduce) return run_reduce(cfg);
    if (*ph) return run_ph(cfg, ph->count("--window") > 0 || ph->count("--stride") > 0);
    if (*features) return run_features(cfg);
    if (*label) return run_label(cfg);
    if (*train) return run_train(cfg);
    if (*evaluate_cmd) return run_evaluate(cfg);
    if (*synth) return run_synth(cfg);
    if (*plot) return run_plot(cfg);
  } catch (const std::exception& e) {
    std::cerr << "trajtopo: error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
