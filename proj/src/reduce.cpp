#include "trajtopo/reduce.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "trajtopo/io.hpp"

namespace trajtopo {

ReducerMode parse_reducer_mode(std::string_view name) {
  if (name == "pca3") return ReducerMode::kPca3;
  if (name == "passthrough") return ReducerMode::kPassthrough;
  throw Error("unknown reducer '" + std::string(name) + "' (expected pca3 or passthrough)");
}

std::string_view to_string(ReducerMode mode) {
  return mode == ReducerMode::kPca3 ? "pca3" : "passthrough";
}

namespace {

// Relative eigenvalue floor below which a direction counts as absent.
constexpr double kRankTolerance = 1e-12;

std::size_t count_distinct_up_to(std::span<const std::vector<double>> rows, std::size_t limit) {
  std::vector<const std::vector<double>*> distinct;
  for (const auto& r : rows) {
    const bool seen = std::any_of(distinct.begin(), distinct.end(),
                                  [&](const std::vector<double>* d) { return *d == r; });
    if (!seen) {
      distinct.push_back(&r);
      if (distinct.size() >= limit) break;
    }
  }
  return distinct.size();
}

void fix_sign(Eigen::VectorXd& v) {
  Eigen::Index arg = 0;
  for (Eigen::Index i = 1; i < v.size(); ++i)
    if (std::abs(v[i]) > std::abs(v[arg])) arg = i;
  if (v[arg] < 0) v = -v;
}

// Extends `basis` with unit vectors orthogonal to everything already in it.
void complete_basis(std::vector<Eigen::VectorXd>& basis, Eigen::Index dim, std::size_t want) {
  for (Eigen::Index axis = 0; axis < dim && basis.size() < want; ++axis) {
    Eigen::VectorXd v = Eigen::VectorXd::Unit(dim, axis);
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& b : basis) v -= b.dot(v) * b;
    const double norm = v.norm();
    if (norm > 0.5) basis.push_back(v / norm);
  }
}

}  // namespace

ReducerModel fit_reducer(std::span<const std::vector<double>> embeddings) {
  if (embeddings.empty()) throw Error("cannot fit a reducer on an empty corpus");
  const auto n = static_cast<Eigen::Index>(embeddings.size());
  const auto d = static_cast<Eigen::Index>(embeddings.front().size());
  if (d < 3) throw Error("embedding dimension must be at least 3 for pca3");
  for (const auto& e : embeddings)
    if (static_cast<Eigen::Index>(e.size()) != d) throw Error("inconsistent embedding dimension");
  if (count_distinct_up_to(embeddings, 4) < 4)
    throw Error("pca3 needs at least 4 distinct embeddings (degenerate corpus)");

  Eigen::MatrixXd x(n, d);
  for (Eigen::Index i = 0; i < n; ++i)
    x.row(i) = Eigen::Map<const Eigen::RowVectorXd>(embeddings[i].data(), d);
  const Eigen::RowVectorXd mean = x.colwise().mean();
  x.rowwise() -= mean;

  const double denom = static_cast<double>(n - 1);
  std::vector<Eigen::VectorXd> components;
  std::vector<double> eigenvalues;
  double total = 0.0;

  if (n >= d) {
    const Eigen::MatrixXd cov = (x.transpose() * x) / denom;
    total = cov.trace();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
    if (solver.info() != Eigen::Success) throw Error("eigendecomposition failed");
    for (Eigen::Index k = 0; k < 3; ++k) {
      const Eigen::Index col = d - 1 - k;
      eigenvalues.push_back(std::max(0.0, solver.eigenvalues()[col]));
      components.push_back(solver.eigenvectors().col(col));
    }
  } else {
    // Gram trick: eigenvectors of X X^T map to principal axes via X^T.
    const Eigen::MatrixXd gram = (x * x.transpose()) / denom;
    total = gram.trace();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram);
    if (solver.info() != Eigen::Success) throw Error("eigendecomposition failed");
    for (Eigen::Index k = 0; k < 3 && k < n; ++k) {
      const Eigen::Index col = n - 1 - k;
      const double lambda = std::max(0.0, solver.eigenvalues()[col]);
      if (lambda <= kRankTolerance * total) break;
      Eigen::VectorXd v = x.transpose() * solver.eigenvectors().col(col);
      eigenvalues.push_back(lambda);
      components.push_back(v.normalized());
    }
  }

  ReducerModel model;
  for (std::size_t k = 0; k < eigenvalues.size(); ++k) {
    if (eigenvalues[k] <= kRankTolerance * total) {
      eigenvalues.resize(k);
      components.resize(k);
      break;
    }
  }
  model.rank_deficient = components.size() < 3;
  complete_basis(components, d, 3);
  eigenvalues.resize(3, 0.0);

  model.mean.assign(mean.data(), mean.data() + d);
  for (std::size_t k = 0; k < 3; ++k) {
    fix_sign(components[k]);
    model.components[k].assign(components[k].data(), components[k].data() + d);
    model.explained_variance_ratio[k] = std::clamp(eigenvalues[k] / total, 0.0, 1.0);
  }
  return model;
}

ReducerModel fit_reducer(const std::vector<Trajectory>& corpus) {
  std::vector<std::vector<double>> pooled;
  for (const auto& t : corpus)
    for (const auto& p : t.posts) pooled.push_back(p.embedding);
  return fit_reducer(std::span<const std::vector<double>>(pooled));
}

Point3 project(const ReducerModel& model, std::span<const double> embedding) {
  if (embedding.size() != model.dim())
    throw Error("embedding dimension " + std::to_string(embedding.size()) +
                " does not match reducer dimension " + std::to_string(model.dim()));
  Point3 out{};
  for (std::size_t k = 0; k < 3; ++k) {
    double acc = 0.0;
    for (std::size_t i = 0; i < embedding.size(); ++i)
      acc += model.components[k][i] * (embedding[i] - model.mean[i]);
    out[k] = acc;
  }
  return out;
}

ReducedTrajectory transform(const ReducerModel& model, const Trajectory& trajectory) {
  ReducedTrajectory r;
  r.user_id = trajectory.user_id;
  r.points.reserve(trajectory.posts.size());
  r.timestamps_days.reserve(trajectory.posts.size());
  for (const auto& p : trajectory.posts) {
    r.points.push_back(project(model, p.embedding));
    r.timestamps_days.push_back(p.days());
  }
  return r;
}

ReducedTrajectory passthrough(const Trajectory& trajectory) {
  ReducedTrajectory r;
  r.user_id = trajectory.user_id;
  for (const auto& p : trajectory.posts) {
    if (p.embedding.size() != 3)
      throw Error("passthrough reducer needs 3D embeddings, user '" + trajectory.user_id +
                  "' has dimension " + std::to_string(p.embedding.size()));
    r.points.push_back({p.embedding[0], p.embedding[1], p.embedding[2]});
    r.timestamps_days.push_back(p.days());
  }
  return r;
}

void write_reducer(std::ostream& out, const ReducerModel& model) {
  auto row = [&](const char* tag, const auto& values) {
    out << tag;
    for (double v : values) out << ' ' << format_real(v);
    out << '\n';
  };
  out << "trajtopo-reducer 1\n";
  out << "dim " << model.dim() << '\n';
  out << "rank_deficient " << (model.rank_deficient ? 1 : 0) << '\n';
  row("ratios", model.explained_variance_ratio);
  row("mean", model.mean);
  for (const auto& c : model.components) row("component", c);
}

ReducerModel read_reducer(std::istream& in) {
  ReducerModel model;
  std::string line;
  std::size_t dim = 0;
  std::size_t n_components = 0;
  bool header = false;
  while (std::getline(in, line)) {
    auto tok = split_ws(line);
    if (tok.empty() || tok[0][0] == '#') continue;
    const std::string& tag = tok[0];
    auto values = [&](std::size_t expected) {
      if (tok.size() != expected + 1) throw Error("reducer file: bad '" + tag + "' row");
      std::vector<double> v;
      for (std::size_t i = 1; i < tok.size(); ++i) v.push_back(parse_real(tok[i]));
      return v;
    };
    if (tag == "trajtopo-reducer") {
      header = true;
    } else if (tag == "dim") {
      dim = static_cast<std::size_t>(values(1)[0]);
    } else if (tag == "rank_deficient") {
      model.rank_deficient = values(1)[0] != 0.0;
    } else if (tag == "ratios") {
      auto v = values(3);
      std::copy(v.begin(), v.end(), model.explained_variance_ratio.begin());
    } else if (tag == "mean") {
      model.mean = values(dim);
    } else if (tag == "component") {
      if (n_components >= 3) throw Error("reducer file: more than three components");
      model.components[n_components++] = values(dim);
    } else {
      throw Error("reducer file: unknown row '" + tag + "'");
    }
  }
  if (!header || dim < 3 || model.mean.size() != dim || n_components != 3)
    throw Error("reducer file is incomplete");
  return model;
}

}  // namespace trajtopo
