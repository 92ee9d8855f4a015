#include "trajtopo/features.hpp"

#include <algorithm>
#include <atomic>
#include <istream>
#include <ostream>
#include <thread>

#include "trajtopo/io.hpp"

namespace trajtopo {

std::string_view to_string(FeatureFlag flag) {
  switch (flag) {
    case FeatureFlag::kHullDegenerate: return "hull_degenerate";
    case FeatureFlag::kDtClamped: return "dt_clamped";
    case FeatureFlag::kRankDeficient: return "rank_deficient";
    case FeatureFlag::kLoopsTruncated: return "loops_truncated";
  }
  return "unknown";
}

FeatureFlag parse_feature_flag(std::string_view name) {
  for (auto f : {FeatureFlag::kHullDegenerate, FeatureFlag::kDtClamped, FeatureFlag::kRankDeficient,
                 FeatureFlag::kLoopsTruncated})
    if (to_string(f) == name) return f;
  throw Error("unknown feature flag '" + std::string(name) + "'");
}

double loop_persistence(const PersistenceDiagram& diagram) {
  double total = 0.0;
  for (const auto& iv : diagram.intervals)
    if (iv.dim == 1 && std::isfinite(iv.death)) total += iv.death - iv.birth;
  return total;
}

bool has_essential_loops(const PersistenceDiagram& diagram) {
  return std::any_of(diagram.intervals.begin(), diagram.intervals.end(),
                     [](const Interval& iv) { return iv.dim == 1 && !std::isfinite(iv.death); });
}

Point3 trauma_center(const ReducedTrajectory& reduced, std::size_t k) {
  if (k < 1) throw Error("trauma center needs k >= 1");
  if (reduced.points.size() < k)
    throw Error("trajectory '" + reduced.user_id + "' has fewer than k=" + std::to_string(k) +
                " points");
  Point3 c{};
  for (std::size_t i = 0; i < k; ++i)
    for (int a = 0; a < 3; ++a) c[a] += reduced.points[i][a];
  for (int a = 0; a < 3; ++a) c[a] /= static_cast<double>(k);
  return c;
}

RecoveryVelocity semantic_recovery_velocity(const ReducedTrajectory& reduced, std::size_t k) {
  const std::size_t n = reduced.points.size();
  if (reduced.timestamps_days.size() != n) throw Error("points and timestamps differ in length");
  if (n <= k)
    throw Error("trajectory '" + reduced.user_id + "' needs more than k=" + std::to_string(k) +
                " points for a recovery velocity");
  const Point3 center = trauma_center(reduced, k);

  RecoveryVelocity out;
  double sum = 0.0;
  double prev = distance(reduced.points[k - 1], center);
  // 0-based i = k .. n-1 are the posts after the first k.
  for (std::size_t i = k; i < n; ++i) {
    const double cur = distance(reduced.points[i], center);
    double dt = reduced.timestamps_days[i] - reduced.timestamps_days[i - 1];
    if (dt < kMinDeltaDays) {
      dt = kMinDeltaDays;
      out.dt_clamped = true;
    }
    sum += (cur - prev) / dt;
    prev = cur;
  }
  out.value = sum / static_cast<double>(n - k);
  return out;
}

FeatureVector extract_features(const ReducedTrajectory& reduced, const FeatureConfig& config,
                               bool reducer_rank_deficient) {
  FeatureVector fv;
  fv.user_id = reduced.user_id;
  fv.n_posts = reduced.points.size();
  if (!reduced.timestamps_days.empty())
    fv.span_days = reduced.timestamps_days.back() - reduced.timestamps_days.front();

  const PersistenceDiagram diagram = compute_diagram(reduced.points, config.homology);
  fv.lp = loop_persistence(diagram);
  if (has_essential_loops(diagram)) fv.flags.insert(FeatureFlag::kLoopsTruncated);

  const FlareIndex fi = flare_index(reduced.points);
  fv.fi = fi.value;
  if (fi.degenerate) fv.flags.insert(FeatureFlag::kHullDegenerate);

  fv.trauma_center = trauma_center(reduced, config.k);
  const RecoveryVelocity srv = semantic_recovery_velocity(reduced, config.k);
  fv.srv = srv.value;
  if (srv.dt_clamped) fv.flags.insert(FeatureFlag::kDtClamped);
  if (reducer_rank_deficient) fv.flags.insert(FeatureFlag::kRankDeficient);
  return fv;
}

std::vector<FeatureVector> extract_all(const std::vector<ReducedTrajectory>& reduced,
                                       const FeatureConfig& config, bool reducer_rank_deficient,
                                       std::size_t jobs) {
  std::vector<FeatureVector> out(reduced.size());
  std::vector<std::exception_ptr> errors(reduced.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < reduced.size(); i = next++) {
      try {
        out[i] = extract_features(reduced[i], config, reducer_rank_deficient);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  jobs = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(1, reduced.size()));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < jobs; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

void write_feature_table(std::ostream& out, const std::vector<FeatureVector>& rows) {
  out << "user_id,lp,fi,srv,n_posts,span_days,flags\n";
  for (const auto& r : rows) {
    std::string flags;
    for (auto f : r.flags) {
      if (!flags.empty()) flags += ';';
      flags += to_string(f);
    }
    out << r.user_id << ',' << format_real(r.lp) << ',' << format_real(r.fi) << ','
        << format_real(r.srv) << ',' << r.n_posts << ',' << format_real(r.span_days) << ','
        << flags << '\n';
  }
}

std::vector<FeatureVector> read_feature_table(std::istream& in) {
  std::vector<FeatureVector> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line_no == 1) {
      if (line != "user_id,lp,fi,srv,n_posts,span_days,flags")
        throw Error("feature table: unexpected header '" + line + "'");
      continue;
    }
    const auto f = split(line, ',');
    if (f.size() != 7) throw Error("feature table line " + std::to_string(line_no) + ": expected 7 fields");
    FeatureVector fv;
    fv.user_id = f[0];
    fv.lp = parse_real(f[1]);
    fv.fi = parse_real(f[2]);
    fv.srv = parse_real(f[3]);
    fv.n_posts = static_cast<std::size_t>(parse_real(f[4]));
    fv.span_days = parse_real(f[5]);
    if (!f[6].empty())
      for (const auto& name : split(f[6], ';')) fv.flags.insert(parse_feature_flag(name));
    rows.push_back(std::move(fv));
  }
  return rows;
}

}  // namespace trajtopo
