#pragma once
// Per-user trajectory features: loop persistence, flare index and semantic
// recovery velocity, plus the trauma center they are measured against.

#include <cstddef>
#include <iosfwd>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "trajtopo/homology.hpp"
#include "trajtopo/types.hpp"

namespace trajtopo {

inline constexpr std::size_t kDefaultTraumaK = 5;
/// Smallest time step used in the velocity average (one minute).
inline constexpr double kMinDeltaDays = 1.0 / 1440.0;

enum class FeatureFlag {
  kHullDegenerate,
  kDtClamped,
  kRankDeficient,
  kLoopsTruncated,  // an H1 class outlived max_eps and was left out of LP
};

std::string_view to_string(FeatureFlag flag);
FeatureFlag parse_feature_flag(std::string_view name);

struct FeatureVector {
  std::string user_id;
  double lp = 0.0;
  double fi = 0.0;
  double srv = 0.0;
  Point3 trauma_center{};
  std::size_t n_posts = 0;
  double span_days = 0.0;
  std::set<FeatureFlag> flags;
};

/// Sum of (death - birth) over finite dimension-1 intervals.
double loop_persistence(const PersistenceDiagram& diagram);

/// True when some dimension-1 interval never dies (truncated filtration).
bool has_essential_loops(const PersistenceDiagram& diagram);

/// Volume of the 3D convex hull; 0 for affinely dependent input.
double convex_hull_volume(std::span<const Point3> points);

struct FlareIndex {
  double value = 0.0;
  bool degenerate = false;
};

/// Hull volume over axis-aligned bounding-box volume, in [0, 1]. Flat or
/// lower-dimensional clouds give 0 with `degenerate` set. Not rotation
/// invariant, since the box is axis-aligned.
FlareIndex flare_index(std::span<const Point3> points);

/// Mean of the first k points.
Point3 trauma_center(const ReducedTrajectory& reduced, std::size_t k = kDefaultTraumaK);

struct RecoveryVelocity {
  double value = 0.0;
  bool dt_clamped = false;
};

/// Average over i > k of the change in distance to the trauma center divided
/// by the elapsed days between posts i-1 and i. Requires n > k.
RecoveryVelocity semantic_recovery_velocity(const ReducedTrajectory& reduced,
                                            std::size_t k = kDefaultTraumaK);

struct FeatureConfig {
  std::size_t k = kDefaultTraumaK;
  HomologyConfig homology;
};

FeatureVector extract_features(const ReducedTrajectory& reduced, const FeatureConfig& config = {},
                               bool reducer_rank_deficient = false);

/// Computes features for many users on `jobs` threads; output keeps input order.
std::vector<FeatureVector> extract_all(const std::vector<ReducedTrajectory>& reduced,
                                       const FeatureConfig& config, bool reducer_rank_deficient,
                                       std::size_t jobs);

/// CSV with header `user_id,lp,fi,srv,n_posts,span_days,flags`; flags are
/// `;`-separated names, empty when none.
void write_feature_table(std::ostream& out, const std::vector<FeatureVector>& rows);
std::vector<FeatureVector> read_feature_table(std::istream& in);

}  // namespace trajtopo
