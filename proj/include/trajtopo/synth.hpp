#pragma once
// Synthetic 3D trajectories with known shape: a recirculating loop, an
// outward-drifting flare, or a flare followed by a loop.

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "trajtopo/ingest.hpp"
#include "trajtopo/labeling.hpp"
#include "trajtopo/types.hpp"

namespace trajtopo {

enum class Archetype { kLoop, kFlare, kMixed };

std::string_view to_string(Archetype a);
Archetype parse_archetype(std::string_view name);

struct SynthConfig {
  Archetype archetype = Archetype::kLoop;
  std::size_t n_posts = 20;
  double noise_sigma = 0.05;  // isotropic, absolute units
  std::uint64_t seed = 0;
  double time_step_days = 7.0;
  double loop_radius = 1.0;
  double drift_rate = 0.5;
  double start_day = 17532.0;  // 2018-01-01 in days since the epoch

  void validate() const;
};

struct SyntheticUser {
  ReducedTrajectory trajectory;
  Label label = Label::kNotImproved;  // flare: improved; loop and mixed: not
};

/// Loop: a circle of `loop_radius` in the plane normal to (1,1,1), traversed
/// so that the last post returns to the angle of post k = 5. Flare: an
/// expanding conical helix about the z axis whose distance from the start
/// grows every step. Mixed: first half flare, second half loop around the
/// flare's end point.
SyntheticUser generate(const SynthConfig& config);

struct CorpusSpec {
  std::size_t n_users = 200;  // alternating loop / flare
  std::uint64_t seed = 0;
  SynthConfig base;  // archetype and seed are overridden per user
  bool include_mixed = false;  // every third user mixed when set
};

/// Users `synth_0000`, ...; first posts spread over 2018-2020. Posts carry
/// short text stubs (improvement phrases in the final fifth for improved
/// users) and comment counts.
std::vector<SyntheticUser> generate_users(const CorpusSpec& spec);

Trajectory to_trajectory(const SyntheticUser& user, std::uint64_t seed);

std::vector<Trajectory> generate_corpus(const CorpusSpec& spec);

}  // namespace trajtopo
