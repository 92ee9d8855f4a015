#include "trajtopo/synth.hpp"

#include <cmath>
#include <cstdio>
#include <random>

#include "trajtopo/features.hpp"

namespace trajtopo {

std::string_view to_string(Archetype a) {
  switch (a) {
    case Archetype::kLoop: return "loop";
    case Archetype::kFlare: return "flare";
    case Archetype::kMixed: return "mixed";
  }
  return "loop";
}

Archetype parse_archetype(std::string_view name) {
  for (auto a : {Archetype::kLoop, Archetype::kFlare, Archetype::kMixed})
    if (to_string(a) == name) return a;
  throw Error("unknown archetype '" + std::string(name) + "'");
}

void SynthConfig::validate() const {
  if (n_posts < 10) throw Error("synthetic trajectories need at least 10 posts");
  if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) throw Error("noise sigma must be >= 0");
  if (!(time_step_days > 0.0)) throw Error("time step must be positive");
  if (!(loop_radius > 0.0)) throw Error("loop radius must be positive");
  if (!(drift_rate > 0.0)) throw Error("drift rate must be positive");
}

namespace {

// Orthonormal basis of the plane normal to (1,1,1).
const Point3 kPlaneU{1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0), 0.0};
const Point3 kPlaneV{1.0 / std::sqrt(6.0), 1.0 / std::sqrt(6.0), -2.0 / std::sqrt(6.0)};

// Angular step and radial growth of the flare helix, per post.
constexpr double kFlareTurn = 2.0 * M_PI / 16.0;
constexpr double kFlareSpread = 0.6;

std::vector<Point3> loop_points(std::size_t n, double radius, const Point3& center) {
  // Period chosen so post n lands on the angle of post k; the distance to
  // the trauma center is then the same at both ends of the velocity sum.
  const double tail = static_cast<double>(n > kDefaultTraumaK ? n - kDefaultTraumaK : n);
  const double laps = std::max(1.0, std::round(tail / 15.0));
  const double period = tail / laps;
  std::vector<Point3> pts;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = 2.0 * M_PI * static_cast<double>(i) / period;
    const double c = radius * std::cos(a), s = radius * std::sin(a);
    pts.push_back({center[0] + c * kPlaneU[0] + s * kPlaneV[0],
                   center[1] + c * kPlaneU[1] + s * kPlaneV[1],
                   center[2] + c * kPlaneU[2] + s * kPlaneV[2]});
  }
  return pts;
}

std::vector<Point3> flare_points(std::size_t n, double drift) {
  std::vector<Point3> pts;
  for (std::size_t i = 0; i < n; ++i) {
    const double step = static_cast<double>(i);
    const double rho = kFlareSpread * drift * step;
    const double a = kFlareTurn * step;
    pts.push_back({rho * std::cos(a), rho * std::sin(a), drift * step});
  }
  return pts;
}

}  // namespace

SyntheticUser generate(const SynthConfig& config) {
  config.validate();
  const std::size_t n = config.n_posts;
  std::vector<Point3> pts;
  Label label = Label::kNotImproved;
  switch (config.archetype) {
    case Archetype::kLoop:
      pts = loop_points(n, config.loop_radius, {0.0, 0.0, 0.0});
      break;
    case Archetype::kFlare:
      pts = flare_points(n, config.drift_rate);
      label = Label::kImproved;
      break;
    case Archetype::kMixed: {
      const std::size_t head = n / 2;
      pts = flare_points(head, config.drift_rate);
      const Point3 end = pts.back();
      // Loop passes through the flare's end point.
      const Point3 center{end[0] - config.loop_radius * kPlaneU[0],
                          end[1] - config.loop_radius * kPlaneU[1],
                          end[2] - config.loop_radius * kPlaneU[2]};
      auto tail = loop_points(n - head + 1, config.loop_radius, center);
      pts.insert(pts.end(), tail.begin() + 1, tail.end());
      break;
    }
  }

  std::mt19937_64 rng(config.seed);
  if (config.noise_sigma > 0.0) {
    std::normal_distribution<double> noise(0.0, config.noise_sigma);
    for (auto& p : pts)
      for (double& c : p) c += noise(rng);
  }

  SyntheticUser user;
  user.label = label;
  user.trajectory.points = std::move(pts);
  for (std::size_t i = 0; i < n; ++i)
    user.trajectory.timestamps_days.push_back(config.start_day +
                                              config.time_step_days * static_cast<double>(i));
  return user;
}

namespace {

constexpr const char* kFiller[] = {
    "Another long week, not sure what to say.",
    "Couldn't sleep again last night.",
    "Work was a lot today.",
    "Talked to my sister for a bit.",
    "Still trying to figure things out.",
    "Went for a walk, it was cold.",
    "Not much new, same routine.",
};

constexpr const char* kImprovement[] = {
    "I'm feeling better than I did a few months ago.",
    "Things are improving slowly.",
    "Therapy is helping more than I expected.",
};

}  // namespace

std::vector<SyntheticUser> generate_users(const CorpusSpec& spec) {
  spec.base.validate();
  std::mt19937_64 rng(spec.seed);
  // First posts between 2018-01-01 and the end of 2020, minus the span.
  const double span = spec.base.time_step_days * static_cast<double>(spec.base.n_posts - 1);
  const double first_day = 17532.0, last_day = 18627.0 - span;
  std::uniform_real_distribution<double> start(first_day, std::max(first_day, last_day));

  std::vector<SyntheticUser> users;
  for (std::size_t u = 0; u < spec.n_users; ++u) {
    SynthConfig cfg = spec.base;
    if (spec.include_mixed && u % 3 == 2)
      cfg.archetype = Archetype::kMixed;
    else
      cfg.archetype = (u % 2 == 0) ? Archetype::kLoop : Archetype::kFlare;
    cfg.seed = rng();
    cfg.start_day = std::floor(start(rng));
    SyntheticUser user = generate(cfg);
    char id[32];
    std::snprintf(id, sizeof id, "synth_%04zu", u);
    user.trajectory.user_id = id;
    users.push_back(std::move(user));
  }
  return users;
}

Trajectory to_trajectory(const SyntheticUser& user, std::uint64_t seed) {
  const auto& r = user.trajectory;
  const std::size_t n = r.points.size();
  const std::size_t slice = edge_slice_size(n);
  const bool improved = user.label == Label::kImproved;
  std::mt19937_64 rng(seed);

  Trajectory t;
  t.user_id = r.user_id;
  for (std::size_t i = 0; i < n; ++i) {
    Post p;
    char id[32];
    std::snprintf(id, sizeof id, "p%03zu", i);
    p.post_id = id;
    p.timestamp_seconds = std::round(r.timestamps_days[i] * kSecondsPerDay);
    p.embedding = {r.points[i][0], r.points[i][1], r.points[i][2]};
    if (improved && i >= n - slice)
      p.text = kImprovement[i % std::size(kImprovement)];
    else
      p.text = kFiller[(i + rng() % 3) % std::size(kFiller)];
    const bool late = 2 * i >= n;
    std::poisson_distribution<long long> comments(improved && late ? 4.0 : 2.0);
    p.comment_count = comments(rng);
    t.posts.push_back(std::move(p));
  }
  return t;
}

std::vector<Trajectory> generate_corpus(const CorpusSpec& spec) {
  std::vector<Trajectory> out;
  std::uint64_t k = 0;
  for (const auto& u : generate_users(spec)) out.push_back(to_trajectory(u, spec.seed ^ (++k * 0x9e3779b97f4a7c15ULL)));
  return out;
}

}  // namespace trajtopo
