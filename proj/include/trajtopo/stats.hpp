#pragma once
// Group comparisons, correlation and odds ratios used to relate features to
// proxy labels.

#include <span>
#include <vector>

namespace trajtopo {

struct GroupStats {
  double cohens_d = 0.0;  // (mean_a - mean_b) / pooled SD
  double welch_t = 0.0;
  double df = 0.0;  // Welch-Satterthwaite
  double p_two_sided = 1.0;
};

GroupStats group_stats(std::span<const double> a, std::span<const double> b);

/// Two-sided tail probability P(|T| >= |t|) of Student's t with `df` degrees
/// of freedom, by adaptive Simpson quadrature of the density.
double student_t_two_sided_p(double t, double df);

/// Standard normal quantile.
double normal_quantile(double p);

struct Correlation {
  double r = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
};

/// Sample Pearson r with a Fisher-z confidence interval.
Correlation pearson_r_ci(std::span<const double> x, std::span<const double> y,
                         double confidence = 0.95);

struct OddsRatio {
  double odds_ratio = 1.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  bool corrected = false;  // Haldane-Anscombe +0.5 applied
};

/// 2x2 table: a = exposed & improved, b = exposed & not, c = unexposed &
/// improved, d = unexposed & not. Wald interval on log OR.
OddsRatio odds_ratio(double a, double b, double c, double d, double confidence = 0.95);

/// Exposure = value in the top quartile (>= the 75th percentile, linear
/// interpolation between order statistics).
OddsRatio quartile_odds_ratio(std::span<const double> values, const std::vector<bool>& improved,
                              double confidence = 0.95);

}  // namespace trajtopo
