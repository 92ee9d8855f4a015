#include "trajtopo/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

#include "trajtopo/types.hpp"

namespace trajtopo {

namespace {

double mean_of(std::span<const double> xs) {
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double sample_variance(std::span<const double> xs, double mean) {
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return ss / static_cast<double>(xs.size() - 1);
}

}  // namespace

double student_t_two_sided_p(double t, double df) {
  if (!(df > 0.0) || std::isnan(t)) throw Error("t distribution needs df > 0 and a finite t");
  const double at = std::fabs(t);
  if (at == 0.0) return 1.0;
  if (std::isinf(at)) return 0.0;
  const boost::math::students_t dist(df);
  return std::clamp(2.0 * boost::math::cdf(boost::math::complement(dist, at)), 0.0, 1.0);
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw Error("normal quantile needs 0 < p < 1");
  return boost::math::quantile(boost::math::normal(), p);
}

GroupStats group_stats(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) throw Error("group statistics need at least 2 values per group");
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  const double ma = mean_of(a), mb = mean_of(b);
  const double va = sample_variance(a, ma), vb = sample_variance(b, mb);
  if (va == 0.0 && vb == 0.0) throw Error("group statistics: both groups have zero variance");

  GroupStats s;
  const double pooled = ((na - 1.0) * va + (nb - 1.0) * vb) / (na + nb - 2.0);
  s.cohens_d = (ma - mb) / std::sqrt(pooled);
  const double sa = va / na, sb = vb / nb;
  s.welch_t = (ma - mb) / std::sqrt(sa + sb);
  s.df = (sa + sb) * (sa + sb) / (sa * sa / (na - 1.0) + sb * sb / (nb - 1.0));
  s.p_two_sided = student_t_two_sided_p(s.welch_t, s.df);
  return s;
}

Correlation pearson_r_ci(std::span<const double> x, std::span<const double> y, double confidence) {
  if (x.size() != y.size()) throw Error("pearson: x and y differ in length");
  if (x.size() < 4) throw Error("pearson: need at least 4 pairs");
  if (!(confidence > 0.0 && confidence < 1.0)) throw Error("confidence must be in (0, 1)");
  const double mx = mean_of(x), my = mean_of(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) throw Error("pearson: zero variance");
  Correlation c;
  c.r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  if (std::fabs(c.r) == 1.0) {
    c.ci_low = c.ci_high = c.r;
    return c;
  }
  const double z = std::atanh(c.r);
  const double half = normal_quantile(0.5 + 0.5 * confidence) / std::sqrt(static_cast<double>(x.size()) - 3.0);
  c.ci_low = std::tanh(z - half);
  c.ci_high = std::tanh(z + half);
  return c;
}

OddsRatio odds_ratio(double a, double b, double c, double d, double confidence) {
  if (a < 0 || b < 0 || c < 0 || d < 0) throw Error("odds ratio: negative cell");
  OddsRatio o;
  if (a == 0 || b == 0 || c == 0 || d == 0) {
    a += 0.5, b += 0.5, c += 0.5, d += 0.5;
    o.corrected = true;
  }
  o.odds_ratio = (a * d) / (b * c);
  const double se = std::sqrt(1 / a + 1 / b + 1 / c + 1 / d);
  const double z = normal_quantile(0.5 + 0.5 * confidence);
  o.ci_low = std::exp(std::log(o.odds_ratio) - z * se);
  o.ci_high = std::exp(std::log(o.odds_ratio) + z * se);
  return o;
}

OddsRatio quartile_odds_ratio(std::span<const double> values, const std::vector<bool>& improved,
                              double confidence) {
  if (values.size() != improved.size()) throw Error("odds ratio: values and labels differ in length");
  if (values.size() < 8) throw Error("odds ratio: need at least 8 rows");
  if (std::none_of(improved.begin(), improved.end(), [](bool v) { return v; }) ||
      std::all_of(improved.begin(), improved.end(), [](bool v) { return v; }))
    throw Error("odds ratio: both classes must be present");

  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double h = 0.75 * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double q3 = sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);

  double a = 0, b = 0, c = 0, d = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const bool top = values[i] >= q3;
    if (top && improved[i]) ++a;
    else if (top) ++b;
    else if (improved[i]) ++c;
    else ++d;
  }
  return odds_ratio(a, b, c, d, confidence);
}

}  // namespace trajtopo
