#pragma once
// Fixtures and comparison helpers shared by the unit and acceptance tests.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "trajtopo/homology.hpp"

namespace trajtopo::testing {

using Matrix3 = std::array<std::array<double, 3>, 3>;

inline std::vector<Point3> random_cloud(std::mt19937_64& rng, std::size_t n, double scale = 1.0) {
  std::uniform_real_distribution<double> u(0.0, scale);
  std::vector<Point3> pts(n);
  for (auto& p : pts) p = {u(rng), u(rng), u(rng)};
  return pts;
}

inline Matrix3 rotation(double a, double b, double c) {
  const Matrix3 rz{{{std::cos(a), -std::sin(a), 0}, {std::sin(a), std::cos(a), 0}, {0, 0, 1}}};
  const Matrix3 ry{{{std::cos(b), 0, std::sin(b)}, {0, 1, 0}, {-std::sin(b), 0, std::cos(b)}}};
  const Matrix3 rx{{{1, 0, 0}, {0, std::cos(c), -std::sin(c)}, {0, std::sin(c), std::cos(c)}}};
  auto mul = [](const Matrix3& p, const Matrix3& q) {
    Matrix3 r{};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) r[i][j] += p[i][k] * q[k][j];
    return r;
  };
  return mul(rz, mul(ry, rx));
}

inline Matrix3 random_rotation(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> a(0.0, 2.0 * M_PI);
  return rotation(a(rng), a(rng), a(rng));
}

inline std::vector<Point3> transformed(const std::vector<Point3>& pts, const Matrix3& r,
                                       const Point3& shift, double scale = 1.0) {
  std::vector<Point3> out;
  for (const auto& p : pts) {
    Point3 q{};
    for (int i = 0; i < 3; ++i) q[i] = scale * (r[i][0] * p[0] + r[i][1] * p[1] + r[i][2] * p[2]) + shift[i];
    out.push_back(q);
  }
  return out;
}

inline double endpoint_gap(const Interval& a, const Interval& b) {
  const double db = std::abs(a.birth - b.birth);
  if (std::isinf(a.death) || std::isinf(b.death))
    return (std::isinf(a.death) && std::isinf(b.death)) ? db : kInfinity;
  return std::max(db, std::abs(a.death - b.death));
}

// Greedy matching within each dimension, longest bars first. Bars of a that
// find no partner within `tol` and bars of b left over must both be short
// enough (persistence <= 2 * diagonal_tol) to be matched to the diagonal.
inline bool diagrams_close(const PersistenceDiagram& a, const PersistenceDiagram& b, double tol,
                           double diagonal_tol = 0.0) {
  for (int dim = 0; dim <= 2; ++dim) {
    auto xs = a.of_dim(dim);
    auto ys = b.of_dim(dim);
    std::sort(xs.begin(), xs.end(),
              [](const Interval& p, const Interval& q) { return p.persistence() > q.persistence(); });
    std::vector<bool> used(ys.size(), false);
    for (const auto& x : xs) {
      std::size_t best = ys.size();
      double best_gap = kInfinity;
      for (std::size_t j = 0; j < ys.size(); ++j) {
        if (used[j]) continue;
        const double g = endpoint_gap(x, ys[j]);
        if (g < best_gap) best_gap = g, best = j;
      }
      if (best < ys.size() && best_gap <= tol) {
        used[best] = true;
      } else if (x.persistence() > 2.0 * diagonal_tol) {
        return false;
      }
    }
    for (std::size_t j = 0; j < ys.size(); ++j)
      if (!used[j] && ys[j].persistence() > 2.0 * diagonal_tol) return false;
  }
  return true;
}

// Exact multiset comparison after canonical ordering, values to `tol`.
inline bool diagrams_equal(PersistenceDiagram a, PersistenceDiagram b, double tol = 1e-12) {
  a.canonicalize();
  b.canonicalize();
  if (a.intervals.size() != b.intervals.size()) return false;
  for (std::size_t i = 0; i < a.intervals.size(); ++i) {
    const auto& x = a.intervals[i];
    const auto& y = b.intervals[i];
    if (x.dim != y.dim || endpoint_gap(x, y) > tol) return false;
  }
  return true;
}

inline PersistenceDiagram full_diagram(const std::vector<Point3>& pts, int max_dim = 2) {
  return persistence(vietoris_rips(distance_matrix(pts), max_dim, kInfinity));
}

inline std::vector<Point3> unit_square() { return {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}}; }

inline std::vector<Point3> octahedron() {
  return {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
}

inline std::vector<Point3> circle(std::size_t n, double radius = 1.0) {
  std::vector<Point3> pts;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = 2.0 * M_PI * static_cast<double>(i) / static_cast<double>(n);
    pts.push_back({radius * std::cos(a), radius * std::sin(a), 0.0});
  }
  return pts;
}

}  // namespace trajtopo::testing
