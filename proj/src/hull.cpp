// Incremental 3D convex hull, used only for its volume.
//
// Coordinates are first rescaled per axis onto [0, 1]: the hull/box volume
// ratio is invariant under that map, and a fixed orientation tolerance is
// meaningful on the unit box.

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

#include "trajtopo/features.hpp"

namespace trajtopo {

namespace {

constexpr double kOrientEps = 1e-10;

struct Vec {
  double x, y, z;
};

Vec sub(const Vec& a, const Vec& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
Vec cross(const Vec& a, const Vec& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
double dot(const Vec& a, const Vec& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

// det(b - a, c - a, p - a): positive when p lies on the outer side of (a, b, c).
double orient(const Vec& a, const Vec& b, const Vec& c, const Vec& p) {
  return dot(cross(sub(b, a), sub(c, a)), sub(p, a));
}

struct Face {
  int v[3];
};

struct Box {
  Point3 lo{}, hi{};
  double extent(int axis) const { return hi[axis] - lo[axis]; }
};

Box bounding_box(std::span<const Point3> points) {
  Box b{points[0], points[0]};
  for (const auto& p : points)
    for (int a = 0; a < 3; ++a) {
      b.lo[a] = std::min(b.lo[a], p[a]);
      b.hi[a] = std::max(b.hi[a], p[a]);
    }
  return b;
}

void check_finite(std::span<const Point3> points) {
  if (points.empty()) throw Error("convex hull of an empty point set");
  for (const auto& p : points)
    for (double c : p)
      if (!std::isfinite(c)) throw Error("convex hull: non-finite coordinate");
}

// Hull volume of points already mapped into the unit box. Returns 0 when no
// four points span a tetrahedron above tolerance.
double unit_hull_volume(const std::vector<Vec>& pts) {
  const int n = static_cast<int>(pts.size());
  if (n < 4) return 0.0;

  // Initial tetrahedron: extreme point pair, then farthest from the line,
  // then farthest from the plane.
  int i0 = 0, i1 = 0;
  for (int i = 1; i < n; ++i)
    if (pts[i].x < pts[i0].x) i0 = i;
  double best = -1.0;
  for (int i = 0; i < n; ++i) {
    const double d = norm(sub(pts[i], pts[i0]));
    if (d > best) best = d, i1 = i;
  }
  if (best <= kOrientEps) return 0.0;
  int i2 = -1;
  best = kOrientEps;
  for (int i = 0; i < n; ++i) {
    const double a = norm(cross(sub(pts[i1], pts[i0]), sub(pts[i], pts[i0])));
    if (a > best) best = a, i2 = i;
  }
  if (i2 < 0) return 0.0;
  int i3 = -1;
  best = kOrientEps;
  for (int i = 0; i < n; ++i) {
    const double v = std::fabs(orient(pts[i0], pts[i1], pts[i2], pts[i]));
    if (v > best) best = v, i3 = i;
  }
  if (i3 < 0) return 0.0;

  std::vector<Face> faces;
  auto add_face = [&](int a, int b, int c, int inside) {
    if (orient(pts[a], pts[b], pts[c], pts[inside]) > 0) std::swap(b, c);
    faces.push_back({{a, b, c}});
  };
  add_face(i0, i1, i2, i3);
  add_face(i0, i1, i3, i2);
  add_face(i0, i2, i3, i1);
  add_face(i1, i2, i3, i0);

  std::vector<char> visible;
  std::set<std::pair<int, int>> edges;
  for (int p = 0; p < n; ++p) {
    if (p == i0 || p == i1 || p == i2 || p == i3) continue;
    visible.assign(faces.size(), 0);
    bool any = false;
    for (std::size_t f = 0; f < faces.size(); ++f) {
      const Face& fc = faces[f];
      if (orient(pts[fc.v[0]], pts[fc.v[1]], pts[fc.v[2]], pts[p]) > kOrientEps)
        visible[f] = 1, any = true;
    }
    if (!any) continue;

    edges.clear();
    for (std::size_t f = 0; f < faces.size(); ++f)
      if (visible[f])
        for (int e = 0; e < 3; ++e) edges.insert({faces[f].v[e], faces[f].v[(e + 1) % 3]});

    std::vector<Face> next;
    next.reserve(faces.size() + 8);
    for (std::size_t f = 0; f < faces.size(); ++f)
      if (!visible[f]) next.push_back(faces[f]);
    // Horizon edges keep the orientation they had in the visible face.
    for (const auto& [a, b] : edges)
      if (!edges.count({b, a})) next.push_back({{a, b, p}});
    faces.swap(next);
  }

  const Vec& ref = pts[i0];
  double six_volume = 0.0;
  for (const auto& f : faces) {
    const Vec a = sub(pts[f.v[0]], ref), b = sub(pts[f.v[1]], ref), c = sub(pts[f.v[2]], ref);
    six_volume += dot(a, cross(b, c));
  }
  return std::max(0.0, six_volume) / 6.0;
}

std::vector<Vec> to_unit_box(std::span<const Point3> points, const Box& box) {
  std::vector<Vec> out;
  out.reserve(points.size());
  for (const auto& p : points)
    out.push_back({(p[0] - box.lo[0]) / box.extent(0), (p[1] - box.lo[1]) / box.extent(1),
                   (p[2] - box.lo[2]) / box.extent(2)});
  return out;
}

}  // namespace

double convex_hull_volume(std::span<const Point3> points) {
  check_finite(points);
  const Box box = bounding_box(points);
  const double box_volume = box.extent(0) * box.extent(1) * box.extent(2);
  if (box_volume == 0.0) return 0.0;
  return unit_hull_volume(to_unit_box(points, box)) * box_volume;
}

FlareIndex flare_index(std::span<const Point3> points) {
  check_finite(points);
  const Box box = bounding_box(points);
  if (box.extent(0) * box.extent(1) * box.extent(2) == 0.0) return {0.0, true};
  const double ratio = unit_hull_volume(to_unit_box(points, box));
  if (ratio == 0.0) return {0.0, true};
  return {std::min(ratio, 1.0), false};
}

}  // namespace trajtopo
