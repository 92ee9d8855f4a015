#pragma once
// Vietoris-Rips persistent homology of small 3D point clouds, dimensions 0-2,
// with coefficients in the two-element field.

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "trajtopo/types.hpp"

namespace trajtopo {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(std::size_t n) : n_(n), entries_(n * n, 0.0) {}

  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return entries_[i * n_ + j]; }
  void set(std::size_t i, std::size_t j, double d) {
    entries_[i * n_ + j] = d;
    entries_[j * n_ + i] = d;
  }

 private:
  std::size_t n_ = 0;
  std::vector<double> entries_;
};

/// Euclidean distances; throws on non-finite coordinates.
DistanceMatrix distance_matrix(std::span<const Point3> points);

/// min_i max_j d(i, j). Above this scale the Rips complex is a cone.
double enclosing_radius(const DistanceMatrix& dm);

struct Simplex {
  std::array<std::uint32_t, 4> vertices{};  // ascending, first `size` used
  std::uint8_t size = 0;
  double value = 0.0;

  int dim() const { return static_cast<int>(size) - 1; }
  std::span<const std::uint32_t> verts() const { return {vertices.data(), size}; }
};

/// Simplices sorted by (value, dimension, lexicographic vertices).
struct Filtration {
  std::size_t n_vertices = 0;
  int max_homology_dim = 2;
  std::vector<Simplex> simplices;
};

/// All simplices up to dimension max_homology_dim + 1 whose diameter is at
/// most max_eps.
Filtration vietoris_rips(const DistanceMatrix& dm, int max_homology_dim, double max_eps);

struct Interval {
  double birth = 0.0;
  double death = kInfinity;
  int dim = 0;

  double persistence() const { return death - birth; }
  bool operator==(const Interval&) const = default;
};

struct PersistenceDiagram {
  std::vector<Interval> intervals;

  std::vector<Interval> of_dim(int dim) const;
  /// Sorts by (dim, birth, death); diagrams compare as multisets afterwards.
  void canonicalize();
};

enum class Reduction {
  kTwist,     // decreasing dimension with clearing
  kStandard,  // plain left-to-right column reduction
};

/// Boundary-matrix reduction. Zero-persistence pairs are dropped; classes
/// that never die are reported with death = +inf. Result is canonicalized.
PersistenceDiagram persistence(const Filtration& filtration,
                               Reduction reduction = Reduction::kTwist);

/// Reference computation from ranks of boundary maps on every pair of
/// sublevel sets. Independent of the pairing algorithm; limited to 8 vertices.
PersistenceDiagram persistence_bruteforce(const Filtration& filtration);

inline constexpr std::size_t kBruteforceMaxPoints = 8;

struct HomologyConfig {
  int max_dim = 2;
  /// Filtration cap; unset means the enclosing radius.
  std::optional<double> max_eps;
};

/// distance_matrix + vietoris_rips + persistence.
PersistenceDiagram compute_diagram(std::span<const Point3> points, const HomologyConfig& config);

struct BettiCurve {
  int dim = 0;
  std::vector<double> grid;
  std::vector<std::size_t> counts;
};

/// counts[j] = #intervals of `dim` with birth <= grid[j] < death.
BettiCurve betti_curve(const PersistenceDiagram& diagram, int dim, std::span<const double> grid);

/// Evenly spaced grid over [0, largest finite endpoint].
std::vector<double> default_grid(const PersistenceDiagram& diagram, std::size_t steps);

struct WindowDiagram {
  std::size_t start = 0;
  PersistenceDiagram diagram;
};

/// Start indices 0, stride, 2*stride, ... while the window fits; if the last
/// point is not covered, one extra window is clamped to end at the last point.
std::vector<std::size_t> window_starts(std::size_t length, std::size_t window, std::size_t stride);

std::vector<WindowDiagram> sliding_window_diagrams(const ReducedTrajectory& reduced,
                                                   std::size_t window, std::size_t stride,
                                                   const HomologyConfig& config = {});

/// Diagram text: one `dim birth death` line per interval.
void write_diagram(std::ostream& out, const PersistenceDiagram& diagram);
PersistenceDiagram read_diagram(std::istream& in);

/// Betti curve text: `eps count` per grid point.
void write_betti_curve(std::ostream& out, const BettiCurve& curve);
BettiCurve read_betti_curve(std::istream& in);

/// Whitespace-separated `x y z` rows; `#` starts a comment.
std::vector<Point3> read_points(std::istream& in);

}  // namespace trajtopo
