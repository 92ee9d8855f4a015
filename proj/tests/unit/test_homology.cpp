#include <gtest/gtest.h>

#include <sstream>

#include "support.hpp"
#include "trajtopo/homology.hpp"

using namespace trajtopo;
using namespace trajtopo::testing;

TEST(DistanceMatrix, SquareSidesAndDiagonals) {
  const auto dm = distance_matrix(unit_square());
  EXPECT_EQ(dm(0, 1), 1.0);
  EXPECT_EQ(dm(1, 2), 1.0);
  EXPECT_DOUBLE_EQ(dm(0, 2), std::sqrt(2.0));
  EXPECT_DOUBLE_EQ(dm(1, 3), std::sqrt(2.0));
  EXPECT_EQ(dm(2, 2), 0.0);
}

TEST(DistanceMatrix, SinglePoint) {
  const std::vector<Point3> one{{3, 4, 5}};
  const auto dm = distance_matrix(one);
  ASSERT_EQ(dm.size(), 1u);
  EXPECT_EQ(dm(0, 0), 0.0);
}

TEST(DistanceMatrix, MatchesPerPairComputation) {
  std::mt19937_64 rng(11);
  const auto pts = random_cloud(rng, 10, 5.0);
  const auto dm = distance_matrix(pts);
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = 0; j < pts.size(); ++j) {
      double s = 0;
      for (int c = 0; c < 3; ++c) s += (pts[i][c] - pts[j][c]) * (pts[i][c] - pts[j][c]);
      EXPECT_NEAR(dm(i, j), std::sqrt(s), 1e-12);
      EXPECT_EQ(dm(i, j), dm(j, i));
    }
}

TEST(DistanceMatrix, RejectsNonFinite) {
  const std::vector<Point3> pts{{0, 0, 0}, {NAN, 0, 0}};
  EXPECT_THROW(distance_matrix(pts), Error);
}

TEST(VietorisRips, EquilateralTriangle) {
  DistanceMatrix dm(3);
  dm.set(0, 1, 1.0);
  dm.set(1, 2, 1.0);
  dm.set(0, 2, 1.0);
  const auto f = vietoris_rips(dm, 1, 2.0);
  ASSERT_EQ(f.simplices.size(), 7u);
  std::array<int, 3> by_dim{};
  for (const auto& s : f.simplices) {
    ++by_dim[s.dim()];
    EXPECT_EQ(s.value, s.dim() == 0 ? 0.0 : 1.0);
  }
  EXPECT_EQ(by_dim, (std::array<int, 3>{3, 3, 1}));
}

TEST(VietorisRips, ThresholdCut) {
  DistanceMatrix dm(2);
  dm.set(0, 1, 5.0);
  const auto f = vietoris_rips(dm, 1, 1.0);
  ASSERT_EQ(f.simplices.size(), 2u);
  EXPECT_EQ(f.simplices[0].dim(), 0);
  EXPECT_EQ(f.simplices[1].dim(), 0);
}

TEST(VietorisRips, SquareBinomialCount) {
  const auto f = vietoris_rips(distance_matrix(unit_square()), 2, kInfinity);
  EXPECT_EQ(f.simplices.size(), 15u);
}

TEST(VietorisRips, OrderedByValueDimensionThenVertices) {
  std::mt19937_64 rng(5);
  const auto f = vietoris_rips(distance_matrix(random_cloud(rng, 7)), 2, kInfinity);
  for (std::size_t i = 1; i < f.simplices.size(); ++i) {
    const auto& a = f.simplices[i - 1];
    const auto& b = f.simplices[i];
    ASSERT_LE(a.value, b.value);
    if (a.value == b.value) {
      ASSERT_LE(a.dim(), b.dim());
      if (a.dim() == b.dim())
        ASSERT_TRUE(std::lexicographical_compare(a.verts().begin(), a.verts().end(), b.verts().begin(),
                                                 b.verts().end()));
    }
  }
}

TEST(VietorisRips, RejectsDimensionAboveTwo) {
  EXPECT_THROW(vietoris_rips(distance_matrix(unit_square()), 3, kInfinity), Error);
}

TEST(Persistence, UnitSquare) {
  const auto d = full_diagram(unit_square());
  const auto h1 = d.of_dim(1);
  ASSERT_EQ(h1.size(), 1u);
  EXPECT_EQ(h1[0].birth, 1.0);
  EXPECT_NEAR(h1[0].death, std::sqrt(2.0), 1e-15);
  const auto h0 = d.of_dim(0);
  ASSERT_EQ(h0.size(), 4u);
  int infinite = 0;
  for (const auto& iv : h0) {
    EXPECT_EQ(iv.birth, 0.0);
    if (std::isinf(iv.death))
      ++infinite;
    else
      EXPECT_EQ(iv.death, 1.0);
  }
  EXPECT_EQ(infinite, 1);
  EXPECT_TRUE(d.of_dim(2).empty());
}

TEST(Persistence, TwentyPointCircle) {
  const auto d = full_diagram(circle(20), 1);
  const auto h1 = d.of_dim(1);
  ASSERT_EQ(h1.size(), 1u);
  EXPECT_NEAR(h1[0].birth, 2.0 * std::sin(M_PI / 20.0), 1e-9);
  EXPECT_GT(h1[0].persistence(), 1.0);
}

TEST(Persistence, OctahedronVoid) {
  const auto h2 = full_diagram(octahedron()).of_dim(2);
  ASSERT_EQ(h2.size(), 1u);
  EXPECT_NEAR(h2[0].birth, std::sqrt(2.0), 1e-9);
  EXPECT_NEAR(h2[0].death, 2.0, 1e-9);
}

TEST(Persistence, SinglePointAndPair) {
  const std::vector<Point3> one{{1, 2, 3}};
  auto d = full_diagram(one);
  ASSERT_EQ(d.intervals.size(), 1u);
  EXPECT_TRUE(std::isinf(d.intervals[0].death));

  const std::vector<Point3> two{{0, 0, 0}, {0, 3, 4}};
  d = persistence_bruteforce(vietoris_rips(distance_matrix(two), 2, kInfinity));
  d.canonicalize();
  ASSERT_EQ(d.intervals.size(), 2u);
  EXPECT_EQ(d.intervals[0], (Interval{0.0, 5.0, 0}));
  EXPECT_EQ(d.intervals[1], (Interval{0.0, kInfinity, 0}));
}

TEST(Persistence, OracleMatchesOnSquare) {
  const auto f = vietoris_rips(distance_matrix(unit_square()), 2, kInfinity);
  EXPECT_TRUE(diagrams_equal(persistence(f), persistence_bruteforce(f), 0.0));
}

TEST(Persistence, OracleRejectsLargeInput) {
  std::mt19937_64 rng(1);
  const auto f = vietoris_rips(distance_matrix(random_cloud(rng, 9)), 1, kInfinity);
  EXPECT_THROW(persistence_bruteforce(f), Error);
}

TEST(Persistence, TwistMatchesStandardReduction) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = vietoris_rips(distance_matrix(random_cloud(rng, 12)), 2, kInfinity);
    EXPECT_TRUE(diagrams_equal(persistence(f, Reduction::kTwist), persistence(f, Reduction::kStandard), 0.0));
  }
}

TEST(Persistence, OracleOnRandomCloudsWithCap) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const auto pts = random_cloud(rng, 6);
    const auto f = vietoris_rips(distance_matrix(pts), 2, 0.5);
    EXPECT_TRUE(diagrams_equal(persistence(f), persistence_bruteforce(f)));
  }
}

TEST(Persistence, ExactlyOneInfiniteComponent) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 5; ++trial) {
    const auto pts = random_cloud(rng, 15);
    const auto d = compute_diagram(pts, {});
    int infinite = 0;
    for (const auto& iv : d.of_dim(0)) infinite += std::isinf(iv.death);
    EXPECT_EQ(infinite, 1);
    for (const auto& iv : d.intervals) EXPECT_LT(iv.birth, iv.death);
  }
}

TEST(EnclosingRadius, SquareIsDiagonal) {
  EXPECT_DOUBLE_EQ(enclosing_radius(distance_matrix(unit_square())), std::sqrt(2.0));
}

TEST(ComputeDiagram, DefaultCapMatchesUncappedFiniteBars) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 5; ++trial) {
    const auto pts = random_cloud(rng, 14);
    EXPECT_TRUE(diagrams_equal(compute_diagram(pts, {}), full_diagram(pts)));
  }
}

TEST(Invariance, IsometryScaleDuplicate) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 5; ++trial) {
    const auto pts = random_cloud(rng, 10);
    const auto base = full_diagram(pts);

    const auto moved = transformed(pts, random_rotation(rng), {3.0, -2.0, 7.5});
    EXPECT_TRUE(diagrams_close(base, full_diagram(moved), 1e-9));

    const double s = 2.5;
    PersistenceDiagram scaled = base;
    for (auto& iv : scaled.intervals) iv.birth *= s, iv.death *= s;
    EXPECT_TRUE(diagrams_close(scaled, full_diagram(transformed(pts, rotation(0, 0, 0), {0, 0, 0}, s)), 1e-9 * s));

    auto dup = pts;
    dup.push_back(pts[trial]);
    EXPECT_TRUE(diagrams_equal(base, full_diagram(dup), 0.0));
  }
}

TEST(BettiCurve, SquareDimOne) {
  const auto d = full_diagram(unit_square());
  const std::vector<double> grid{0.5, 1.2, 1.5};
  const auto c = betti_curve(d, 1, grid);
  EXPECT_EQ(c.counts, (std::vector<std::size_t>{0, 1, 0}));
  EXPECT_EQ(betti_curve(d, 1, std::vector<double>{1.0}).counts[0], 1u);  // birth inclusive
  EXPECT_EQ(betti_curve(d, 1, std::vector<double>{std::sqrt(2.0)}).counts[0], 0u);  // death exclusive
}

TEST(BettiCurve, EmptyDimensionIsZero) {
  const auto d = full_diagram(unit_square());
  const auto c = betti_curve(d, 2, default_grid(d, 10));
  EXPECT_EQ(c.counts, std::vector<std::size_t>(10, 0));
}

TEST(BettiCurve, CircleConnectsAboveSpacing) {
  const auto d = full_diagram(circle(20), 1);
  const double eps = 2.0 * std::sin(M_PI / 20.0) + 1e-9;
  EXPECT_EQ(betti_curve(d, 0, std::vector<double>{eps}).counts[0], 1u);
}

TEST(BettiCurve, RejectsUnsortedGrid) {
  EXPECT_THROW(betti_curve({}, 0, std::vector<double>{1.0, 0.5}), Error);
}

TEST(SlidingWindow, Starts) {
  EXPECT_EQ(window_starts(10, 5, 5), (std::vector<std::size_t>{0, 5}));
  EXPECT_EQ(window_starts(10, 5, 2), (std::vector<std::size_t>{0, 2, 4, 5}));
  EXPECT_EQ(window_starts(10, 10, 3), (std::vector<std::size_t>{0}));
  EXPECT_THROW(window_starts(4, 5, 1), Error);
  EXPECT_THROW(window_starts(10, 3, 1), Error);
  EXPECT_THROW(window_starts(10, 5, 0), Error);
}

TEST(SlidingWindow, ConstantTrajectory) {
  ReducedTrajectory r;
  r.points.assign(12, Point3{1, 1, 1});
  r.timestamps_days.assign(12, 0.0);
  const auto ws = sliding_window_diagrams(r, 5, 3);
  ASSERT_EQ(ws.size(), 4u);
  for (const auto& w : ws) {
    ASSERT_EQ(w.diagram.intervals.size(), 1u);
    EXPECT_TRUE(std::isinf(w.diagram.intervals[0].death));
  }
  EXPECT_EQ(ws.back().start, 7u);
}

TEST(DiagramFile, RoundTripAndFormat) {
  const auto d = full_diagram(unit_square());
  std::stringstream ss;
  write_diagram(ss, d);
  EXPECT_NE(ss.str().find("1 1.0 1.4142135623730951\n"), std::string::npos);
  EXPECT_NE(ss.str().find("0 0.0 inf\n"), std::string::npos);
  EXPECT_TRUE(diagrams_equal(read_diagram(ss), d, 0.0));
}

TEST(DiagramFile, RejectsMalformed) {
  std::istringstream bad("1 0.5\n");
  EXPECT_THROW(read_diagram(bad), Error);
  std::istringstream inverted("1 2.0 1.0\n");
  EXPECT_THROW(read_diagram(inverted), Error);
}

TEST(BettiFile, RoundTrip) {
  const auto d = full_diagram(circle(12), 1);
  const auto c = betti_curve(d, 1, default_grid(d, 16));
  std::stringstream ss;
  write_betti_curve(ss, c);
  const auto back = read_betti_curve(ss);
  EXPECT_EQ(back.dim, 1);
  EXPECT_EQ(back.grid, c.grid);
  EXPECT_EQ(back.counts, c.counts);
}

TEST(PointFile, ParsesCommentsAndRejectsShortRows) {
  std::istringstream in("# square\n0 0 0\n1 0 0 # corner\n\n");
  EXPECT_EQ(read_points(in).size(), 2u);
  std::istringstream bad("0 0\n");
  EXPECT_THROW(read_points(bad), Error);
}
