#include <gtest/gtest.h>

#include <sstream>

#include "support.hpp"
#include "trajtopo/io.hpp"
#include "trajtopo/svg_plot.hpp"

using namespace trajtopo;

namespace {

std::size_t count(const std::string& haystack, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = haystack.find(needle); pos != std::string::npos; pos = haystack.find(needle, pos + 1)) ++n;
  return n;
}

}  // namespace

TEST(FormatReal, ShortestRoundTrip) {
  EXPECT_EQ(format_real(1.0), "1.0");
  EXPECT_EQ(format_real(0.0), "0.0");
  EXPECT_EQ(format_real(std::sqrt(2.0)), "1.4142135623730951");
  EXPECT_EQ(format_real(0.1), "0.1");
  EXPECT_EQ(format_real(kInfinity), "inf");
  EXPECT_EQ(format_real(-kInfinity), "-inf");
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double v = u(rng) * std::pow(10.0, static_cast<double>(i % 40) - 20.0);
    EXPECT_EQ(parse_real(format_real(v)), v);
  }
}

TEST(ParseReal, RejectsGarbage) {
  EXPECT_EQ(parse_real("inf"), kInfinity);
  EXPECT_EQ(parse_real("-2.5e3"), -2500.0);
  EXPECT_THROW(parse_real("1.0x"), Error);
  EXPECT_THROW(parse_real(""), Error);
}

TEST(Split, Fields) {
  EXPECT_EQ(split("a,,b", ','), (std::vector<std::string>{"a", "", "b"}));
  EXPECT_EQ(split_ws("  1 \t 2\n"), (std::vector<std::string>{"1", "2"}));
}

TEST(DiagramSvg, GlyphPerDimensionAndDiagonal) {
  auto d = trajtopo::testing::full_diagram(trajtopo::testing::octahedron());
  d.intervals.push_back({0.2, 0.9, 1});
  const auto svg = render_diagram_svg(d, "oct & co");
  EXPECT_EQ(svg.rfind("<?xml", 0), 0u);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
  EXPECT_NE(svg.find("id=\"diagonal\""), std::string::npos);
  EXPECT_NE(svg.find("id=\"infinity\""), std::string::npos);
  EXPECT_NE(svg.find("oct &amp; co"), std::string::npos);
  // One glyph per interval plus one legend glyph per dimension.
  EXPECT_EQ(count(svg, "class=\"h0\""), d.of_dim(0).size() + 1);
  EXPECT_EQ(count(svg, "class=\"h1\""), d.of_dim(1).size() + 1);
  EXPECT_EQ(count(svg, "class=\"h2\""), d.of_dim(2).size() + 1);
  EXPECT_EQ(svg, render_diagram_svg(d, "oct & co"));
}

TEST(DiagramSvg, EmptyDiagramHasOnlyDiagonal) {
  const auto svg = render_diagram_svg({});
  EXPECT_NE(svg.find("id=\"diagonal\""), std::string::npos);
  EXPECT_EQ(svg.find("id=\"infinity\""), std::string::npos);
  EXPECT_EQ(count(svg, "class=\"h0\""), 1u);  // legend only
  EXPECT_EQ(count(svg, "class=\"h1\""), 1u);
}

TEST(BettiSvg, StepCurve) {
  const auto d = trajtopo::testing::full_diagram(trajtopo::testing::unit_square());
  const std::vector<double> grid{0.0, 0.5, 1.0, 1.5};
  const auto svg = render_betti_svg(betti_curve(d, 0, grid));
  EXPECT_NE(svg.find("<polyline id=\"curve\""), std::string::npos);
  EXPECT_NE(svg.find("Betti 0"), std::string::npos);
}
