#pragma once
// Minimal SVG rendering of persistence diagrams and Betti curves.

#include <string>

#include "trajtopo/homology.hpp"

namespace trajtopo {

/// Birth on x, death on y, the diagonal, and one glyph per dimension
/// (circle H0, square H1, triangle H2). Infinite deaths sit on a dashed
/// line above the finite range.
std::string render_diagram_svg(const PersistenceDiagram& diagram, const std::string& title = "");

/// Step plot of count against scale.
std::string render_betti_svg(const BettiCurve& curve, const std::string& title = "");

}  // namespace trajtopo
