#pragma once

#include <string>
#include <vector>

#include "setavg/raster.hpp"

namespace setavg {

// Sampling of a set-valued function F(x) at x0, x0 + spacing, ...
struct FixtureParams {
  double x0 = 0.0;
  double spacing = 0.125;
  int count = 9;
  Geometry geometry;
};

// Known names:
//   example11  F(x) = {y : 1 <= y <= 2-|x|} ∪ {y : 3 <= y <= 4-2|x|}, 1D
//   disk       disk of radius 1+x
//   kinked     disk of radius 0.25+3x for x <= 1/2, held at 1.75 beyond
//   constant   unit disk for every x
//   nested     growing ellipse, semi-axes 0.6+0.8x and 0.4+0.4x
std::vector<std::string> fixture_names();

// Default sampling for a fixture; throws InvalidArgumentError on unknown names.
FixtureParams fixture_defaults(const std::string& name);

// Grid used by a fixture at the given resolution (cells along y for
// example11, cells per side otherwise).
Geometry fixture_geometry(const std::string& name, int cells);

// Rasterisation of F(x): a cell is in the set iff its center is.
Raster fixture_slice(const std::string& name, double x, const Geometry& g);

std::vector<Raster> fixture_stack(const std::string& name, const FixtureParams& p);

}  // namespace setavg
