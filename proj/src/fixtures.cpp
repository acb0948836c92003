#include "setavg/fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "setavg/error.hpp"

namespace setavg {

namespace {

void require_known(const std::string& name) {
  for (const auto& n : fixture_names()) {
    if (n == name) return;
  }
  throw InvalidArgumentError("unknown fixture " + name);
}

Geometry square(int cells, double half_extent) {
  Geometry g;
  g.width = cells;
  g.height = cells;
  g.cell_size = 2.0 * half_extent / cells;
  g.origin_x = -half_extent + 0.5 * g.cell_size;
  g.origin_y = g.origin_x;
  return g;
}

Raster rasterize(const Geometry& g, const std::function<bool(double, double)>& inside) {
  Raster out(g);
  for (int y = 0; y < g.height; ++y) {
    for (int x = 0; x < g.width; ++x) out.set(x, y, inside(g.center_x(x), g.center_y(y)));
  }
  return out;
}

}  // namespace

std::vector<std::string> fixture_names() {
  return {"example11", "disk", "kinked", "constant", "nested"};
}

FixtureParams fixture_defaults(const std::string& name) {
  require_known(name);
  FixtureParams p;
  if (name == "example11") {
    p.x0 = -1.5;
    p.spacing = 0.25;
    p.count = 13;
    p.geometry = fixture_geometry(name, 128);
  } else {
    p.x0 = 0.0;
    p.spacing = 0.125;
    p.count = 9;
    p.geometry = fixture_geometry(name, 256);
  }
  return p;
}

Geometry fixture_geometry(const std::string& name, int cells) {
  require_known(name);
  if (cells < 2) throw InvalidArgumentError("fixture grids need at least two cells");
  if (name == "example11") {
    // y in [0.5, 4.5]
    Geometry g;
    g.width = cells;
    g.height = 1;
    g.cell_size = 4.0 / cells;
    g.origin_x = 0.5 + 0.5 * g.cell_size;
    return g;
  }
  if (name == "disk") return square(cells, 2.5);
  return square(cells, 2.0);
}

Raster fixture_slice(const std::string& name, double x, const Geometry& g) {
  require_known(name);
  if (name == "example11") {
    const double ax = std::abs(x);
    return rasterize(g, [ax](double y, double) {
      return (y >= 1.0 && y <= 2.0 - ax) || (y >= 3.0 && y <= 4.0 - 2.0 * ax);
    });
  }
  if (name == "nested") {
    const double a = 0.6 + 0.8 * x;
    const double b = 0.4 + 0.4 * x;
    if (a <= 0.0 || b <= 0.0) return Raster(g);
    return rasterize(g, [a, b](double px, double py) {
      return (px / a) * (px / a) + (py / b) * (py / b) <= 1.0;
    });
  }
  double r2 = 1.0;
  if (name == "disk") {
    const double r = 1.0 + x;
    r2 = r > 0.0 ? r * r : -1.0;
  } else if (name == "kinked") {
    const double r = 0.25 + 3.0 * std::min(x, 0.5);
    r2 = r * r;
  }
  return rasterize(g, [r2](double px, double py) { return px * px + py * py <= r2; });
}

std::vector<Raster> fixture_stack(const std::string& name, const FixtureParams& p) {
  if (p.count < 1) throw InvalidArgumentError("fixture count must be positive");
  std::vector<Raster> out;
  out.reserve(static_cast<std::size_t>(p.count));
  for (int i = 0; i < p.count; ++i) out.push_back(fixture_slice(name, p.x0 + i * p.spacing, p.geometry));
  return out;
}

}  // namespace setavg
