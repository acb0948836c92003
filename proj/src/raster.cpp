#include "setavg/raster.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "setavg/distance.hpp"
#include "setavg/error.hpp"

namespace setavg {

namespace {

void validate(const Geometry& g) {
  if (g.width < 1 || g.height < 1) {
    throw InvalidArgumentError("raster dimensions must be positive");
  }
  if (!(g.cell_size > 0.0) || !std::isfinite(g.cell_size)) {
    throw InvalidArgumentError("cell size must be positive and finite");
  }
}

template <typename Op>
Raster cellwise(const Raster& a, const Raster& b, Op op) {
  require_combinable(a, b);
  std::vector<std::uint8_t> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = op(a.at(i), b.at(i)) ? 1 : 0;
  return Raster(a.geometry(), std::move(out));
}

// Offset in whole cells between two grid origins; throws unless aligned.
int cell_offset(double from, double to, double cell_size) {
  const double steps = (to - from) / cell_size;
  const double rounded = std::round(steps);
  if (std::abs(steps - rounded) > 1e-6) {
    throw GridMismatchError("grids are not offset by whole cells");
  }
  return static_cast<int>(rounded);
}

}  // namespace

Raster::Raster(const Geometry& geometry, bool fill) : geometry_(geometry) {
  validate(geometry_);
  bits_.assign(geometry_.cell_count(), fill ? 1 : 0);
}

Raster::Raster(const Geometry& geometry, std::vector<std::uint8_t> bits)
    : geometry_(geometry), bits_(std::move(bits)) {
  validate(geometry_);
  if (bits_.size() != geometry_.cell_count()) {
    throw InvalidArgumentError("bit vector does not match raster dimensions");
  }
  for (auto& b : bits_) b = b ? 1 : 0;
}

std::size_t Raster::count() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

bool Raster::on_border(std::size_t i) const {
  const int x = static_cast<int>(i % static_cast<std::size_t>(geometry_.width));
  const int y = static_cast<int>(i / static_cast<std::size_t>(geometry_.width));
  if (x == 0 || x == geometry_.width - 1) return true;
  if (geometry_.is_1d()) return false;
  return y == 0 || y == geometry_.height - 1;
}

void require_combinable(const Raster& a, const Raster& b) {
  if (!(a.geometry() == b.geometry())) {
    std::ostringstream msg;
    msg << "grid mismatch: " << a.width() << "x" << a.height() << " vs " << b.width() << "x"
        << b.height() << " (align the rasters first)";
    throw GridMismatchError(msg.str());
  }
}

double measure(const Raster& a) { return static_cast<double>(a.count()) * a.cell_area(); }

double symdiff_distance(const Raster& a, const Raster& b) {
  require_combinable(a, b);
  std::size_t n = 0;
  for (std::size_t i = 0; i < a.size(); ++i) n += a.at(i) != b.at(i);
  return static_cast<double>(n) * a.cell_area();
}

Raster set_union(const Raster& a, const Raster& b) {
  return cellwise(a, b, [](bool p, bool q) { return p || q; });
}
Raster set_intersect(const Raster& a, const Raster& b) {
  return cellwise(a, b, [](bool p, bool q) { return p && q; });
}
Raster set_difference(const Raster& a, const Raster& b) {
  return cellwise(a, b, [](bool p, bool q) { return p && !q; });
}
Raster set_xor(const Raster& a, const Raster& b) {
  return cellwise(a, b, [](bool p, bool q) { return p != q; });
}

Raster complement(const Raster& a) {
  Raster out(a.geometry());
  for (std::size_t i = 0; i < a.size(); ++i) out.set_at(i, !a.at(i));
  return out;
}

bool is_subset(const Raster& inner, const Raster& outer) {
  require_combinable(inner, outer);
  for (std::size_t i = 0; i < inner.size(); ++i) {
    if (inner.at(i) && !outer.at(i)) return false;
  }
  return true;
}

namespace {

// Labels components in scan order; returns the label per cell (-1 outside).
std::vector<int> label_components(const Raster& s, Connectivity c, int& n_labels) {
  const int w = s.width();
  const int h = s.height();
  std::vector<int> label(s.size(), -1);
  std::vector<std::size_t> stack;
  const bool diagonal = c == Connectivity::OrthogonalDiagonal && !s.geometry().is_1d();
  n_labels = 0;
  for (std::size_t seed = 0; seed < s.size(); ++seed) {
    if (!s.at(seed) || label[seed] >= 0) continue;
    const int id = n_labels++;
    label[seed] = id;
    stack.push_back(seed);
    while (!stack.empty()) {
      const std::size_t i = stack.back();
      stack.pop_back();
      const int x = static_cast<int>(i % static_cast<std::size_t>(w));
      const int y = static_cast<int>(i / static_cast<std::size_t>(w));
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          if (dx == 0 && dy == 0) continue;
          if (!diagonal && dx != 0 && dy != 0) continue;
          const int nx = x + dx;
          const int ny = y + dy;
          if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
          const std::size_t j = s.index(nx, ny);
          if (s.at(j) && label[j] < 0) {
            label[j] = id;
            stack.push_back(j);
          }
        }
      }
    }
  }
  return label;
}

}  // namespace

std::vector<Raster> connected_components(const Raster& s, Connectivity c) {
  int n = 0;
  const auto label = label_components(s, c, n);
  std::vector<Raster> out(static_cast<std::size_t>(n), Raster(s.geometry()));
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (label[i] >= 0) out[static_cast<std::size_t>(label[i])].set_at(i, true);
  }
  return out;
}

std::size_t count_components(const Raster& s, Connectivity c) {
  int n = 0;
  label_components(s, c, n);
  return static_cast<std::size_t>(n);
}

Raster offset(const Raster& b, double r) {
  if (!(r >= 0.0)) throw InvalidArgumentError("offset radius must be non-negative");
  Raster out(b.geometry());
  if (b.empty()) return out;
  const auto sq = edt_squared(b);
  // Compare in cell units: distance^2 <= (r / cell_size)^2.
  const double rc = r / b.cell_size();
  for (std::size_t i = 0; i < b.size(); ++i) {
    out.set_at(i, std::sqrt(static_cast<double>(sq[i])) <= rc);
  }
  return out;
}

Raster pad(const Raster& a, int margin) {
  if (margin < 0) throw InvalidArgumentError("pad margin must be non-negative");
  if (margin == 0) return a;
  const Geometry& g = a.geometry();
  const int my = g.is_1d() ? 0 : margin;
  Geometry out_g = g;
  out_g.width = g.width + 2 * margin;
  out_g.height = g.height + 2 * my;
  out_g.origin_x = g.origin_x - margin * g.cell_size;
  out_g.origin_y = g.origin_y - my * g.cell_size;
  Raster out(out_g);
  for (int y = 0; y < g.height; ++y) {
    for (int x = 0; x < g.width; ++x) {
      if (a.get(x, y)) out.set(x + margin, y + my, true);
    }
  }
  return out;
}

Raster crop(const Raster& a, int x0, int y0, int width, int height) {
  if (x0 < 0 || y0 < 0 || width < 1 || height < 1 || x0 + width > a.width() ||
      y0 + height > a.height()) {
    throw InvalidArgumentError("crop window outside raster");
  }
  Geometry g = a.geometry();
  g.width = width;
  g.height = height;
  g.origin_x = a.geometry().center_x(x0);
  g.origin_y = a.geometry().center_y(y0);
  Raster out(g);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) out.set(x, y, a.get(x0 + x, y0 + y));
  }
  return out;
}

BoundingBox content_bounds(const Raster& a) {
  int xmin = a.width(), ymin = a.height(), xmax = -1, ymax = -1;
  for (int y = 0; y < a.height(); ++y) {
    for (int x = 0; x < a.width(); ++x) {
      if (!a.get(x, y)) continue;
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  }
  if (xmax < 0) return {};
  return {xmin, ymin, xmax - xmin + 1, ymax - ymin + 1};
}

Raster crop_to_content(const Raster& a) {
  const auto box = content_bounds(a);
  if (box.empty()) throw EmptySetError("cannot crop an empty raster to its content");
  return crop(a, box.x0, box.y0, box.width, box.height);
}

Raster crop_to_geometry(const Raster& a, const Geometry& target) {
  const Geometry& g = a.geometry();
  if (g.cell_size != target.cell_size) throw GridMismatchError("cell sizes differ");
  const int ox = cell_offset(g.origin_x, target.origin_x, g.cell_size);
  const int oy = cell_offset(g.origin_y, target.origin_y, g.cell_size);
  Raster out(target);
  for (int y = 0; y < g.height; ++y) {
    for (int x = 0; x < g.width; ++x) {
      if (!a.get(x, y)) continue;
      const int tx = x - ox;
      const int ty = y - oy;
      if (tx < 0 || ty < 0 || tx >= target.width || ty >= target.height) {
        throw ClippingError("set does not fit the target grid");
      }
      out.set(tx, ty, true);
    }
  }
  return out;
}

std::pair<Raster, Raster> align(const Raster& a, const Raster& b) {
  const Geometry& ga = a.geometry();
  const Geometry& gb = b.geometry();
  if (ga.cell_size != gb.cell_size) throw GridMismatchError("cell sizes differ");
  if (ga.is_1d() != gb.is_1d()) throw GridMismatchError("cannot align 1D and 2D rasters");
  const int bx = cell_offset(ga.origin_x, gb.origin_x, ga.cell_size);
  const int by = cell_offset(ga.origin_y, gb.origin_y, ga.cell_size);
  const int x0 = std::min(0, bx);
  const int y0 = std::min(0, by);
  const int x1 = std::max(ga.width, bx + gb.width);
  const int y1 = std::max(ga.height, by + gb.height);
  Geometry g = ga;
  g.width = x1 - x0;
  g.height = y1 - y0;
  g.origin_x = ga.center_x(x0);
  g.origin_y = ga.center_y(y0);
  Raster oa(g), ob(g);
  for (int y = 0; y < ga.height; ++y)
    for (int x = 0; x < ga.width; ++x)
      if (a.get(x, y)) oa.set(x - x0, y - y0, true);
  for (int y = 0; y < gb.height; ++y)
    for (int x = 0; x < gb.width; ++x)
      if (b.get(x, y)) ob.set(x + bx - x0, y + by - y0, true);
  return {std::move(oa), std::move(ob)};
}

}  // namespace setavg
