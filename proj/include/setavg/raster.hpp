#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace setavg {

// Placement of a uniform grid in the plane. A height of 1 encodes a 1D set.
struct Geometry {
  int width = 1;
  int height = 1;
  double cell_size = 1.0;
  // Real coordinates of the center of cell (0,0).
  double origin_x = 0.0;
  double origin_y = 0.0;

  bool is_1d() const { return height == 1; }
  std::size_t cell_count() const {
    return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  }
  // cell_size^n, the measure of one cell.
  double cell_area() const { return is_1d() ? cell_size : cell_size * cell_size; }
  double center_x(int x) const { return origin_x + x * cell_size; }
  double center_y(int y) const { return origin_y + y * cell_size; }

  friend bool operator==(const Geometry&, const Geometry&) = default;
};

enum class Connectivity {
  Orthogonal,          // 4-neighbour in 2D, 2-neighbour in 1D
  OrthogonalDiagonal,  // 8-neighbour in 2D, 2-neighbour in 1D
};

// Binary occupancy grid. A cell is in the set iff its center belongs to it.
// Cells are addressed by the row-major index y * width + x.
class Raster {
 public:
  Raster() = default;
  explicit Raster(const Geometry& geometry, bool fill = false);
  Raster(const Geometry& geometry, std::vector<std::uint8_t> bits);

  const Geometry& geometry() const { return geometry_; }
  int width() const { return geometry_.width; }
  int height() const { return geometry_.height; }
  double cell_size() const { return geometry_.cell_size; }
  double cell_area() const { return geometry_.cell_area(); }
  std::size_t size() const { return bits_.size(); }

  bool get(int x, int y) const { return bits_[index(x, y)] != 0; }
  void set(int x, int y, bool value) { bits_[index(x, y)] = value ? 1 : 0; }
  bool at(std::size_t i) const { return bits_[i] != 0; }
  void set_at(std::size_t i, bool value) { bits_[i] = value ? 1 : 0; }
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(geometry_.width) +
           static_cast<std::size_t>(x);
  }

  std::span<const std::uint8_t> bits() const { return bits_; }

  std::size_t count() const;
  bool empty() const { return count() == 0; }
  bool on_border(std::size_t i) const;

  friend bool operator==(const Raster& a, const Raster& b) {
    return a.geometry_ == b.geometry_ && a.bits_ == b.bits_;
  }

 private:
  Geometry geometry_;
  std::vector<std::uint8_t> bits_;
};

// Throws GridMismatchError unless the two rasters share their geometry.
void require_combinable(const Raster& a, const Raster& b);

double measure(const Raster& a);
double symdiff_distance(const Raster& a, const Raster& b);

Raster set_union(const Raster& a, const Raster& b);
Raster set_intersect(const Raster& a, const Raster& b);
Raster set_difference(const Raster& a, const Raster& b);
Raster set_xor(const Raster& a, const Raster& b);
Raster complement(const Raster& a);

// True iff every cell of `inner` is a cell of `outer`.
bool is_subset(const Raster& inner, const Raster& outer);

// Connected components ordered by their smallest cell index.
std::vector<Raster> connected_components(const Raster& s, Connectivity c);
std::size_t count_components(const Raster& s, Connectivity c);

// Cells whose center lies within Euclidean distance r (length units) of a
// cell center of b.
Raster offset(const Raster& b, double r);

// Embeds the set in a grid enlarged by `margin` cells on every side (along x
// only for 1D rasters). The origin moves so real coordinates are unchanged.
Raster pad(const Raster& a, int margin);

// Sub-grid starting at cell (x0, y0).
Raster crop(const Raster& a, int x0, int y0, int width, int height);

struct BoundingBox {
  int x0 = 0, y0 = 0, width = 0, height = 0;
  bool empty() const { return width == 0 || height == 0; }
};
BoundingBox content_bounds(const Raster& a);
Raster crop_to_content(const Raster& a);

// Re-samples `a` onto `target` when both grids are translates of each other
// by whole cells. Throws ClippingError if a set cell would fall outside
// `target` and GridMismatchError if the grids are not cell-aligned.
Raster crop_to_geometry(const Raster& a, const Geometry& target);

// Embeds both rasters into their common bounding grid. Grids must share the
// cell size and be offset by whole cells.
std::pair<Raster, Raster> align(const Raster& a, const Raster& b);

}  // namespace setavg
