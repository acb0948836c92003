#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "setavg/raster.hpp"

namespace setavg {

// A real value per grid cell, in length units unless stated otherwise.
struct ScalarField {
  Geometry geometry;
  std::vector<double> values;

  double at(int x, int y) const {
    return values[static_cast<std::size_t>(y) * static_cast<std::size_t>(geometry.width) +
                  static_cast<std::size_t>(x)];
  }
};

inline constexpr std::int64_t kNoSite = std::numeric_limits<std::int64_t>::max();

// Squared Euclidean distance, in cells^2, from every cell center to the
// nearest set cell center. Exact integers; kNoSite everywhere if s is empty.
std::vector<std::int64_t> edt_squared(const Raster& s);

// Euclidean distance transform in length units (+inf if s is empty).
ScalarField edt(const Raster& s);

// Squared distance, in cells^2, from every cell to the nearest non-member
// cell, counting the ring just outside the grid border as non-member.
std::vector<std::int64_t> complement_edt_squared(const Raster& a);

// Signed distance in cell units with the boundary placed midway between set
// and non-set cells: +(d(p, complement) - 1/2) inside, -(d(p, set) - 1/2)
// outside. The region beyond the grid border counts as complement.
std::vector<double> signed_distance_cells(const Raster& a);

// signed_distance_cells scaled to length units. Throws EmptySetError.
ScalarField signed_distance(const Raster& a);

// x * d_S(p, A) + (1 - x) * d_S(p, B) in length units.
ScalarField f_field(const Raster& a, const Raster& b, double x);

// {p : x d_S(p,A) + (1-x) d_S(p,B) >= 0}. Throws ClippingError when the set
// reaches the grid border outside A u B.
Raster distance_average(const Raster& a, const Raster& b, double x);

// Index of the cell maximising the signed distance of a (ties: smallest index).
std::size_t deepest_cell(const Raster& a);

// The empty-set extension {p : x d_S(p,A) + (x-1) |p - q| >= 0} with q the
// deepest cell of a.
Raster distance_average_empty(const Raster& a, double x);

enum class CrossingState : std::uint8_t { Crossing, AlwaysIn, NeverIn };

// Per-cell parameter at which membership in the family x A (+) (1-x) B flips.
// A cell in state Crossing is a member at x iff threshold <= x.
struct CrossingField {
  Geometry geometry;
  std::vector<double> threshold;
  std::vector<CrossingState> state;

  bool member(std::size_t i, double x) const {
    switch (state[i]) {
      case CrossingState::AlwaysIn: return true;
      case CrossingState::NeverIn: return false;
      case CrossingState::Crossing: return threshold[i] <= x;
    }
    return false;
  }
  Raster membership(double x) const;
};

// Requires b ⊆ a, both non-empty. Throws NotNestedError otherwise.
CrossingField crossing_field(const Raster& a, const Raster& b);

// Crossing field of the empty-set extension: x*(p) = |p-q| / (|p-q| + d_S(p,A)).
CrossingField empty_crossing_field(const Raster& a);

// Throws ClippingError if `result` contains a border cell outside a u b.
// Padding, in cells, that keeps distance_average(a, b, x) off the grid
// border: ceil(|x| D) with D the largest cellwise |d(., A) - d(., B)| in
// cells; 0 for x in [0, 1]. Both sets must be non-empty.
int extrapolation_margin(const Raster& a, const Raster& b, double x);

void check_clipping(const Raster& result, const Raster& a, const Raster& b);

}  // namespace setavg
