#include "setavg/distance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "setavg/error.hpp"

namespace setavg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Lower envelope of parabolas (Felzenszwalb & Huttenlocher) over the finite
// entries of f. All finite inputs are integers, so outputs are exact.
void transform_1d(const std::vector<double>& f, std::vector<double>& d, std::vector<int>& v,
                  std::vector<double>& z) {
  const int n = static_cast<int>(f.size());
  int k = -1;
  for (int q = 0; q < n; ++q) {
    if (!std::isfinite(f[q])) continue;
    if (k < 0) {
      k = 0;
      v[0] = q;
      z[0] = -kInf;
      z[1] = kInf;
      continue;
    }
    auto intersect = [&](int p) {
      return ((f[q] + double(q) * q) - (f[p] + double(p) * p)) / (2.0 * q - 2.0 * p);
    };
    double s = intersect(v[k]);
    while (s <= z[k]) {
      --k;
      s = intersect(v[k]);
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = kInf;
  }
  if (k < 0) {
    std::fill(d.begin(), d.end(), kInf);
    return;
  }
  int j = 0;
  for (int q = 0; q < n; ++q) {
    while (z[j + 1] < q) ++j;
    const double dq = double(q - v[j]);
    d[q] = dq * dq + f[v[j]];
  }
}

}  // namespace

std::vector<std::int64_t> edt_squared(const Raster& s) {
  const int w = s.width();
  const int h = s.height();
  std::vector<double> g(s.size(), kInf);

  // Column pass.
  {
    std::vector<double> f(static_cast<std::size_t>(h)), d(static_cast<std::size_t>(h));
    std::vector<int> v(static_cast<std::size_t>(h));
    std::vector<double> z(static_cast<std::size_t>(h) + 1);
    for (int x = 0; x < w; ++x) {
      for (int y = 0; y < h; ++y) f[y] = s.get(x, y) ? 0.0 : kInf;
      transform_1d(f, d, v, z);
      for (int y = 0; y < h; ++y) g[s.index(x, y)] = d[y];
    }
  }
  // Row pass.
  std::vector<std::int64_t> out(s.size(), kNoSite);
  {
    std::vector<double> f(static_cast<std::size_t>(w)), d(static_cast<std::size_t>(w));
    std::vector<int> v(static_cast<std::size_t>(w));
    std::vector<double> z(static_cast<std::size_t>(w) + 1);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) f[x] = g[s.index(x, y)];
      transform_1d(f, d, v, z);
      for (int x = 0; x < w; ++x) {
        if (std::isfinite(d[x])) out[s.index(x, y)] = static_cast<std::int64_t>(d[x]);
      }
    }
  }
  return out;
}

ScalarField edt(const Raster& s) {
  const auto sq = edt_squared(s);
  ScalarField out{s.geometry(), std::vector<double>(s.size())};
  for (std::size_t i = 0; i < sq.size(); ++i) {
    out.values[i] =
        sq[i] == kNoSite ? kInf : std::sqrt(static_cast<double>(sq[i])) * s.cell_size();
  }
  return out;
}

std::vector<std::int64_t> complement_edt_squared(const Raster& a) {
  // A ring of complement cells just past the border keeps the depth of sets
  // touching the border finite.
  const Raster ring = pad(complement(a), 1);
  Raster ring_filled = ring;
  for (std::size_t i = 0; i < ring.size(); ++i) {
    if (ring.on_border(i)) ring_filled.set_at(i, true);
  }
  const auto padded = edt_squared(ring_filled);
  const int my = a.geometry().is_1d() ? 0 : 1;
  std::vector<std::int64_t> out(a.size());
  for (int y = 0; y < a.height(); ++y) {
    for (int x = 0; x < a.width(); ++x) out[a.index(x, y)] = padded[ring.index(x + 1, y + my)];
  }
  return out;
}

std::vector<double> signed_distance_cells(const Raster& a) {
  if (a.empty()) throw EmptySetError("signed distance of an empty set");
  const auto outside = edt_squared(a);
  const auto inside = complement_edt_squared(a);
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    out[i] = a.at(i) ? std::sqrt(static_cast<double>(inside[i])) - 0.5
                     : -(std::sqrt(static_cast<double>(outside[i])) - 0.5);
  }
  return out;
}

ScalarField signed_distance(const Raster& a) {
  auto cells = signed_distance_cells(a);
  for (auto& v : cells) v *= a.cell_size();
  return {a.geometry(), std::move(cells)};
}

ScalarField f_field(const Raster& a, const Raster& b, double x) {
  require_combinable(a, b);
  const auto da = signed_distance(a);
  const auto db = signed_distance(b);
  ScalarField out{a.geometry(), std::vector<double>(a.size())};
  for (std::size_t i = 0; i < a.size(); ++i) {
    out.values[i] = x * da.values[i] + (1.0 - x) * db.values[i];
  }
  return out;
}

int extrapolation_margin(const Raster& a, const Raster& b, double x) {
  require_combinable(a, b);
  if (x >= 0.0 && x <= 1.0) return 0;
  const auto da = signed_distance_cells(a);
  const auto db = signed_distance_cells(b);
  double d = 0.0;
  for (std::size_t i = 0; i < da.size(); ++i) d = std::max(d, std::abs(da[i] - db[i]));
  return static_cast<int>(std::ceil(std::abs(x) * d));
}

void check_clipping(const Raster& result, const Raster& a, const Raster& b) {
  for (std::size_t i = 0; i < result.size(); ++i) {
    if (result.at(i) && !a.at(i) && !b.at(i) && result.on_border(i)) {
      throw ClippingError("average reaches the grid border; pad the domain");
    }
  }
}

Raster distance_average(const Raster& a, const Raster& b, double x) {
  require_combinable(a, b);
  // Membership is scale invariant, so evaluate in cell units.
  const auto da = signed_distance_cells(a);
  const auto db = signed_distance_cells(b);
  Raster out(a.geometry());
  for (std::size_t i = 0; i < a.size(); ++i) {
    out.set_at(i, x * da[i] + (1.0 - x) * db[i] >= 0.0);
  }
  check_clipping(out, a, b);
  return out;
}

std::size_t deepest_cell(const Raster& a) {
  const auto d = signed_distance_cells(a);
  std::size_t best = 0;
  for (std::size_t i = 1; i < d.size(); ++i) {
    if (d[i] > d[best]) best = i;
  }
  return best;
}

namespace {

double cell_gap(const Geometry& g, std::size_t i, std::size_t j) {
  const auto w = static_cast<std::size_t>(g.width);
  const double dx = double(i % w) - double(j % w);
  const double dy = double(i / w) - double(j / w);
  return std::sqrt(dx * dx + dy * dy);
}

}  // namespace

Raster distance_average_empty(const Raster& a, double x) {
  const auto da = signed_distance_cells(a);
  const std::size_t q = deepest_cell(a);
  Raster out(a.geometry());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double r = cell_gap(a.geometry(), i, q);
    out.set_at(i, x * da[i] + (x - 1.0) * r >= 0.0);
  }
  check_clipping(out, a, a);
  return out;
}

Raster CrossingField::membership(double x) const {
  Raster out(geometry);
  for (std::size_t i = 0; i < state.size(); ++i) out.set_at(i, member(i, x));
  return out;
}

CrossingField crossing_field(const Raster& a, const Raster& b) {
  if (!is_subset(b, a)) throw NotNestedError("crossing field requires B ⊆ A");
  const auto da = signed_distance_cells(a);
  const auto db = signed_distance_cells(b);
  CrossingField out{a.geometry(), std::vector<double>(a.size(), 0.0),
                    std::vector<CrossingState>(a.size(), CrossingState::NeverIn)};
  for (std::size_t i = 0; i < a.size(); ++i) {
    // f(x) = db + x (da - db), non-decreasing in x since db <= da.
    if (da[i] > db[i]) {
      out.state[i] = CrossingState::Crossing;
      out.threshold[i] = db[i] / (db[i] - da[i]);
    } else {
      out.state[i] = db[i] >= 0.0 ? CrossingState::AlwaysIn : CrossingState::NeverIn;
    }
  }
  return out;
}

CrossingField empty_crossing_field(const Raster& a) {
  const auto da = signed_distance_cells(a);
  const std::size_t q = deepest_cell(a);
  CrossingField out{a.geometry(), std::vector<double>(a.size(), 0.0),
                    std::vector<CrossingState>(a.size(), CrossingState::Crossing)};
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double r = cell_gap(a.geometry(), i, q);
    // r + da > 0 everywhere because q lies in A.
    out.threshold[i] = r / (r + da[i]);
  }
  return out;
}

}  // namespace setavg
