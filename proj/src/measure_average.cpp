#include "setavg/measure_average.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>

#include "setavg/distance.hpp"
#include "setavg/error.hpp"

namespace setavg {

namespace {

std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Prefix length k minimising |k - target|, ties to the smaller k.
std::size_t best_prefix(double target, std::size_t available) {
  if (target <= 0.0) return 0;
  const double k = std::ceil(target - 0.5);
  if (k >= static_cast<double>(available)) return available;
  return static_cast<std::size_t>(k);
}

bool same_bits(const Raster& a, const Raster& b) {
  return std::equal(a.bits().begin(), a.bits().end(), b.bits().begin());
}

double target_cells(const Raster& a, const Raster& b, double t) {
  return t * static_cast<double>(a.count()) + (1.0 - t) * static_cast<double>(b.count());
}

void sort_crossings(std::vector<Crossing>& crossings) {
  std::sort(crossings.begin(), crossings.end(), [](const Crossing& l, const Crossing& r) {
    if (l.threshold != r.threshold) return l.threshold < r.threshold;
    if (l.distance_to_b != r.distance_to_b) return l.distance_to_b < r.distance_to_b;
    return l.cell < r.cell;
  });
}

// Data of B shared by the sub-averages of all components of A \ B.
struct NestedBase {
  const Raster& b;
  std::vector<std::int64_t> to_b_sq;      // squared distance to B
  std::vector<std::int64_t> inside_b_sq;  // squared distance to the complement of B
  std::vector<std::int64_t> inside_a_sq;  // squared distance to the complement of A

  NestedBase(const Raster& a, const Raster& b_)
      : b(b_),
        to_b_sq(edt_squared(b_)),
        inside_b_sq(complement_edt_squared(b_)),
        inside_a_sq(complement_edt_squared(a)) {}
};

struct Box {
  int x0, y0, x1, y1;  // inclusive
  bool empty() const { return x1 < x0; }
  void add(int x, int y) {
    x0 = std::min(x0, x);
    y0 = std::min(y0, y);
    x1 = std::max(x1, x);
    y1 = std::max(y1, y);
  }
  std::int64_t gap_sq(int x, int y) const {
    const std::int64_t dx = std::max({0, x0 - x, x - x1});
    const std::int64_t dy = std::max({0, y0 - y, y - y1});
    return dx * dx + dy * dy;
  }
};

constexpr Box kNoBox{std::numeric_limits<int>::max(), std::numeric_limits<int>::max(),
                     std::numeric_limits<int>::min(), std::numeric_limits<int>::min()};

// Squared EDT of the sites inside a box, indexed by box-local cell.
template <class Site>
std::vector<std::int64_t> box_edt(const Box& box, Site site) {
  Raster r(Geometry{box.x1 - box.x0 + 1, box.y1 - box.y0 + 1, 1.0, 0.0, 0.0});
  for (int y = box.y0; y <= box.y1; ++y) {
    for (int x = box.x0; x <= box.x1; ++x) r.set(x - box.x0, y - box.y0, site(x, y));
  }
  return edt_squared(r);
}

std::size_t box_index(const Box& box, int x, int y) {
  return static_cast<std::size_t>(y - box.y0) * static_cast<std::size_t>(box.x1 - box.x0 + 1) +
         static_cast<std::size_t>(x - box.x0);
}

int ceil_sqrt(std::int64_t v) {
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(v)));
  while (r * r < v) ++r;
  while (r > 0 && (r - 1) * (r - 1) >= v) --r;
  return static_cast<int>(r);
}

// h curve of (B u c, B) for one component c of A \ B, equal to
// h_curve(B u c, B). Signed distances of B u c differ from those of B only
// near c, so they are evaluated on boxes that hold every nearest site.
HCurve component_curve(const NestedBase& base, const Raster& c, double param_bound) {
  const Raster& b = base.b;
  const Geometry& g = b.geometry();
  const int w = b.width(), h = b.height();
  const int my = g.is_1d() ? 0 : 1;
  HCurve curve{Raster(g), {}, b.cell_area(), param_bound};

  Box cbox = kNoBox;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (c.get(x, y)) cbox.add(x, y);
    }
  }

  // Outside B u c the distance changes only where c is nearer than B.
  // Inside B it changes only where the nearest complement cell lies in c.
  Box outer = cbox;
  Box inner = kNoBox;  // padded coordinates
  auto widen_inner = [&](int x, int y, std::int64_t bound_sq) {
    const int r = ceil_sqrt(bound_sq);
    inner.add(std::max(0, x + 1 - r), std::max(0, y + my - r));
    inner.add(std::min(w + 1, x + 1 + r), std::min(h - 1 + 2 * my, y + my + r));
  };
  std::vector<std::size_t> outside, inside;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t i = b.index(x, y);
      const std::int64_t gap = cbox.gap_sq(x, y);
      if (c.at(i)) {
        widen_inner(x, y, base.inside_a_sq[i]);
      } else if (b.at(i)) {
        if (gap <= base.inside_b_sq[i]) {
          inside.push_back(i);
          widen_inner(x, y, base.inside_a_sq[i]);
        }
      } else if (gap < base.to_b_sq[i]) {
        outside.push_back(i);
        outer.add(x, y);
      }
    }
  }

  const auto to_c = box_edt(outer, [&](int x, int y) { return c.get(x, y); });
  const auto to_rest = box_edt(inner, [&](int px, int py) {
    const int x = px - 1, y = py - my;
    if (x < 0 || y < 0 || x >= w || y >= h) return true;
    return !b.get(x, y) && !c.get(x, y);
  });

  std::vector<std::uint8_t> changed(b.size(), 0);
  auto add = [&](std::size_t i, double da) {
    changed[i] = 1;
    const double db = b.at(i) ? std::sqrt(static_cast<double>(base.inside_b_sq[i])) - 0.5
                              : -(std::sqrt(static_cast<double>(base.to_b_sq[i])) - 0.5);
    const double thr = db / (db - da);
    if (thr <= -param_bound) {
      curve.floor_set.set_at(i, true);
    } else if (thr <= param_bound) {
      curve.crossings.push_back({thr, std::sqrt(static_cast<double>(base.to_b_sq[i])), i});
    }
  };
  auto inner_sq = [&](std::size_t i) {
    const int x = static_cast<int>(i % static_cast<std::size_t>(w));
    const int y = static_cast<int>(i / static_cast<std::size_t>(w));
    return to_rest[box_index(inner, x + 1, y + my)];
  };
  for (std::size_t i : outside) {
    const int x = static_cast<int>(i % static_cast<std::size_t>(w));
    const int y = static_cast<int>(i / static_cast<std::size_t>(w));
    const std::int64_t d = to_c[box_index(outer, x, y)];
    if (d < base.to_b_sq[i]) add(i, -(std::sqrt(static_cast<double>(d)) - 0.5));
  }
  for (std::size_t i : inside) {
    const std::int64_t d = inner_sq(i);
    if (d > base.inside_b_sq[i]) add(i, std::sqrt(static_cast<double>(d)) - 0.5);
  }
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (c.at(i)) add(i, std::sqrt(static_cast<double>(inner_sq(i))) - 0.5);
    if (b.at(i) && !changed[i]) curve.floor_set.set_at(i, true);
  }
  sort_crossings(curve.crossings);
  return curve;
}

// The prefix of the curve that best matches t mu(A) + (1 - t) mu(B).
AverageResult curve_average(HCurve curve, const Raster& a, const Raster& b, double t,
                            const AverageOptions& options, AverageReport report) {
  if (options.perturb_tie_break) {
    const std::uint64_t salt = std::bit_cast<std::uint64_t>(t);
    std::stable_sort(curve.crossings.begin(), curve.crossings.end(),
                     [salt](const Crossing& l, const Crossing& r) {
                       const double bl = std::floor(l.threshold * 4.0);
                       const double br = std::floor(r.threshold * 4.0);
                       if (bl != br) return bl < br;
                       return mix(l.cell ^ salt) < mix(r.cell ^ salt);
                     });
  }

  const double wanted = target_cells(a, b, t) - static_cast<double>(curve.floor_set.count());
  const std::size_t n = curve.crossings.size();
  const std::size_t k = best_prefix(wanted, n);
  report.clamped = wanted < 0.0 || wanted > static_cast<double>(n);
  report.fallback_used =
      k > 0 && k < n && curve.crossings[k - 1].threshold == curve.crossings[k].threshold;

  Raster out = curve.prefix(k);
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t cell = curve.crossings[i].cell;
    if (!a.at(cell) && !b.at(cell) && out.on_border(cell)) {
      throw ClippingError("average reaches the grid border; pad the domain");
    }
  }
  report.achieved_measure = measure(out);
  return {std::move(out), report};
}

}  // namespace

double HCurve::operator()(double x) const {
  const double xc = std::clamp(x, -bound, bound);
  const auto it = std::upper_bound(crossings.begin(), crossings.end(), xc,
                                   [](double v, const Crossing& c) { return v < c.threshold; });
  return floor_measure() + cell_area * static_cast<double>(it - crossings.begin());
}

Raster HCurve::prefix(std::size_t k) const {
  Raster out = floor_set;
  k = std::min(k, crossings.size());
  for (std::size_t i = 0; i < k; ++i) out.set_at(crossings[i].cell, true);
  return out;
}

HCurve h_curve(const Raster& a, const Raster& b, double param_bound,
               const AverageOptions& options) {
  (void)options;
  if (!(param_bound > 1.0)) throw InvalidArgumentError("parameter bound N must exceed 1");
  if (!is_subset(b, a)) throw NotNestedError("h curve requires B ⊆ A");
  HCurve curve{Raster(a.geometry()), {}, a.cell_area(), param_bound};
  if (a.empty()) return curve;

  CrossingField field;
  std::vector<double> to_b(a.size(), 0.0);
  if (b.empty()) {
    field = empty_crossing_field(a);
    const std::size_t q = deepest_cell(a);
    const auto w = static_cast<std::size_t>(a.width());
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double dx = double(i % w) - double(q % w);
      const double dy = double(i / w) - double(q / w);
      to_b[i] = std::sqrt(dx * dx + dy * dy);
    }
  } else {
    field = crossing_field(a, b);
    const auto sq = edt_squared(b);
    for (std::size_t i = 0; i < a.size(); ++i) to_b[i] = std::sqrt(static_cast<double>(sq[i]));
  }

  for (std::size_t i = 0; i < a.size(); ++i) {
    if (field.state[i] == CrossingState::AlwaysIn) {
      curve.floor_set.set_at(i, true);
    } else if (field.state[i] == CrossingState::Crossing) {
      const double thr = field.threshold[i];
      if (thr <= -param_bound) {
        curve.floor_set.set_at(i, true);
      } else if (thr <= param_bound) {
        curve.crossings.push_back({thr, to_b[i], i});
      }
    }
  }
  sort_crossings(curve.crossings);
  return curve;
}

AverageResult simply_diff_average(const Raster& a, const Raster& b, double t,
                                  const AverageOptions& options) {
  if (!is_subset(b, a)) throw NotNestedError("simply different average requires B ⊆ A");
  const std::size_t comps = count_components(set_difference(a, b), options.connectivity);
  if (comps > 1) {
    throw NotSimplyDifferentError("A \\ B has more than one component; use nested_average");
  }

  AverageReport report;
  report.cell_area = a.cell_area();
  report.requested_target = target_cells(a, b, t) * a.cell_area();
  report.extrapolated = t < 0.0 || t > 1.0;
  report.components = comps;
  report.sub_averages = comps;
  if (comps == 0) {
    report.achieved_measure = measure(a);
    return {a, report};
  }

  if (b.empty()) {
    return curve_average(h_curve(a, b, options.param_bound, options), a, b, t, options, report);
  }
  const NestedBase base(a, b);
  return curve_average(component_curve(base, set_difference(a, b), options.param_bound), a, b, t,
                       options, report);
}

Raster offset_average(const Raster& a, const Raster& b, double t) {
  if (!is_subset(b, a)) throw NotNestedError("offset average requires B ⊆ A");
  if (b.empty()) throw EmptySetError("offset average requires a non-empty B");
  if (t < 0.0 || t > 1.0) throw InvalidArgumentError("offset average is defined for t in [0, 1]");
  const auto sq = edt_squared(b);
  std::vector<std::size_t> ring;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.at(i) && !b.at(i)) ring.push_back(i);
  }
  std::sort(ring.begin(), ring.end(), [&sq](std::size_t l, std::size_t r) {
    return sq[l] != sq[r] ? sq[l] < sq[r] : l < r;
  });
  const std::size_t k = best_prefix(t * static_cast<double>(ring.size()), ring.size());
  Raster out = b;
  for (std::size_t i = 0; i < k; ++i) out.set_at(ring[i], true);
  return out;
}

AverageResult nested_average(const Raster& a, const Raster& b, double t,
                             const AverageOptions& options) {
  if (!is_subset(b, a)) throw NotNestedError("nested average requires B ⊆ A");
  AverageReport report;
  report.cell_area = a.cell_area();
  report.requested_target = target_cells(a, b, t) * a.cell_area();
  report.extrapolated = t < 0.0 || t > 1.0;
  if (same_bits(a, b)) {
    report.achieved_measure = measure(a);
    return {a, report};
  }

  const auto comps = connected_components(set_difference(a, b), options.connectivity);
  std::optional<NestedBase> base;
  if (!b.empty()) base.emplace(a, b);
  Raster merged(a.geometry());
  bool first = true;
  for (const auto& c : comps) {
    const Raster sub_a = set_union(b, c);
    AverageReport sub_report;
    sub_report.cell_area = a.cell_area();
    auto curve = base ? component_curve(*base, c, options.param_bound)
                      : h_curve(sub_a, b, options.param_bound, options);
    auto sub = curve_average(std::move(curve), sub_a, b, t, options, sub_report);
    report.clamped = report.clamped || sub.report.clamped;
    report.fallback_used = report.fallback_used || sub.report.fallback_used;
    if (first) {
      merged = std::move(sub.set);
      first = false;
    } else if (t >= 0.0) {
      merged = set_union(merged, sub.set);
    } else {
      merged = set_intersect(merged, sub.set);
    }
  }
  report.components = comps.size();
  report.sub_averages = comps.size();
  report.achieved_measure = measure(merged);
  return {std::move(merged), report};
}

AverageResult general_average(const Raster& a, const Raster& b, double t,
                              const AverageOptions& options) {
  require_combinable(a, b);
  if (a.empty() && b.empty()) {
    AverageReport report;
    report.cell_area = a.cell_area();
    report.extrapolated = t < 0.0 || t > 1.0;
    return {a, report};
  }
  if (t < 0.0) return general_average(b, a, 1.0 - t, options);

  const Raster common = set_intersect(a, b);
  auto r1 = nested_average(a, common, t, options);
  auto r2 = nested_average(b, common, 1.0 - t, options);

  Raster out = t <= 1.0 ? set_union(r1.set, r2.set)
                        : set_union(set_difference(r1.set, common), r2.set);

  AverageReport report;
  report.cell_area = a.cell_area();
  report.requested_target = target_cells(a, b, t) * a.cell_area();
  report.achieved_measure = measure(out);
  report.extrapolated = t > 1.0;
  report.clamped = r1.report.clamped || r2.report.clamped;
  report.fallback_used = r1.report.fallback_used || r2.report.fallback_used;
  report.components = r1.report.components + r2.report.components;
  report.sub_averages = r1.report.sub_averages + r2.report.sub_averages;
  return {std::move(out), report};
}

MetricCheck metric_property_check(const Raster& a, const Raster& b, double s, double t,
                                  const AverageOptions& options) {
  const auto avg_s = general_average(a, b, s, options);
  const auto avg_t = general_average(a, b, t, options);
  MetricCheck check;
  check.measured = symdiff_distance(avg_s.set, avg_t.set);
  check.predicted = std::abs(t - s) * symdiff_distance(a, b);
  check.deviation = check.measured - check.predicted;
  check.budget = std::max(avg_s.report.budget(), avg_t.report.budget());
  const double slack = 1e-9 * a.cell_area();
  check.metric_ok = std::abs(check.deviation) <= 2.0 * check.budget + slack;
  check.submetric_ok = check.deviation <= 2.0 * check.budget + slack;
  return check;
}

}  // namespace setavg
