// Acceptance run: one PASS/FAIL line per criterion, non-zero exit on failure.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "setavg/distance.hpp"
#include "setavg/error.hpp"
#include "setavg/fixtures.hpp"
#include "setavg/measure_average.hpp"
#include "setavg/schemes.hpp"

using namespace setavg;

namespace {

// Tolerances.
constexpr int kPairsPerClass = 200;
constexpr int kCorpusSide = 64;
constexpr double kContractionLimit = 0.75 + 0.05;
constexpr double kOrderLo = 0.35;
constexpr double kOrderHi = 0.65;
constexpr double kMetricFactor = 2.0;
constexpr int kExhaustiveWidth = 15;
constexpr int kSampledPairs = 500;
constexpr double kSlack = 1e-9;  // floating point slack, in cell areas

struct Tally {
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::string first;

  void check(bool ok, const std::string& what) {
    ++cases;
    if (!ok) {
      ++failures;
      if (first.empty()) first = what;
    }
  }
  bool ok() const { return failures == 0 && cases > 0; }
};

int failed_criteria = 0;

void report(int id, const char* title, const Tally& t, const std::string& extra, double secs) {
  std::printf("[%s] C%d %s: %zu cases, %zu failures%s%s (%.1f s)\n", t.ok() ? "PASS" : "FAIL", id,
              title, t.cases, t.failures, extra.empty() ? "" : "; ", extra.c_str(), secs);
  if (!t.first.empty()) std::printf("       first failure: %s\n", t.first.c_str());
  std::fflush(stdout);
  if (!t.ok()) ++failed_criteria;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------------------
// Random corpus: unions of disks and rectangles kept in the central half of a
// 64x64 grid.

Raster shapes(std::mt19937_64& rng, int side, int lo_x, int hi_x, int lo_y, int hi_y) {
  Raster r(oracle::grid(side, side));
  const int n = 1 + static_cast<int>(rng() % 3);
  for (int s = 0; s < n; ++s) {
    const int cx = lo_x + static_cast<int>(rng() % (hi_x - lo_x));
    const int cy = lo_y + static_cast<int>(rng() % (hi_y - lo_y));
    const int rx = 1 + static_cast<int>(rng() % 7);
    const int ry = 1 + static_cast<int>(rng() % 7);
    const bool round = rng() % 2 == 0;
    for (int y = std::max(lo_y, cy - ry); y < std::min(hi_y, cy + ry + 1); ++y) {
      for (int x = std::max(lo_x, cx - rx); x < std::min(hi_x, cx + rx + 1); ++x) {
        const double u = double(x - cx) / rx;
        const double v = double(y - cy) / ry;
        if (!round || u * u + v * v <= 1.0) r.set(x, y, true);
      }
    }
  }
  return r;
}

enum class Kind { Nested, General, Disjoint };
const char* kind_name(Kind k) {
  return k == Kind::Nested ? "nested" : k == Kind::General ? "general" : "disjoint";
}

struct Pair {
  Raster a, b;
  Kind kind;
  int index;
  std::string name() const {
    return std::string(kind_name(kind)) + " #" + std::to_string(index);
  }
};

std::vector<Pair> corpus() {
  std::mt19937_64 rng(20240611);
  const int s = kCorpusSide;
  const int lo = s / 4, hi = 3 * s / 4;
  std::vector<Pair> out;
  for (Kind k : {Kind::Nested, Kind::General, Kind::Disjoint}) {
    for (int i = 0; i < kPairsPerClass; ++i) {
      Raster a, b;
      if (k == Kind::Nested) {
        do a = shapes(rng, s, lo, hi, lo, hi); while (a.empty());
        b = rng() % 3 == 0 ? set_difference(a, shapes(rng, s, lo, hi, lo, hi))
                           : set_intersect(a, shapes(rng, s, lo, hi, lo, hi));
      } else if (k == Kind::General) {
        a = shapes(rng, s, lo, hi, lo, hi);
        b = shapes(rng, s, lo, hi, lo, hi);
      } else {
        a = shapes(rng, s, lo, s / 2 - 1, lo, hi);
        b = shapes(rng, s, s / 2 + 1, hi, lo, hi);
      }
      out.push_back({std::move(a), std::move(b), k, i});
    }
  }
  return out;
}

// Consecutive fixture slices as extra pairs.
std::vector<Pair> fixture_pairs() {
  std::vector<Pair> out;
  int idx = 0;
  for (const auto& name : fixture_names()) {
    FixtureParams p = fixture_defaults(name);
    if (!p.geometry.is_1d()) p.geometry = fixture_geometry(name, 64);
    const auto stack = fixture_stack(name, p);
    for (std::size_t i = 0; i + 1 < stack.size(); ++i) {
      const bool nested = is_subset(stack[i], stack[i + 1]);
      out.push_back({stack[i + 1], stack[i], nested ? Kind::Nested : Kind::General, idx++});
    }
  }
  return out;
}

// Flood-fill component count, 8-neighbour in 2D and 2-neighbour in 1D.
std::size_t components(const Raster& s) {
  std::vector<int> seen(s.size(), 0);
  std::size_t n = 0;
  const bool two_d = s.height() > 1;
  for (std::size_t start = 0; start < s.size(); ++start) {
    if (!s.at(start) || seen[start]) continue;
    ++n;
    std::vector<std::size_t> stack{start};
    seen[start] = 1;
    while (!stack.empty()) {
      const std::size_t i = stack.back();
      stack.pop_back();
      const int x = int(i % s.width()), y = int(i / s.width());
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          if ((!two_d && dy != 0) || (dx == 0 && dy == 0)) continue;
          const int u = x + dx, v = y + dy;
          if (u < 0 || v < 0 || u >= s.width() || v >= s.height()) continue;
          const std::size_t j = s.index(u, v);
          if (s.at(j) && !seen[j]) {
            seen[j] = 1;
            stack.push_back(j);
          }
        }
      }
    }
  }
  return n;
}

bool subset(const Raster& p, const Raster& q) {
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p.at(i) && !q.at(i)) return false;
  }
  return true;
}

std::size_t xor_count(const Raster& p, const Raster& q) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < p.size(); ++i) n += p.at(i) != q.at(i);
  return n;
}

Raster both(const Raster& p, const Raster& q, bool intersect) {
  Raster out(p.geometry());
  for (std::size_t i = 0; i < p.size(); ++i) {
    out.set_at(i, intersect ? (p.at(i) && q.at(i)) : (p.at(i) || q.at(i)));
  }
  return out;
}

std::string ctx(const Pair& p, const char* what, double t) {
  std::ostringstream os;
  os << p.name() << ", " << what << ", t = " << t;
  return os.str();
}

// Runs f, recording library errors as failures.
void guarded(Tally& tally, const std::string& what, const std::function<void()>& f) {
  try {
    f();
  } catch (const std::exception& e) {
    tally.check(false, what + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------

void exact_pair_invariants(Tally& t, const Pair& p) {
  const Raster common = both(p.a, p.b, true);
  const Raster all = both(p.a, p.b, false);
  guarded(t, ctx(p, "ends", 0), [&] {
    t.check(general_average(p.a, p.b, 0.0).set == p.b, ctx(p, "t = 0 gives B", 0));
    t.check(general_average(p.a, p.b, 1.0).set == p.a, ctx(p, "t = 1 gives A", 1));
  });
  for (double tt : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    guarded(t, ctx(p, "inclusion", tt), [&] {
      const Raster r = general_average(p.a, p.b, tt).set;
      t.check(subset(common, r) && subset(r, all), ctx(p, "inclusion", tt));
      t.check(general_average(p.b, p.a, 1.0 - tt).set == r, ctx(p, "symmetry", tt));
      t.check(general_average(p.a, p.a, tt).set == p.a, ctx(p, "idempotency", tt));
    });
  }
  for (double tt : {-0.5, 1.5}) {
    guarded(t, ctx(p, "symmetry", tt), [&] {
      t.check(general_average(p.a, p.b, tt).set == general_average(p.b, p.a, 1.0 - tt).set,
              ctx(p, "symmetry", tt));
    });
  }
  if (p.kind != Kind::Nested) return;
  guarded(t, ctx(p, "monotonicity", 0), [&] {
    Raster prev;
    bool first = true;
    for (double tt : {-0.5, 0.0, 0.5, 1.0, 1.5}) {
      const Raster r = general_average(p.a, p.b, tt).set;
      if (!first) t.check(subset(prev, r), ctx(p, "parameter monotonicity", tt));
      if (tt < 0) t.check(subset(r, p.b), ctx(p, "t < 0 stays inside B", tt));
      if (tt > 1) t.check(subset(p.a, r), ctx(p, "t > 1 contains A", tt));
      prev = r;
      first = false;
    }
  });
}

void exact_scheme_invariants(Tally& t) {
  for (const auto& name : fixture_names()) {
    FixtureParams p = fixture_defaults(name);
    if (!p.geometry.is_1d()) {
      p.geometry = fixture_geometry(name, 64);
      p.count = 6;
      p.spacing = 0.2;
    } else {
      p.x0 = -0.875;
      p.count = 8;
    }
    const SetSeq seq = SetSeq::uniform(fixture_stack(name, p), p.x0, p.spacing);
    guarded(t, name + " schemes", [&] {
      SchemeConfig cfg;
      cfg.scheme = Scheme::FourPoint;
      cfg.levels = 2;
      const auto hist = subdivide_history(seq, cfg);
      for (std::size_t k = 0; k + 1 < hist.size(); ++k) {
        for (std::size_t i = 0; i < hist[k].size(); ++i) {
          t.check(hist[k + 1].sets[2 * i] == hist[k].sets[i], name + ": 4-point even index");
        }
      }
      cfg.scheme = Scheme::Spline;
      cfg.degree = 2;
      const auto ch = subdivide_history(seq, cfg);
      for (std::size_t k = 0; k + 1 < ch.size(); ++k) {
        t.check(ch[k + 1].sets.front() == ch[k].sets.front() &&
                    ch[k + 1].sets.back() == ch[k].sets.back(),
                name + ": Chaikin end sets");
        t.check(ch[k + 1].size() == 2 * (ch[k].size() - 1), name + ": Chaikin count");
      }
      bool monotone_input = true;
      for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
        monotone_input = monotone_input && subset(seq.sets[i], seq.sets[i + 1]);
      }
      if (!monotone_input) return;
      for (int degree : {1, 2, 3}) {
        SchemeConfig sc;
        sc.scheme = Scheme::Spline;
        sc.degree = degree;
        sc.levels = 2;
        const SetSeq out = subdivide(seq, sc);
        for (std::size_t i = 0; i + 1 < out.size(); ++i) {
          t.check(subset(out.sets[i], out.sets[i + 1]),
                  name + ": monotone refinement, degree " + std::to_string(degree));
        }
      }
    });
  }
}

void measure_property(Tally& t, const Pair& p) {
  const Raster common = both(p.a, p.b, true);
  // Simply different sub-averages: components of A \ (A ∩ B) and B \ (A ∩ B).
  Raster a_only(p.a.geometry()), b_only(p.a.geometry());
  for (std::size_t i = 0; i < p.a.size(); ++i) {
    a_only.set_at(i, p.a.at(i) && !common.at(i));
    b_only.set_at(i, p.b.at(i) && !common.at(i));
  }
  const std::size_t subs = components(a_only) + components(b_only);
  const double ca = p.a.cell_area();
  for (double tt : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    guarded(t, ctx(p, "measure", tt), [&] {
      const auto r = general_average(p.a, p.b, tt);
      const double target = tt * measure(p.a) + (1 - tt) * measure(p.b);
      const double budget = 0.5 * ca * static_cast<double>(subs);
      t.check(r.report.sub_averages == subs && r.report.budget() == budget,
              ctx(p, "report budget matches the component count", tt));
      t.check(std::abs(measure(r.set) - target) <= budget + kSlack * ca, ctx(p, "measure", tt));
    });
  }
}

void metric_property(Tally& metric, Tally& sub, const Pair& p, std::mt19937_64& rng) {
  auto u = [&](double lo, double hi) {
    return lo + (hi - lo) * (double(rng() >> 11) * 0x1.0p-53);
  };
  const double dab = double(xor_count(p.a, p.b)) * p.a.cell_area();
  auto one = [&](Tally& tally, double s, double tt, bool two_sided) {
    guarded(tally, ctx(p, "metric", tt), [&] {
      const auto rs = general_average(p.a, p.b, s);
      const auto rt = general_average(p.a, p.b, tt);
      const double measured = double(xor_count(rs.set, rt.set)) * p.a.cell_area();
      const double dev = measured - std::abs(tt - s) * dab;
      const double budget = std::max(rs.report.budget(), rt.report.budget());
      const double limit = kMetricFactor * budget + kSlack * p.a.cell_area();
      tally.check(two_sided ? std::abs(dev) <= limit : dev <= limit, ctx(p, "metric", tt));
    });
  };
  for (int k = 0; k < 2; ++k) one(metric, u(0, 1), u(0, 1), true);
  for (int k = 0; k < 2; ++k) one(sub, u(-0.25, 1.25), u(-0.25, 1.25), false);
}

// 1D raster of a union of closed intervals: a cell is in iff its center is.
Raster intervals(double lo, double hi, int per_unit,
                 const std::vector<std::pair<double, double>>& parts) {
  const double cs = 1.0 / per_unit;
  const int n = static_cast<int>(std::lround((hi - lo) * per_unit));
  Raster r(oracle::grid(n, 1, cs, lo));
  for (int i = 0; i < n; ++i) {
    const double c = lo + (i + 0.5) * cs;
    for (const auto& [a, b] : parts) {
      if (c >= a && c <= b) r.set(i, 0, true);
    }
  }
  return r;
}

void closed_forms(Tally& t) {
  for (int per_unit : {40, 64, 100, 128}) {
    const std::string res = std::to_string(per_unit) + " cells per unit";
    const Raster a = intervals(-1, 4, per_unit, {{0, 3}});
    const Raster b = intervals(-1, 4, per_unit, {{0, 1}, {2, 3}});
    guarded(t, "gap filling, " + res, [&] {
      const Raster r = distance_average(a, b, 0.5);
      t.check(r == a, "1/2 [0,3] + 1/2 ([0,1] u [2,3]) = [0,3], " + res);
      t.check(oracle::distance_average(a, b, 0.5) == a, "oracle gap filling, " + res);
    });
    for (double gap : {0.5, 1.0, 2.0}) {
      const Raster u = intervals(-1, 4, per_unit, {{0, 1}});
      const Raster v = intervals(-1, 4, per_unit, {{1 + gap, 2 + gap}});
      guarded(t, "disjoint, " + res, [&] {
        const Raster r = distance_average(u, v, 0.5);
        t.check(r.empty(), "1/2 [0,1] + 1/2 [" + std::to_string(1 + gap) + ", ...] is empty, " + res);
        t.check(oracle::distance_average(u, v, 0.5).empty(), "oracle disjoint, " + res);
      });
    }
  }
}

SetSeq example11_seq() {
  FixtureParams p = fixture_defaults("example11");
  p.geometry = fixture_geometry("example11", 128);
  p.count = 8;
  p.spacing = 0.25;
  p.x0 = -0.875;
  return SetSeq::uniform(fixture_stack("example11", p), p.x0, p.spacing);
}

std::string contraction(Tally& t) {
  const SetSeq seq = example11_seq();
  SchemeConfig cfg;
  cfg.scheme = Scheme::FourPoint;
  cfg.tension = 1.0 / 16.0;
  cfg.levels = 5;
  const auto hist = subdivide_history(seq, cfg);
  const double ca = seq.sets.front().cell_area();
  std::ostringstream os;
  os << "d_k";
  std::vector<double> d;
  for (const auto& level : hist) {
    double best = 0;
    for (std::size_t i = 0; i + 1 < level.size(); ++i) {
      best = std::max(best, double(xor_count(level.sets[i], level.sets[i + 1])) * ca);
    }
    d.push_back(best);
    os << " " << best;
  }
  for (std::size_t k = 0; k + 1 < d.size(); ++k) {
    if (d[k] <= 4 * ca) continue;
    std::ostringstream w;
    w << "d_" << k + 1 << " / d_" << k << " = " << d[k + 1] / d[k];
    t.check(d[k + 1] / d[k] <= kContractionLimit, w.str());
  }
  return os.str();
}

// sup over x_j = j/32 of d_mu(G(x_j), F_3(x_j)) on the kinked disk.
double approximation_error(const SchemeConfig& cfg, double h) {
  const std::string name = "kinked";
  FixtureParams p = fixture_defaults(name);
  p.geometry = fixture_geometry(name, 256);
  p.x0 = 0.0;
  p.spacing = h;
  p.count = static_cast<int>(std::lround(1.0 / h)) + 1;
  const SetSeq fine = subdivide(SetSeq::uniform(fixture_stack(name, p), p.x0, p.spacing), cfg);
  const double ca = p.geometry.cell_area();
  double e = 0;
  for (int j = 0; j <= 32; ++j) {
    const double x = j / 32.0;
    const Raster f = eval_interpolant(fine, x, cfg.average_options());
    e = std::max(e, double(xor_count(f, fixture_slice(name, x, p.geometry))) * ca);
  }
  return e;
}

std::string approximation_order(Tally& t) {
  std::ostringstream os;
  for (Scheme s : {Scheme::Spline, Scheme::FourPoint}) {
    SchemeConfig cfg;
    cfg.scheme = s;
    cfg.degree = 2;
    cfg.tension = 1.0 / 16.0;
    cfg.levels = 3;
    const char* name = s == Scheme::Spline ? "Chaikin" : "4-point";
    guarded(t, name, [&] {
      const double e1 = approximation_error(cfg, 1.0 / 8.0);
      const double e2 = approximation_error(cfg, 1.0 / 16.0);
      const double ratio = e2 / e1;
      std::ostringstream w;
      w << name << ": e(h) = " << e1 << ", e(h/2) = " << e2 << ", ratio " << ratio;
      t.check(ratio >= kOrderLo && ratio <= kOrderHi, w.str());
      os << (os.tellp() > 0 ? "; " : "") << w.str();
    });
  }
  return os.str();
}

// Centered w x h cell rectangle on a 64 x 64 grid with cell size 1/16.
Raster rectangle(int w, int h) {
  Raster r(oracle::grid(64, 64, 1.0 / 16.0, -2.0, -2.0));
  for (int y = 32 - h / 2; y < 32 + h / 2; ++y) {
    for (int x = 32 - w / 2; x < 32 + w / 2; ++x) r.set(x, y, true);
  }
  return r;
}

std::string measure_transfer(Tally& t) {
  const SetSeq seq = SetSeq::uniform({rectangle(16, 16), rectangle(32, 16), rectangle(32, 32)},
                                     0.0, 1.0);
  std::vector<double> values{1.0, 2.0, 4.0};
  std::vector<double> positions{0.0, 1.0, 2.0};
  for (std::size_t i = 0; i < seq.size(); ++i) {
    t.check(measure(seq.sets[i]) == values[i], "input measures are 1, 2, 4");
  }
  SchemeConfig cfg;
  cfg.scheme = Scheme::Spline;
  cfg.degree = 2;
  cfg.levels = 4;
  const SetSeq out = subdivide(seq, cfg);
  for (int k = 0; k < cfg.levels; ++k) {
    values = oracle::chaikin(values);
    positions = oracle::chaikin(positions);
  }
  t.check(out.size() == values.size(), "level 4 size");
  if (out.size() != values.size()) return "";

  double worst_point = 0, worst_curve = 0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double diff = std::abs(measure(out.sets[i]) - values[i]);
    worst_point = std::max(worst_point, diff);
    std::ostringstream w;
    w << "point " << i << ": |" << measure(out.sets[i]) << " - " << values[i] << "| > bound "
      << out.measure_bound[i];
    t.check(std::abs(out.positions[i] - positions[i]) <= 1e-12, "position " + std::to_string(i));
    t.check(std::isfinite(out.measure_bound[i]) && diff <= out.measure_bound[i] + kSlack, w.str());
  }
  // The interpolant between consecutive level-4 sets against the piecewise
  // linear interpolant of the real-valued sequence, on x = j/64.
  for (int j = 0; j <= 128; ++j) {
    const double x = j / 64.0;
    std::size_t i = 0;
    while (i + 2 < out.size() && out.positions[i + 1] <= x) ++i;
    const double lam = (x - out.positions[i]) / (out.positions[i + 1] - out.positions[i]);
    const auto avg = general_average(out.sets[i + 1], out.sets[i], lam);
    t.check(eval_interpolant(out, x) == avg.set, "interpolant at " + std::to_string(x));
    const double budget = lam * out.measure_bound[i + 1] + (1 - lam) * out.measure_bound[i] +
                          avg.report.budget();
    const double diff = std::abs(measure(avg.set) - oracle::linear_at(positions, values, x));
    worst_curve = std::max(worst_curve, diff);
    std::ostringstream w;
    w << "curve at x = " << x << ": deviation " << diff << " > budget " << budget;
    t.check(diff <= budget + kSlack, w.str());
  }
  std::ostringstream os;
  os << "max deviation " << worst_point << " at level-4 points, " << worst_curve
     << " on the curve; cell area " << out.sets[0].cell_area();
  return os.str();
}

const double kLatticeT[] = {-0.5, -0.125, 0.0, 0.25, 0.5, 0.75, 1.0, 1.125, 1.5};

bool clips(const Raster& r, const Raster& a, const Raster& b) {
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (r.at(i) && !a.at(i) && !b.at(i) && r.on_border(i)) return true;
  }
  return false;
}

void lattice_case(Tally& t, const Raster& a, const Raster& b, const std::string& name) {
  for (double tt : kLatticeT) {
    const Raster expect = oracle::lattice_average(a, b, tt);
    const bool expect_clip = clips(expect, a, b);
    std::ostringstream w;
    w << name << ", t = " << tt;
    try {
      const Raster got = simply_diff_average(a, b, tt).set;
      t.check(!expect_clip && got == expect, w.str());
    } catch (const ClippingError&) {
      t.check(expect_clip, w.str() + ": unexpected clipping");
    } catch (const std::exception& e) {
      t.check(false, w.str() + ": " + e.what());
    }
  }
}

std::string bits_name(const Raster& a, const Raster& b) {
  std::string s;
  for (std::size_t i = 0; i < a.size(); ++i) s += b.at(i) ? 'B' : (a.at(i) ? 'a' : '.');
  return s;
}

// Every B ⊆ A on an n-cell line with A \ B a single run (or empty, A = B).
void lattice_1d_exhaustive(Tally& t, int n) {
  const Geometry g = oracle::grid(n);
  for (int lo = 0; lo <= n; ++lo) {
    for (int hi = lo; hi <= n; ++hi) {
      if (lo == hi && lo > 0) continue;  // A = B, enumerated once
      const int run = hi - lo;
      const int rest = n - run;
      for (std::uint32_t mask = 0; mask < (1u << rest); ++mask) {
        Raster a(g), b(g);
        int bit = 0;
        for (int i = 0; i < n; ++i) {
          if (i >= lo && i < hi) {
            a.set(i, 0, true);
          } else {
            const bool in = (mask >> bit++) & 1u;
            a.set(i, 0, in);
            b.set(i, 0, in);
          }
        }
        // Keep A \ B a maximal run so each pair is visited once.
        if (run > 0 && ((lo > 0 && a.at(lo - 1) && !b.at(lo - 1)) ||
                        (hi < n && a.at(hi) && !b.at(hi)))) {
          continue;
        }
        if (a.empty()) continue;
        lattice_case(t, a, b, bits_name(a, b));
      }
    }
  }
}

void lattice_1d_sampled(Tally& t, int n, int samples, std::mt19937_64& rng) {
  const Geometry g = oracle::grid(n);
  for (int s = 0; s < samples; ++s) {
    const int lo = static_cast<int>(rng() % n);
    const int hi = lo + 1 + static_cast<int>(rng() % (n - lo));
    Raster a(g), b(g);
    for (int i = 0; i < n; ++i) {
      const bool in = (i >= lo && i < hi) || rng() % 2 == 0;
      a.set(i, 0, in);
      b.set(i, 0, in && !(i >= lo && i < hi));
    }
    lattice_case(t, a, b, bits_name(a, b));
  }
}

void lattice_2d(Tally& t, int pairs, std::mt19937_64& rng) {
  for (int p = 0; p < pairs; ++p) {
    const int w = 4 + static_cast<int>(rng() % 13);
    const int h = 4 + static_cast<int>(rng() % 13);
    Raster a = oracle::random_raster(rng, w, h, 40 + static_cast<int>(rng() % 40));
    if (a.empty()) a.set(w / 2, h / 2, true);
    // B = A minus an 8-connected region grown from a cell of A.
    std::vector<std::size_t> cells;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a.at(i)) cells.push_back(i);
    }
    const std::size_t want = 1 + rng() % cells.size();
    Raster region(a.geometry());
    std::vector<std::size_t> frontier{cells[rng() % cells.size()]};
    region.set_at(frontier[0], true);
    std::size_t taken = 1;
    while (!frontier.empty() && taken < want) {
      const std::size_t pick = rng() % frontier.size();
      const std::size_t i = frontier[pick];
      const int x = int(i % w), y = int(i / w);
      bool grew = false;
      for (int dy = -1; dy <= 1 && !grew; ++dy) {
        for (int dx = -1; dx <= 1 && !grew; ++dx) {
          const int u = x + dx, v = y + dy;
          if (u < 0 || v < 0 || u >= w || v >= h) continue;
          const std::size_t j = a.index(u, v);
          if (a.at(j) && !region.at(j)) {
            region.set_at(j, true);
            frontier.push_back(j);
            ++taken;
            grew = true;
          }
        }
      }
      if (!grew) frontier.erase(frontier.begin() + static_cast<long>(pick));
    }
    Raster b(a.geometry());
    for (std::size_t i = 0; i < a.size(); ++i) b.set_at(i, a.at(i) && !region.at(i));
    lattice_case(t, a, b, std::to_string(w) + "x" + std::to_string(h) + " pair #" + std::to_string(p));
  }
}

void edt_exactness(Tally& t) {
  std::mt19937_64 rng(31337);
  for (int g = 0; g < 100; ++g) {
    const int w = 1 + static_cast<int>(rng() % 32);
    const int h = 1 + static_cast<int>(rng() % 32);
    const int density = g % 10 == 0 ? 0 : (g % 10 == 1 ? 100 : static_cast<int>(rng() % 100));
    const Raster r = oracle::random_raster(rng, w, h, density);
    t.check(edt_squared(r) == oracle::edt_sq(r),
            std::to_string(w) + "x" + std::to_string(h) + " grid #" + std::to_string(g));
  }
}

}  // namespace

int main(int argc, char** argv) {
  // Optional arguments select criteria by number.
  std::vector<int> only;
  for (int i = 1; i < argc; ++i) only.push_back(std::atoi(argv[i]));
  auto want = [&](int id) { return only.empty() || std::find(only.begin(), only.end(), id) != only.end(); };
  const auto start = std::chrono::steady_clock::now();
  std::vector<Pair> pairs = corpus();
  const std::vector<Pair> fx = fixture_pairs();

  // C1
  if (want(1)) {
    const auto t0 = std::chrono::steady_clock::now();
    Tally t;
    for (const auto& p : pairs) exact_pair_invariants(t, p);
    for (const auto& p : fx) exact_pair_invariants(t, p);
    exact_scheme_invariants(t);
    const double secs = seconds_since(t0);
    t.check(secs < 60.0, "runtime above 60 s");
    report(1, "exact invariants", t, std::to_string(pairs.size()) + " random pairs, " +
                                         std::to_string(fx.size()) + " fixture pairs", secs);
  }
  // C2
  if (want(2)) {
    const auto t0 = std::chrono::steady_clock::now();
    Tally t;
    for (const auto& p : pairs) measure_property(t, p);
    for (const auto& p : fx) measure_property(t, p);
    report(2, "measure property", t, "", seconds_since(t0));
  }
  // C3
  if (want(3)) {
    const auto t0 = std::chrono::steady_clock::now();
    Tally metric, sub;
    std::mt19937_64 rng(99);
    for (const auto& p : pairs) metric_property(metric, sub, p, rng);
    for (const auto& p : fx) metric_property(metric, sub, p, rng);
    Tally t;
    t.cases = metric.cases + sub.cases;
    t.failures = metric.failures + sub.failures;
    t.first = !metric.first.empty() ? "metric: " + metric.first
                                     : (!sub.first.empty() ? "submetric: " + sub.first : "");
    report(3, "metric and submetric properties", t,
           std::to_string(metric.failures) + " metric / " + std::to_string(sub.failures) +
               " submetric failures",
           seconds_since(t0));
  }

  // C4
  if (want(4)) {
    const auto t0 = std::chrono::steady_clock::now();
    Tally t;
    closed_forms(t);
    report(4, "closed-form distance averages", t, "", seconds_since(t0));
  }
  // C5
  if (want(5)) {
    const auto t0 = std::chrono::steady_clock::now();
    Tally t;
    std::string d;
    guarded(t, "contraction", [&] { d = contraction(t); });
    const double secs = seconds_since(t0);
    t.check(secs < 30.0, "runtime above 30 s");
    report(5, "4-point contraction", t, d, secs);
  }
  // C6
  if (want(6)) {
    const auto t0 = std::chrono::steady_clock::now();
    Tally t;
    const std::string info = approximation_order(t);
    const double secs = seconds_since(t0);
    t.check(secs < 300.0, "runtime above 5 min");
    report(6, "approximation order", t, info, secs);
  }

  // C7
  if (want(7)) {
    const auto t0 = std::chrono::steady_clock::now();
    Tally t;
    std::string info;
    guarded(t, "measure transfer", [&] { info = measure_transfer(t); });
    report(7, "measure transfer", t, info, seconds_since(t0));
  }
  // C8
  if (want(8)) {
    const auto t0 = std::chrono::steady_clock::now();
    Tally one, two;
    std::mt19937_64 rng(8080);
    for (int n = 1; n <= kExhaustiveWidth; ++n) lattice_1d_exhaustive(one, n);
    for (int n = kExhaustiveWidth + 1; n <= 24; ++n) lattice_1d_sampled(one, n, kSampledPairs, rng);
    lattice_2d(two, 100, rng);
    Tally t;
    t.cases = one.cases + two.cases;
    t.failures = one.failures + two.failures;
    t.first = !one.first.empty() ? one.first : two.first;
    report(8, "lattice oracle equivalence", t,
           std::to_string(one.cases) + " 1D and " + std::to_string(two.cases) + " 2D cases",
           seconds_since(t0));
  }
  // C9
  if (want(9)) {
    const auto t0 = std::chrono::steady_clock::now();
    Tally t;
    edt_exactness(t);
    report(9, "EDT exactness", t, "", seconds_since(t0));
  }

  std::printf("total %.1f s, %d criteria failed\n", seconds_since(start), failed_criteria);
  return failed_criteria == 0 ? 0 : 1;
}
