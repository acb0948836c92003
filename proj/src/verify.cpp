#include "setavg/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include <json.hpp>

#include "setavg/distance.hpp"
#include "setavg/error.hpp"
#include "setavg/fixtures.hpp"
#include "setavg/schemes.hpp"

namespace setavg {

std::uint64_t SplitMix::next() {
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

int SplitMix::uniform_int(int lo, int hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<int>(next() % span);
}

double SplitMix::uniform(double lo, double hi) {
  const double u = static_cast<double>(next() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

const char* pair_class_name(PairClass c) {
  switch (c) {
    case PairClass::Nested: return "nested";
    case PairClass::General: return "general";
    case PairClass::Disjoint: return "disjoint";
  }
  return "?";
}

namespace {

// Random disks and rectangles with cell coordinates inside [lo, hi) on both
// axes (x only for 1D grids).
Raster blob_in(SplitMix& rng, const Geometry& g, int lo_x, int hi_x, int lo_y, int hi_y) {
  Raster out(g);
  const int shapes = rng.uniform_int(1, 3);
  const int span = std::max(2, std::min(hi_x - lo_x, g.is_1d() ? hi_x - lo_x : hi_y - lo_y));
  for (int s = 0; s < shapes; ++s) {
    const int cx = rng.uniform_int(lo_x, hi_x - 1);
    const int cy = g.is_1d() ? 0 : rng.uniform_int(lo_y, hi_y - 1);
    const int r = rng.uniform_int(1, std::max(1, span / 4));
    const bool disk = rng.next() % 2 == 0;
    const int ry = g.is_1d() ? 0 : (disk ? r : rng.uniform_int(1, std::max(1, span / 4)));
    for (int y = std::max(lo_y, cy - ry); y <= std::min(hi_y - 1, cy + ry); ++y) {
      for (int x = std::max(lo_x, cx - r); x <= std::min(hi_x - 1, cx + r); ++x) {
        const double dx = x - cx;
        const double dy = y - cy;
        if (!disk || dx * dx + dy * dy <= double(r) * r) out.set(x, y, true);
      }
    }
  }
  return out;
}

int quarter(int n) { return n / 4; }

}  // namespace

Raster random_blob(SplitMix& rng, const Geometry& g) {
  const int qx = quarter(g.width);
  const int qy = g.is_1d() ? 0 : quarter(g.height);
  return blob_in(rng, g, qx, g.width - qx, qy, g.is_1d() ? 1 : g.height - qy);
}

std::pair<Raster, Raster> random_pair(SplitMix& rng, PairClass c, const Geometry& g) {
  const int qx = quarter(g.width);
  const int qy = g.is_1d() ? 0 : quarter(g.height);
  const int hy = g.is_1d() ? 1 : g.height - qy;
  switch (c) {
    case PairClass::Nested: {
      Raster a = random_blob(rng, g);
      while (a.empty()) a = random_blob(rng, g);
      Raster b = set_intersect(a, random_blob(rng, g));
      if (rng.next() % 4 == 0) b = set_difference(a, random_blob(rng, g));
      return {std::move(a), std::move(b)};
    }
    case PairClass::General: {
      Raster a = random_blob(rng, g);
      Raster b = random_blob(rng, g);
      return {std::move(a), std::move(b)};
    }
    case PairClass::Disjoint: {
      const int mid = g.width / 2;
      Raster a = blob_in(rng, g, qx, mid - 1, qy, hy);
      Raster b = blob_in(rng, g, mid + 1, g.width - qx, qy, hy);
      if (rng.next() % 2 == 0) std::swap(a, b);
      return {std::move(a), std::move(b)};
    }
  }
  throw InvalidArgumentError("unknown pair class");
}

bool VerifyReport::passed() const {
  return std::all_of(properties.begin(), properties.end(),
                     [](const PropertyResult& p) { return p.pass(); });
}

std::string VerifyReport::to_json() const {
  nlohmann::ordered_json j;
  j["seed"] = seed;
  j["passed"] = passed();
  j["properties"] = nlohmann::ordered_json::array();
  for (const auto& p : properties) {
    nlohmann::ordered_json e;
    e["name"] = p.name;
    e["pass"] = p.pass();
    e["cases"] = p.cases;
    e["failures"] = p.failures;
    e["max_deviation"] = p.max_deviation;
    e["budget"] = p.budget;
    if (!p.first_failure.empty()) e["first_failure"] = p.first_failure;
    j["properties"].push_back(std::move(e));
  }
  j["trail"] = nlohmann::ordered_json::array();
  for (const auto& r : trail) {
    j["trail"].push_back({{"requested_target", r.requested_target},
                          {"achieved_measure", r.achieved_measure},
                          {"clamped", r.clamped},
                          {"fallback_used", r.fallback_used},
                          {"extrapolated", r.extrapolated},
                          {"components", r.components},
                          {"sub_averages", r.sub_averages},
                          {"budget", r.budget()}});
  }
  return j.dump();
}

namespace {

constexpr std::size_t kTrailLimit = 32;

class Suite {
 public:
  explicit Suite(VerifyReport& report) : report_(report) {}

  PropertyResult& property(const std::string& name) {
    for (auto& p : report_.properties) {
      if (p.name == name) return p;
    }
    PropertyResult p;
    p.name = name;
    report_.properties.push_back(std::move(p));
    return report_.properties.back();
  }

  void check(const std::string& name, bool ok, const std::string& context,
             double deviation = 0.0, double budget = 0.0) {
    auto& p = property(name);
    ++p.cases;
    if (std::abs(deviation) > std::abs(p.max_deviation) || p.cases == 1) {
      p.max_deviation = deviation;
      p.budget = budget;
    }
    if (!ok) {
      ++p.failures;
      if (p.first_failure.empty()) p.first_failure = context;
    }
  }

  // Runs body, turning library errors into a failure of `name`.
  void guarded(const std::string& name, const std::string& context,
               const std::function<void()>& body) {
    try {
      body();
    } catch (const Error& e) {
      check(name, false, context + ": " + e.what());
    }
  }

  void trail(const AverageReport& r) {
    if (report_.trail.size() < kTrailLimit) report_.trail.push_back(r);
  }

 private:
  VerifyReport& report_;
};

std::vector<std::int64_t> brute_edt(const Raster& s) {
  std::vector<std::int64_t> out(s.size(), kNoSite);
  for (int y = 0; y < s.height(); ++y) {
    for (int x = 0; x < s.width(); ++x) {
      std::int64_t best = kNoSite;
      for (int v = 0; v < s.height(); ++v) {
        for (int u = 0; u < s.width(); ++u) {
          if (!s.get(u, v)) continue;
          const std::int64_t dx = x - u;
          const std::int64_t dy = y - v;
          best = std::min(best, dx * dx + dy * dy);
        }
      }
      out[s.index(x, y)] = best;
    }
  }
  return out;
}

std::string ctx(PairClass c, int trial, double t) {
  std::ostringstream os;
  os << pair_class_name(c) << " pair " << trial << ", t = " << t;
  return os.str();
}

void check_pair(Suite& suite, const Raster& a, const Raster& b, PairClass c, int trial,
                SplitMix& rng, const AverageOptions& opt) {
  const Raster common = set_intersect(a, b);
  const Raster both = set_union(a, b);

  suite.check("metric_axioms",
              symdiff_distance(a, a) == 0.0 && symdiff_distance(a, b) == symdiff_distance(b, a),
              ctx(c, trial, 0));
  suite.guarded("interpolation_ends", ctx(c, trial, 0), [&] {
    const bool ok = general_average(a, b, 0.0, opt).set == b &&
                    general_average(a, b, 1.0, opt).set == a;
    suite.check("interpolation_ends", ok, ctx(c, trial, 0));
  });

  for (double t : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    suite.guarded("inclusion", ctx(c, trial, t), [&] {
      const auto r = general_average(a, b, t, opt);
      const bool incl = is_subset(common, r.set) && is_subset(r.set, both);
      suite.check("inclusion", incl, ctx(c, trial, t));
      const double dev = r.report.achieved_measure - r.report.requested_target;
      const bool ok = std::abs(dev) <= r.report.budget() + 1e-9 * a.cell_area();
      suite.check("measure_property", ok, ctx(c, trial, t), dev, r.report.budget());
      if (!ok) suite.trail(r.report);

      const auto swapped = general_average(b, a, 1.0 - t, opt);
      suite.check("symmetry", swapped.set == r.set, ctx(c, trial, t));
      suite.check("idempotency", general_average(a, a, t, opt).set == a, ctx(c, trial, t));
    });
  }

  if (c == PairClass::Nested) {
    suite.guarded("nested_monotonicity", ctx(c, trial, 0), [&] {
      Raster prev;
      bool ok = true;
      for (double t : {-0.5, 0.0, 0.5, 1.0, 1.5}) {
        const auto r = general_average(a, b, t, opt);
        if (t > -0.5 && !is_subset(prev, r.set)) ok = false;
        if (t < 0.0) suite.check("extrapolation_relations", is_subset(r.set, b), ctx(c, trial, t));
        if (t > 1.0) suite.check("extrapolation_relations", is_subset(a, r.set), ctx(c, trial, t));
        prev = r.set;
      }
      suite.check("nested_monotonicity", ok, ctx(c, trial, 0));
    });
    if (!b.empty()) {
      suite.guarded("distance_average_monotone", ctx(c, trial, 0), [&] {
        const int margin = extrapolation_margin(a, b, 1.5);
        const Raster pa = pad(a, margin);
        const Raster pb = pad(b, margin);
        const auto field = crossing_field(pa, pb);
        Raster prev;
        bool mono = true;
        for (double x : {-0.5, 0.0, 0.25, 0.5, 1.0, 1.5}) {
          const Raster d = distance_average(pa, pb, x);
          if (x > -0.5 && !is_subset(prev, d)) mono = false;
          suite.check("crossing_field_equivalence", field.membership(x) == d, ctx(c, trial, x));
          prev = d;
        }
        suite.check("distance_average_monotone", mono, ctx(c, trial, 0));
      });
    }
  }
  if (!a.empty() && !b.empty()) {
    for (double x : {0.0, 0.3, 0.5, 1.0}) {
      suite.guarded("distance_average_inclusion", ctx(c, trial, x), [&] {
        const Raster d = distance_average(a, b, x);
        suite.check("distance_average_inclusion", is_subset(common, d) && is_subset(d, both),
                    ctx(c, trial, x));
      });
    }
  }

  for (int k = 0; k < 3; ++k) {
    const double s = rng.uniform(0.0, 1.0);
    const double t = rng.uniform(0.0, 1.0);
    suite.guarded("metric_property", ctx(c, trial, t), [&] {
      const auto m = metric_property_check(a, b, s, t, opt);
      suite.check("metric_property", m.metric_ok, ctx(c, trial, t), m.deviation, m.budget);
    });
    const double se = rng.uniform(-0.25, 1.25);
    const double te = rng.uniform(-0.25, 1.25);
    suite.guarded("submetric_property", ctx(c, trial, te), [&] {
      const auto m = metric_property_check(a, b, se, te, opt);
      suite.check("submetric_property", m.submetric_ok, ctx(c, trial, te), m.deviation, m.budget);
    });
  }
}

void check_schemes(Suite& suite, const AverageOptions& opt) {
  SchemeConfig cfg;
  cfg.connectivity = opt.connectivity;
  cfg.param_bound = opt.param_bound;

  FixtureParams nested = fixture_defaults("nested");
  nested.geometry = fixture_geometry("nested", 48);
  nested.count = 5;
  nested.spacing = 0.25;
  const SetSeq stack = SetSeq::uniform(fixture_stack("nested", nested), nested.x0, nested.spacing);

  suite.guarded("chaikin_endpoints", "nested fixture", [&] {
    cfg.scheme = Scheme::Spline;
    cfg.degree = 2;
    const SetSeq out = spline_refine(stack, 2, cfg);
    suite.check("chaikin_endpoints",
                out.sets.front() == stack.sets.front() && out.sets.back() == stack.sets.back(),
                "nested fixture");
  });
  for (int degree : {1, 2, 3}) {
    suite.guarded("spline_monotonicity", "nested fixture", [&] {
      const SetSeq out = spline_refine(spline_refine(stack, degree, cfg), degree, cfg);
      bool ok = true;
      for (std::size_t i = 0; i + 1 < out.size(); ++i) {
        if (!is_subset(out.sets[i], out.sets[i + 1])) ok = false;
      }
      suite.check("spline_monotonicity", ok, "nested fixture, degree " + std::to_string(degree));
    });
  }
  suite.guarded("fourpoint_interpolatory", "nested fixture", [&] {
    const SetSeq out = fourpoint_refine(stack, 1.0 / 16.0, cfg);
    bool ok = out.size() == 2 * stack.size() - 1;
    for (std::size_t i = 0; ok && i < stack.size(); ++i) ok = out.sets[2 * i] == stack.sets[i];
    suite.check("fourpoint_interpolatory", ok, "nested fixture");
  });

  FixtureParams ex = fixture_defaults("example11");
  ex.x0 = -0.875;
  ex.count = 8;
  const SetSeq ex_seq = SetSeq::uniform(fixture_stack("example11", ex), ex.x0, ex.spacing);
  suite.guarded("fourpoint_contraction", "example11", [&] {
    cfg.scheme = Scheme::FourPoint;
    cfg.levels = 5;
    const auto dk = dk_sequence(subdivide_history(ex_seq, cfg));
    const double floor = 4.0 * ex.geometry.cell_area();
    for (std::size_t k = 0; k + 1 < dk.size(); ++k) {
      if (dk[k] <= floor) continue;
      const double ratio = dk[k + 1] / dk[k];
      suite.check("fourpoint_contraction", ratio <= 0.8, "example11 level " + std::to_string(k),
                  ratio, 0.8);
    }
  });
}

}  // namespace

VerifyReport run_verify(const VerifyOptions& options) {
  if (options.size < 8) throw InvalidArgumentError("verify grid size must be at least 8");
  if (options.trials < 0) throw InvalidArgumentError("trials must be non-negative");
  VerifyReport report;
  report.seed = options.seed;
  Suite suite(report);
  SplitMix rng(options.seed);
  AverageOptions opt = options.average;
  opt.perturb_tie_break = options.inject_fault;

  Geometry g;
  g.width = options.size;
  g.height = options.size;
  for (int trial = 0; trial < options.trials; ++trial) {
    const int w = rng.uniform_int(1, options.size);
    const int h = rng.uniform_int(1, options.size);
    Raster s(Geometry{w, h, 1.0, 0.0, 0.0});
    for (std::size_t i = 0; i < s.size(); ++i) s.set_at(i, rng.next() % 5 == 0);
    suite.check("edt_brute_force", edt_squared(s) == brute_edt(s), "grid " + std::to_string(trial));
  }
  for (PairClass c : {PairClass::Nested, PairClass::General, PairClass::Disjoint}) {
    for (int trial = 0; trial < options.trials; ++trial) {
      auto [a, b] = random_pair(rng, c, g);
      check_pair(suite, a, b, c, trial, rng, opt);
    }
  }
  if (options.fixtures) check_schemes(suite, opt);
  return report;
}

}  // namespace setavg
