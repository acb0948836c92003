#include "setavg/setavg.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "setavg/distance.hpp"
#include "setavg/error.hpp"
#include "setavg/fixtures.hpp"
#include "setavg/measure_average.hpp"
#include "setavg/pnm.hpp"
#include "setavg/schemes.hpp"
#include "setavg/stack.hpp"
#include "setavg/verify.hpp"

struct sa_raster {
  setavg::Raster r;
};

struct sa_seq {
  setavg::SetSeq s;
  double first = 0.0;
};

namespace {

thread_local std::string last_error;

sa_status fail(sa_status status, const std::string& message) {
  last_error = message;
  return status;
}

template <typename F>
sa_status guard(F&& body) {
  try {
    last_error.clear();
    return body();
  } catch (const setavg::ClippingError& e) {
    return fail(SA_ERR_CLIPPING, e.what());
  } catch (const setavg::IoError& e) {
    return fail(SA_ERR_IO, e.what());
  } catch (const setavg::GridMismatchError& e) {
    return fail(SA_ERR_GRID, e.what());
  } catch (const setavg::NotNestedError& e) {
    return fail(SA_ERR_NOT_NESTED, e.what());
  } catch (const setavg::NotSimplyDifferentError& e) {
    return fail(SA_ERR_NOT_NESTED, e.what());
  } catch (const setavg::EmptySetError& e) {
    return fail(SA_ERR_EMPTY, e.what());
  } catch (const setavg::InvalidArgumentError& e) {
    return fail(SA_ERR_INVALID, e.what());
  } catch (const std::bad_alloc&) {
    return fail(SA_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(SA_ERR_INTERNAL, e.what());
  }
}

#define SA_REQUIRE(cond)                                              \
  do {                                                                \
    if (!(cond)) return fail(SA_ERR_INVALID, "null argument: " #cond); \
  } while (0)

setavg::Geometry to_geometry(const sa_geometry& g) {
  return {g.width, g.height, g.cell_size, g.origin_x, g.origin_y};
}

sa_geometry from_geometry(const setavg::Geometry& g) {
  return {g.width, g.height, g.cell_size, g.origin_x, g.origin_y};
}

void validate(const setavg::Geometry& g) {
  if (g.width <= 0 || g.height <= 0) throw setavg::InvalidArgumentError("grid must be non-empty");
  if (!(g.cell_size > 0.0)) throw setavg::InvalidArgumentError("cell size must be positive");
}

setavg::SchemeConfig to_config(const sa_config* c) {
  setavg::SchemeConfig cfg;
  if (c == nullptr) return cfg;
  switch (c->scheme) {
    case SA_SCHEME_PIECEWISE: cfg.scheme = setavg::Scheme::Piecewise; break;
    case SA_SCHEME_SPLINE: cfg.scheme = setavg::Scheme::Spline; break;
    case SA_SCHEME_FOURPOINT: cfg.scheme = setavg::Scheme::FourPoint; break;
    default: throw setavg::InvalidArgumentError("unknown scheme");
  }
  if (c->connectivity != 4 && c->connectivity != 8) {
    throw setavg::InvalidArgumentError("connectivity must be 4 or 8");
  }
  if (c->boundary != SA_BOUNDARY_OPEN && c->boundary != SA_BOUNDARY_BIINFINITE) {
    throw setavg::InvalidArgumentError("unknown boundary mode");
  }
  cfg.degree = c->degree;
  cfg.tension = c->tension;
  cfg.levels = c->levels;
  cfg.connectivity = c->connectivity == 4 ? setavg::Connectivity::Orthogonal
                                          : setavg::Connectivity::OrthogonalDiagonal;
  cfg.param_bound = c->param_bound;
  cfg.boundary =
      c->boundary == SA_BOUNDARY_OPEN ? setavg::Boundary::OpenEnds : setavg::Boundary::BiInfinite;
  return cfg;
}

sa_raster* wrap(setavg::Raster r) { return new sa_raster{std::move(r)}; }
sa_seq* wrap(setavg::SetSeq s) {
  const double first = s.positions.empty() ? 0.0 : s.positions.front();
  return new sa_seq{std::move(s), first};
}

setavg::FixtureParams fixture_params(const std::string& name, const sa_fixture_params* p) {
  setavg::FixtureParams out = setavg::fixture_defaults(name);
  if (p == nullptr) return out;
  out.x0 = p->x0;
  out.spacing = p->spacing;
  out.count = p->count;
  out.geometry = setavg::fixture_geometry(name, p->cells);
  return out;
}

}  // namespace

extern "C" {

const char* sa_last_error(void) { return last_error.c_str(); }

const char* sa_status_name(sa_status status) {
  switch (status) {
    case SA_OK: return "ok";
    case SA_ERR_INVALID: return "invalid argument";
    case SA_ERR_CLIPPING: return "clipping";
    case SA_ERR_IO: return "i/o error";
    case SA_ERR_USAGE: return "usage error";
    case SA_ERR_VERIFY: return "verification failure";
    case SA_ERR_GRID: return "grid mismatch";
    case SA_ERR_NOT_NESTED: return "not nested";
    case SA_ERR_EMPTY: return "empty set";
    case SA_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void sa_config_default(sa_config* config) {
  if (config == nullptr) return;
  const setavg::SchemeConfig d;
  config->scheme = SA_SCHEME_SPLINE;
  config->degree = d.degree;
  config->tension = d.tension;
  config->levels = d.levels;
  config->connectivity = 8;
  config->param_bound = d.param_bound;
  config->boundary = SA_BOUNDARY_OPEN;
}

void sa_string_free(char* s) { std::free(s); }

sa_status sa_raster_create(const sa_geometry* geometry, sa_raster** out) {
  SA_REQUIRE(geometry && out);
  return guard([&] {
    const auto g = to_geometry(*geometry);
    validate(g);
    *out = wrap(setavg::Raster(g));
    return SA_OK;
  });
}

sa_status sa_raster_clone(const sa_raster* r, sa_raster** out) {
  SA_REQUIRE(r && out);
  return guard([&] {
    *out = wrap(r->r);
    return SA_OK;
  });
}

void sa_raster_free(sa_raster* r) { delete r; }

sa_status sa_raster_geometry(const sa_raster* r, sa_geometry* out) {
  SA_REQUIRE(r && out);
  *out = from_geometry(r->r.geometry());
  return SA_OK;
}

sa_status sa_raster_set_placement(sa_raster* r, double cell_size, double origin_x,
                                  double origin_y) {
  SA_REQUIRE(r);
  return guard([&] {
    setavg::Geometry g = r->r.geometry();
    g.cell_size = cell_size;
    g.origin_x = origin_x;
    g.origin_y = origin_y;
    validate(g);
    const auto bits = r->r.bits();
    r->r = setavg::Raster(g, std::vector<std::uint8_t>(bits.begin(), bits.end()));
    return SA_OK;
  });
}

sa_status sa_raster_get(const sa_raster* r, int x, int y, int* value) {
  SA_REQUIRE(r && value);
  if (x < 0 || y < 0 || x >= r->r.width() || y >= r->r.height()) {
    return fail(SA_ERR_INVALID, "cell out of range");
  }
  *value = r->r.get(x, y) ? 1 : 0;
  return SA_OK;
}

sa_status sa_raster_set(sa_raster* r, int x, int y, int value) {
  SA_REQUIRE(r);
  if (x < 0 || y < 0 || x >= r->r.width() || y >= r->r.height()) {
    return fail(SA_ERR_INVALID, "cell out of range");
  }
  r->r.set(x, y, value != 0);
  return SA_OK;
}

sa_status sa_raster_count(const sa_raster* r, size_t* count) {
  SA_REQUIRE(r && count);
  *count = r->r.count();
  return SA_OK;
}

sa_status sa_raster_measure(const sa_raster* r, double* m) {
  SA_REQUIRE(r && m);
  *m = setavg::measure(r->r);
  return SA_OK;
}

sa_status sa_raster_equal(const sa_raster* a, const sa_raster* b, int* equal) {
  SA_REQUIRE(a && b && equal);
  *equal = a->r == b->r ? 1 : 0;
  return SA_OK;
}

sa_status sa_symdiff_distance(const sa_raster* a, const sa_raster* b, double* d) {
  SA_REQUIRE(a && b && d);
  return guard([&] {
    *d = setavg::symdiff_distance(a->r, b->r);
    return SA_OK;
  });
}

sa_status sa_raster_pad(const sa_raster* r, int margin, sa_raster** out) {
  SA_REQUIRE(r && out);
  return guard([&] {
    if (margin < 0) throw setavg::InvalidArgumentError("margin must be non-negative");
    *out = wrap(setavg::pad(r->r, margin));
    return SA_OK;
  });
}

sa_status sa_raster_crop_to(const sa_raster* r, const sa_geometry* target, sa_raster** out) {
  SA_REQUIRE(r && target && out);
  return guard([&] {
    *out = wrap(setavg::crop_to_geometry(r->r, to_geometry(*target)));
    return SA_OK;
  });
}

sa_status sa_pnm_load(const char* path, int threshold, sa_raster** out) {
  SA_REQUIRE(path && out);
  return guard([&] {
    *out = wrap(setavg::read_pnm(path, threshold));
    return SA_OK;
  });
}

sa_status sa_pnm_save(const sa_raster* r, const char* path, const char* format) {
  SA_REQUIRE(r && path);
  return guard([&] {
    setavg::write_pnm(path, r->r, setavg::parse_pnm_format(format ? format : "P5"));
    return SA_OK;
  });
}

sa_status sa_average(const sa_raster* a, const sa_raster* b, double t, const sa_config* config,
                     sa_raster** out, sa_average_report* report) {
  SA_REQUIRE(a && b && out);
  return guard([&] {
    const auto opts = to_config(config).average_options();
    auto res = setavg::general_average(a->r, b->r, t, opts);
    if (report != nullptr) {
      const auto& r = res.report;
      *report = {r.requested_target, r.achieved_measure, r.clamped,  r.fallback_used,
                 r.extrapolated,     r.components,       r.sub_averages, r.cell_area,
                 r.budget()};
    }
    *out = wrap(std::move(res.set));
    return SA_OK;
  });
}

sa_status sa_extrapolation_margin(const sa_raster* a, const sa_raster* b, double t, int* margin) {
  SA_REQUIRE(a && b && margin);
  return guard([&] {
    if (a->r.empty() || b->r.empty()) {
      // The larger set alone bounds the growth.
      const auto& s = a->r.empty() ? b->r : a->r;
      const auto box = setavg::content_bounds(s);
      const double extent = std::max(box.width, box.height);
      *margin = (t >= 0.0 && t <= 1.0) || s.empty()
                    ? 0
                    : static_cast<int>(std::ceil(std::abs(t) * extent));
    } else {
      *margin = setavg::extrapolation_margin(a->r, b->r, t);
    }
    return SA_OK;
  });
}

sa_status sa_seq_create(double first_position, double spacing, sa_seq** out) {
  SA_REQUIRE(out);
  return guard([&] {
    if (!(spacing > 0.0)) throw setavg::InvalidArgumentError("spacing must be positive");
    setavg::SetSeq s;
    s.spacing = spacing;
    *out = new sa_seq{std::move(s), first_position};
    return SA_OK;
  });
}

void sa_seq_free(sa_seq* s) { delete s; }

sa_status sa_seq_push(sa_seq* s, const sa_raster* r) {
  SA_REQUIRE(s && r);
  return guard([&] {
    if (!s->s.sets.empty()) setavg::require_combinable(s->s.sets.front(), r->r);
    const double pos = s->s.positions.empty() ? s->first : s->s.positions.back() + s->s.spacing;
    s->s.sets.push_back(r->r);
    s->s.positions.push_back(pos);
    s->s.measure_bound.push_back(0.0);
    return SA_OK;
  });
}

size_t sa_seq_size(const sa_seq* s) { return s ? s->s.size() : 0; }

sa_status sa_seq_get(const sa_seq* s, size_t i, sa_raster** out) {
  SA_REQUIRE(s && out);
  if (i >= s->s.size()) return fail(SA_ERR_INVALID, "sequence index out of range");
  return guard([&] {
    *out = wrap(s->s.sets[i]);
    return SA_OK;
  });
}

sa_status sa_seq_position(const sa_seq* s, size_t i, double* position) {
  SA_REQUIRE(s && position);
  if (i >= s->s.size()) return fail(SA_ERR_INVALID, "sequence index out of range");
  *position = s->s.positions[i];
  return SA_OK;
}

sa_status sa_seq_info_get(const sa_seq* s, sa_seq_info* info) {
  SA_REQUIRE(s && info);
  *info = {s->s.level, s->s.spacing, s->s.clamped_averages, s->s.midpoint_insertions,
           s->s.warnings.size()};
  return SA_OK;
}

const char* sa_seq_warning(const sa_seq* s, size_t i) {
  if (s == nullptr || i >= s->s.warnings.size()) return nullptr;
  return s->s.warnings[i].c_str();
}

sa_status sa_seq_max_distance(const sa_seq* s, double* d) {
  SA_REQUIRE(s && d);
  return guard([&] {
    *d = setavg::max_consecutive_distance(s->s);
    return SA_OK;
  });
}

sa_status sa_subdivide(const sa_seq* in, const sa_config* config, sa_seq** out) {
  SA_REQUIRE(in && out);
  return guard([&] {
    *out = wrap(setavg::subdivide(in->s, to_config(config)));
    return SA_OK;
  });
}

sa_status sa_subdivide_history(const sa_seq* in, const sa_config* config, sa_seq** levels) {
  SA_REQUIRE(in && levels);
  return guard([&] {
    auto history = setavg::subdivide_history(in->s, to_config(config));
    for (std::size_t k = 0; k < history.size(); ++k) levels[k] = wrap(std::move(history[k]));
    return SA_OK;
  });
}

sa_status sa_interpolate(const sa_seq* in, int count, const sa_config* config, sa_seq** out) {
  SA_REQUIRE(in && out);
  return guard([&] {
    *out = wrap(setavg::interpolate_between(in->s, count, to_config(config).average_options()));
    return SA_OK;
  });
}

sa_status sa_eval(const sa_seq* in, double x, const sa_config* config, sa_raster** out) {
  SA_REQUIRE(in && out);
  return guard([&] {
    *out = wrap(setavg::eval_interpolant(in->s, x, to_config(config).average_options()));
    return SA_OK;
  });
}

sa_status sa_stack_load(const char* pattern, int threshold, int first, int count, sa_seq** out) {
  SA_REQUIRE(pattern && out);
  return guard([&] {
    auto stack = setavg::load_stack(pattern, threshold, first, count);
    *out = new sa_seq{setavg::SetSeq::uniform(std::move(stack.slices), 0.0, stack.spacing), 0.0};
    return SA_OK;
  });
}

sa_status sa_fixture_defaults(const char* name, sa_fixture_params* params) {
  SA_REQUIRE(name && params);
  return guard([&] {
    const auto p = setavg::fixture_defaults(name);
    *params = {p.x0, p.spacing, p.count, p.geometry.is_1d() ? p.geometry.width : p.geometry.height};
    return SA_OK;
  });
}

sa_status sa_fixture(const char* name, const sa_fixture_params* params, sa_seq** out) {
  SA_REQUIRE(name && out);
  return guard([&] {
    const auto p = fixture_params(name, params);
    *out = new sa_seq{setavg::SetSeq::uniform(setavg::fixture_stack(name, p), p.x0, p.spacing),
                      p.x0};
    return SA_OK;
  });
}

sa_status sa_verify(uint64_t seed, int size, int trials, int inject_fault, char** json) {
  SA_REQUIRE(json);
  return guard([&] {
    setavg::VerifyOptions opts;
    opts.seed = seed;
    opts.size = size;
    opts.trials = trials;
    opts.inject_fault = inject_fault != 0;
    const auto report = setavg::run_verify(opts);
    const std::string text = report.to_json();
    char* buf = static_cast<char*>(std::malloc(text.size() + 1));
    if (buf == nullptr) throw std::bad_alloc();
    std::memcpy(buf, text.c_str(), text.size() + 1);
    *json = buf;
    if (!report.passed()) return fail(SA_ERR_VERIFY, "verification failed");
    return SA_OK;
  });
}

}  // extern "C"
