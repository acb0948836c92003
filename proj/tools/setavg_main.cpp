// setavg command line front end. Talks to the library through the C API only.
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "setavg/setavg.h"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

enum Exit { kOk = 0, kFailure = 1, kClipping = 2, kIo = 3, kUsage = 4, kVerify = 5 };

struct CliError {
  int code;
  std::string message;
};

int exit_code(sa_status s) {
  switch (s) {
    case SA_OK: return kOk;
    case SA_ERR_CLIPPING: return kClipping;
    case SA_ERR_IO:
    case SA_ERR_GRID: return kIo;
    case SA_ERR_INVALID:
    case SA_ERR_USAGE: return kUsage;
    case SA_ERR_VERIFY: return kVerify;
    default: return kFailure;
  }
}

void check(sa_status s) {
  if (s != SA_OK) throw CliError{exit_code(s), sa_last_error()};
}

struct RasterDel {
  void operator()(sa_raster* r) const { sa_raster_free(r); }
};
struct SeqDel {
  void operator()(sa_seq* s) const { sa_seq_free(s); }
};
using RasterPtr = std::unique_ptr<sa_raster, RasterDel>;
using SeqPtr = std::unique_ptr<sa_seq, SeqDel>;

struct Options {
  double t = 0.5;
  std::string scheme = "chaikin";
  int degree = 2;
  double w = 0.0625;
  int levels = 1;
  int connectivity = 8;
  double param_bound = 8.0;
  std::string pad = "auto";
  int threshold = 127;
  std::uint64_t seed = 1;
  std::string out_dir = ".";
  int between = 1;
  double spacing = 1.0;
  std::string format = "pgm";
  std::string boundary = "open";
};

sa_config make_config(const Options& o) {
  sa_config c;
  sa_config_default(&c);
  const std::string& s = o.scheme;
  if (s == "piecewise") {
    c.scheme = SA_SCHEME_PIECEWISE;
  } else if (s == "chaikin") {
    c.scheme = SA_SCHEME_SPLINE;
    c.degree = 2;
  } else if (s == "fourpoint") {
    c.scheme = SA_SCHEME_FOURPOINT;
  } else if (s == "spline-m" || s.rfind("spline-", 0) == 0) {
    c.scheme = SA_SCHEME_SPLINE;
    c.degree = o.degree;
    if (s != "spline-m") {
      try {
        c.degree = std::stoi(s.substr(7));
      } catch (const std::exception&) {
        throw CliError{kUsage, "bad scheme " + s};
      }
    }
  } else {
    throw CliError{kUsage, "unknown scheme " + s};
  }
  if (c.degree < 1) throw CliError{kUsage, "--degree must be at least 1"};
  if (o.levels < 0) throw CliError{kUsage, "--levels must be non-negative"};
  if (o.connectivity != 4 && o.connectivity != 8) {
    throw CliError{kUsage, "--connectivity must be 4 or 8"};
  }
  if (!(o.param_bound > 1.0)) throw CliError{kUsage, "--param-bound must exceed 1"};
  c.tension = o.w;
  c.levels = o.levels;
  c.connectivity = o.connectivity;
  c.param_bound = o.param_bound;
  if (o.boundary == "open") {
    c.boundary = SA_BOUNDARY_OPEN;
  } else if (o.boundary == "biinfinite") {
    c.boundary = SA_BOUNDARY_BIINFINITE;
  } else {
    throw CliError{kUsage, "unknown boundary " + o.boundary};
  }
  return c;
}

// "auto" or a non-negative cell count.
std::optional<int> explicit_pad(const std::string& pad) {
  if (pad == "auto") return std::nullopt;
  try {
    std::size_t used = 0;
    const int n = std::stoi(pad, &used);
    if (used == pad.size() && n >= 0) return n;
  } catch (const std::exception&) {
  }
  throw CliError{kUsage, "--pad takes auto or a cell count"};
}

const char* pnm_format(const std::string& f) {
  if (f == "pgm") return "P5";
  if (f == "pbm") return "P4";
  throw CliError{kUsage, "--format must be pgm or pbm"};
}

RasterPtr load(const std::string& path, int threshold) {
  sa_raster* r = nullptr;
  check(sa_pnm_load(path.c_str(), threshold, &r));
  return RasterPtr(r);
}

RasterPtr pad(const sa_raster* r, int margin) {
  sa_raster* out = nullptr;
  check(sa_raster_pad(r, margin, &out));
  return RasterPtr(out);
}

sa_geometry geometry(const sa_raster* r) {
  sa_geometry g;
  check(sa_raster_geometry(r, &g));
  return g;
}

// Returns the raster on `target` if it fits, nullptr otherwise.
RasterPtr try_crop(const sa_raster* r, const sa_geometry& target) {
  sa_raster* out = nullptr;
  const sa_status s = sa_raster_crop_to(r, &target, &out);
  if (s == SA_ERR_CLIPPING) return nullptr;
  check(s);
  return RasterPtr(out);
}

json report_json(const sa_average_report& r) {
  return {{"requested_target", r.requested_target},
          {"achieved_measure", r.achieved_measure},
          {"clamped", r.clamped != 0},
          {"fallback_used", r.fallback_used != 0},
          {"extrapolated", r.extrapolated != 0},
          {"components", r.components},
          {"sub_averages", r.sub_averages},
          {"budget", r.budget}};
}

std::string slice_name(std::size_t i, std::size_t total, const std::string& format) {
  const int digits = std::max<int>(3, static_cast<int>(std::to_string(total - 1).size()));
  char buf[64];
  std::snprintf(buf, sizeof buf, "slice_%0*zu.%s", digits, i, format.c_str());
  return buf;
}

SeqPtr seq_from(std::vector<RasterPtr>& rasters, double first, double spacing) {
  sa_seq* s = nullptr;
  check(sa_seq_create(first, spacing, &s));
  SeqPtr seq(s);
  for (auto& r : rasters) check(sa_seq_push(seq.get(), r.get()));
  return seq;
}

std::vector<RasterPtr> seq_rasters(const sa_seq* s) {
  std::vector<RasterPtr> out;
  for (std::size_t i = 0; i < sa_seq_size(s); ++i) {
    sa_raster* r = nullptr;
    check(sa_seq_get(s, i, &r));
    out.emplace_back(r);
  }
  return out;
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw CliError{kIo, dir + ": " + ec.message()};
}

void write_slices(const std::vector<RasterPtr>& rasters, const std::string& dir,
                  const std::string& format) {
  ensure_dir(dir);
  const std::string ext = format == "pbm" ? "pbm" : "pgm";
  for (std::size_t i = 0; i < rasters.size(); ++i) {
    const std::string path = (fs::path(dir) / slice_name(i, rasters.size(), ext)).string();
    check(sa_pnm_save(rasters[i].get(), path.c_str(), pnm_format(format)));
  }
}

std::ofstream open_csv(const std::string& dir, const std::string& name) {
  const std::string path = (fs::path(dir) / name).string();
  std::ofstream out(path);
  if (!out) throw CliError{kIo, path + ": cannot open for writing"};
  out.precision(17);
  return out;
}

SeqPtr load_stack(const std::string& pattern, const Options& o) {
  sa_seq* s = nullptr;
  check(sa_stack_load(pattern.c_str(), o.threshold, 0, -1, &s));
  SeqPtr raw(s);
  auto rasters = seq_rasters(raw.get());
  return seq_from(rasters, 0.0, o.spacing);
}

// Pads every set of the stack by `margin` cells.
SeqPtr padded(const sa_seq* in, int margin, double spacing) {
  auto rasters = seq_rasters(in);
  for (auto& r : rasters) r = pad(r.get(), margin);
  double first = 0.0;
  check(sa_seq_position(in, 0, &first));
  return seq_from(rasters, first, spacing);
}

// Runs `op` on the stack, growing the padding while the result clips when
// --pad is auto, then crops back to the input grid where everything fits.
template <typename Op>
std::vector<SeqPtr> run_padded(const sa_seq* in, const Options& o, Op op, int& margin_used) {
  const auto fixed = explicit_pad(o.pad);
  sa_raster* first = nullptr;
  check(sa_seq_get(in, 0, &first));
  RasterPtr first_ptr(first);
  const sa_geometry g0 = geometry(first);
  int margin = fixed.value_or(0);
  for (;;) {
    try {
      SeqPtr work = margin > 0 ? padded(in, margin, o.spacing) : nullptr;
      std::vector<SeqPtr> result = op(work ? work.get() : in);
      margin_used = margin;
      if (fixed || margin == 0) return result;
      // Crop back if every set fits the original grid.
      std::vector<SeqPtr> cropped;
      for (auto& s : result) {
        auto rasters = seq_rasters(s.get());
        for (auto& r : rasters) {
          r = try_crop(r.get(), g0);
          if (!r) return result;
        }
        double p0 = 0.0;
        check(sa_seq_position(s.get(), 0, &p0));
        sa_seq_info info;
        check(sa_seq_info_get(s.get(), &info));
        cropped.push_back(seq_from(rasters, p0, info.spacing));
      }
      margin_used = 0;
      return cropped;
    } catch (const CliError& e) {
      if (e.code != kClipping || fixed || margin >= 256) throw;
      margin = margin == 0 ? 8 : 2 * margin;
    }
  }
}

int cmd_average(const std::string& path_a, const std::string& path_b, const std::string& out,
                const Options& o) {
  const sa_config cfg = make_config(o);
  RasterPtr a = load(path_a, o.threshold);
  RasterPtr b = load(path_b, o.threshold);
  const sa_geometry ga = geometry(a.get());
  const sa_geometry gb = geometry(b.get());
  if (ga.width != gb.width || ga.height != gb.height) {
    throw CliError{kIo, path_b + ": dimensions differ from " + path_a};
  }
  const auto fixed = explicit_pad(o.pad);
  int margin = 0;
  if (fixed) {
    margin = *fixed;
  } else {
    check(sa_extrapolation_margin(a.get(), b.get(), o.t, &margin));
  }

  sa_average_report report{};
  RasterPtr result;
  for (;;) {
    RasterPtr pa = pad(a.get(), margin);
    RasterPtr pb = pad(b.get(), margin);
    sa_raster* r = nullptr;
    const sa_status s = sa_average(pa.get(), pb.get(), o.t, &cfg, &r, &report);
    if (s == SA_ERR_CLIPPING && !fixed && margin < 4096) {
      margin = std::max(8, 2 * margin);
      continue;
    }
    check(s);
    result.reset(r);
    break;
  }
  int written_margin = margin;
  if (!fixed && margin > 0) {
    if (RasterPtr cropped = try_crop(result.get(), ga)) {
      result = std::move(cropped);
      written_margin = 0;
    }
  }
  check(sa_pnm_save(result.get(), out.c_str(), pnm_format(o.format)));

  json line = {{"command", "average"}, {"t", o.t}, {"output", out}, {"pad", written_margin}};
  line.update(report_json(report));
  std::cout << line.dump() << '\n';
  return kOk;
}

void write_tables(const std::vector<SeqPtr>& history, const std::string& dir) {
  std::ofstream measures = open_csv(dir, "measures.csv");
  std::ofstream dk = open_csv(dir, "dk.csv");
  measures << "level,index,position,measure\n";
  dk << "level,d_k\n";
  for (std::size_t k = 0; k < history.size(); ++k) {
    const sa_seq* s = history[k].get();
    for (std::size_t i = 0; i < sa_seq_size(s); ++i) {
      sa_raster* r = nullptr;
      check(sa_seq_get(s, i, &r));
      RasterPtr rp(r);
      double pos = 0.0;
      double m = 0.0;
      check(sa_seq_position(s, i, &pos));
      check(sa_raster_measure(r, &m));
      measures << k << ',' << i << ',' << pos << ',' << m << '\n';
    }
    double d = 0.0;
    check(sa_seq_max_distance(s, &d));
    dk << k << ',' << d << '\n';
  }
}

json seq_summary(const sa_seq* s) {
  sa_seq_info info;
  check(sa_seq_info_get(s, &info));
  json warnings = json::array();
  for (std::size_t i = 0; i < info.warnings; ++i) warnings.push_back(sa_seq_warning(s, i));
  return {{"level", info.level},
          {"sets", sa_seq_size(s)},
          {"spacing", info.spacing},
          {"clamped_averages", info.clamped_averages},
          {"midpoint_insertions", info.midpoint_insertions},
          {"warnings", warnings}};
}

int cmd_subdivide(const std::string& pattern, const Options& o) {
  const sa_config cfg = make_config(o);
  SeqPtr in = load_stack(pattern, o);
  int margin = 0;
  auto history = run_padded(in.get(), o, [&](const sa_seq* s) {
    std::vector<sa_seq*> raw(static_cast<std::size_t>(cfg.levels) + 1, nullptr);
    check(sa_subdivide_history(s, &cfg, raw.data()));
    std::vector<SeqPtr> out;
    for (auto* p : raw) out.emplace_back(p);
    return out;
  }, margin);
  const sa_seq* last = history.back().get();
  write_slices(seq_rasters(last), o.out_dir, o.format);
  write_tables(history, o.out_dir);
  json line = {{"command", "subdivide"}, {"scheme", o.scheme}, {"levels", cfg.levels},
               {"input_sets", sa_seq_size(in.get())}, {"pad", margin}};
  line.update(seq_summary(last));
  std::cout << line.dump() << '\n';
  for (std::size_t i = 0; i < line["warnings"].size(); ++i) {
    std::cerr << "warning: " << line["warnings"][i].get<std::string>() << '\n';
  }
  return kOk;
}

int cmd_interpolate(const std::string& pattern, const Options& o) {
  const sa_config cfg = make_config(o);
  if (o.between < 1) throw CliError{kUsage, "--between must be at least 1"};
  SeqPtr in = load_stack(pattern, o);
  int margin = 0;
  auto result = run_padded(in.get(), o, [&](const sa_seq* s) {
    sa_seq* out = nullptr;
    check(sa_interpolate(s, o.between, &cfg, &out));
    std::vector<SeqPtr> v;
    v.emplace_back(out);
    return v;
  }, margin);
  std::vector<SeqPtr> history;
  history.push_back(std::move(in));
  history.push_back(std::move(result.front()));
  write_slices(seq_rasters(history.back().get()), o.out_dir, o.format);
  write_tables(history, o.out_dir);
  json line = {{"command", "interpolate"}, {"between", o.between},
               {"sets", sa_seq_size(history.back().get())}, {"pad", margin}};
  std::cout << line.dump() << '\n';
  return kOk;
}

int cmd_verify(const Options& o, int size, int trials, bool fault) {
  char* text = nullptr;
  const sa_status s = sa_verify(o.seed, size, trials, fault ? 1 : 0, &text);
  if (text != nullptr) {
    std::cout << text << '\n';
    sa_string_free(text);
  }
  if (s == SA_ERR_VERIFY) return kVerify;
  check(s);
  return kOk;
}

int cmd_fixture(const std::string& name, const Options& o, int cells, int count, double x0,
                double spacing) {
  sa_fixture_params p;
  check(sa_fixture_defaults(name.c_str(), &p));
  if (cells > 0) p.cells = cells;
  if (count > 0) p.count = count;
  if (!std::isnan(x0)) p.x0 = x0;
  if (spacing > 0.0) p.spacing = spacing;
  sa_seq* s = nullptr;
  check(sa_fixture(name.c_str(), &p, &s));
  SeqPtr seq(s);
  write_slices(seq_rasters(seq.get()), o.out_dir, o.format);
  std::vector<SeqPtr> history;
  history.push_back(std::move(seq));
  write_tables(history, o.out_dir);
  json line = {{"command", "fixture"}, {"name", name}, {"sets", p.count},
               {"x0", p.x0}, {"spacing", p.spacing}, {"cells", p.cells}};
  std::cout << line.dump() << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Measure averages and set-valued subdivision on binary rasters"};
  app.require_subcommand(1);
  Options o;

  auto common = [&o](CLI::App* c) {
    c->add_option("--connectivity", o.connectivity, "4 or 8");
    c->add_option("--param-bound", o.param_bound, "reparametrisation bound N");
    c->add_option("--pad", o.pad, "auto or a cell count");
    c->add_option("--threshold", o.threshold, "PGM pixels above this are in the set");
    c->add_option("--format", o.format, "output image format: pgm or pbm");
  };
  auto stack_opts = [&o](CLI::App* c) {
    c->add_option("--out-dir", o.out_dir, "output directory");
    c->add_option("--spacing", o.spacing, "distance between input slices");
  };

  std::string path_a, path_b, out_path = "average.pgm";
  auto* avg = app.add_subcommand("average", "average two images");
  avg->add_option("a", path_a, "set A (weight t)")->required();
  avg->add_option("b", path_b, "set B (weight 1-t)")->required();
  avg->add_option("--t", o.t, "averaging parameter");
  avg->add_option("-o,--output", out_path, "output image");
  common(avg);

  std::string pattern;
  auto* sub = app.add_subcommand("subdivide", "refine a slice stack");
  sub->add_option("pattern", pattern, "input pattern such as in/slice_%03d.pgm")->required();
  sub->add_option("--scheme", o.scheme, "piecewise, chaikin, spline-m or fourpoint");
  sub->add_option("--degree", o.degree, "spline degree for spline-m");
  sub->add_option("--w", o.w, "4-point tension");
  sub->add_option("--levels", o.levels, "refinement levels");
  sub->add_option("--boundary", o.boundary, "open or biinfinite");
  common(sub);
  stack_opts(sub);

  auto* interp = app.add_subcommand("interpolate", "insert averages between slices");
  interp->add_option("pattern", pattern, "input pattern")->required();
  interp->add_option("--between", o.between, "sets inserted between neighbours");
  common(interp);
  stack_opts(interp);

  int size = 32, trials = 12;
  bool fault = false;
  auto* ver = app.add_subcommand("verify", "run the property suite");
  ver->add_option("--seed", o.seed, "corpus seed");
  ver->add_option("--size", size, "grid side of the random corpus");
  ver->add_option("--trials", trials, "pairs per class");
  ver->add_flag("--inject-fault", fault, "perturb the tie-break");

  std::string name;
  int cells = 0, count = 0;
  double x0 = std::nan(""), fix_spacing = 0.0;
  auto* fix = app.add_subcommand("fixture", "write a built-in slice stack");
  fix->add_option("name", name, "example11, disk, kinked, constant or nested")->required();
  fix->add_option("--cells", cells, "grid resolution");
  fix->add_option("--count", count, "number of slices");
  fix->add_option("--x0", x0, "first parameter");
  fix->add_option("--spacing", fix_spacing, "parameter spacing");
  fix->add_option("--out-dir", o.out_dir, "output directory");
  fix->add_option("--format", o.format, "pgm or pbm");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*avg) return cmd_average(path_a, path_b, out_path, o);
    if (*sub) return cmd_subdivide(pattern, o);
    if (*interp) return cmd_interpolate(pattern, o);
    if (*ver) return cmd_verify(o, size, trials, fault);
    if (*fix) return cmd_fixture(name, o, cells, count, x0, fix_spacing);
  } catch (const CliError& e) {
    std::cerr << "setavg: " << e.message << '\n';
    return e.code;
  }
  return kUsage;
}
