#pragma once

#include <string>
#include <utility>
#include <vector>

#include "setavg/measure_average.hpp"
#include "setavg/raster.hpp"

namespace setavg {

enum class Scheme { Piecewise, Spline, FourPoint };

enum class Boundary {
  OpenEnds,    // end rules for Chaikin and the 4-point scheme
  BiInfinite,  // constant extension of the end sets
};

struct SchemeConfig {
  Scheme scheme = Scheme::Spline;
  int degree = 2;               // spline degree m; 2 is Chaikin
  double tension = 1.0 / 16.0;  // 4-point tension w
  int levels = 1;
  Connectivity connectivity = Connectivity::OrthogonalDiagonal;
  double param_bound = 8.0;
  Boundary boundary = Boundary::OpenEnds;

  AverageOptions average_options() const {
    AverageOptions o;
    o.connectivity = connectivity;
    o.param_bound = param_bound;
    return o;
  }
};

// Sets attached to increasing parameter positions at refinement level k.
struct SetSeq {
  std::vector<Raster> sets;
  std::vector<double> positions;
  int level = 0;
  double spacing = 1.0;  // nominal spacing, halves per level
  // Propagated bound on |mu(set) - real-valued rule applied to the input
  // measures|. Infinite for sets produced by extrapolating averages.
  std::vector<double> measure_bound;
  std::size_t clamped_averages = 0;
  std::size_t midpoint_insertions = 0;  // 4-point end insertions
  std::vector<std::string> warnings;

  static SetSeq uniform(std::vector<Raster> sets, double first_position, double spacing);
  std::size_t size() const { return sets.size(); }
  // Throws InvalidArgumentError / GridMismatchError on broken invariants.
  void validate() const;
};

// Piecewise measure-average interpolant through the sequence at x.
Raster eval_interpolant(const SetSeq& seq, double x, const AverageOptions& options = {});
Raster piecewise_eval(const SetSeq& seq, double x, const SchemeConfig& cfg);

// One Lane-Riesenfeld level: doubling with midpoint averages, then m-1
// midpoint sweeps.
SetSeq spline_refine(const SetSeq& seq, int degree, const SchemeConfig& cfg);

// One level of the interpolatory 4-point scheme with tension w.
SetSeq fourpoint_refine(const SetSeq& seq, double tension, const SchemeConfig& cfg);

SetSeq refine_once(const SetSeq& seq, const SchemeConfig& cfg);
SetSeq subdivide(const SetSeq& seq, const SchemeConfig& cfg);
// Level 0 (the input) through level cfg.levels.
std::vector<SetSeq> subdivide_history(const SetSeq& seq, const SchemeConfig& cfg);

// Inserts `count` equally spaced measure averages between consecutive sets.
SetSeq interpolate_between(const SetSeq& seq, int count, const AverageOptions& options = {});

double max_consecutive_distance(const SetSeq& seq);
std::vector<double> dk_sequence(const std::vector<SetSeq>& history);

std::vector<std::pair<double, double>> measure_curve(const SetSeq& seq, int samples,
                                                     const AverageOptions& options = {});

// d_mu(F(x - eps), F(x + eps)) / (2 eps) on the piecewise interpolant.
double velocity_estimate(const SetSeq& seq, double x, double eps,
                         const AverageOptions& options = {});

// Real-valued counterparts, used for measure transfer diagnostics.
std::vector<double> spline_refine_values(const std::vector<double>& values, int degree,
                                         Boundary boundary);
std::vector<double> fourpoint_refine_values(const std::vector<double>& values, double tension,
                                            Boundary boundary);

}  // namespace setavg
