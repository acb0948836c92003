#pragma once

#include <cstddef>
#include <vector>

#include "setavg/raster.hpp"

namespace setavg {

struct AverageOptions {
  Connectivity connectivity = Connectivity::OrthogonalDiagonal;
  // Bound N of the reparametrisation range [-N, N].
  double param_bound = 8.0;
  // Fault injection for the verification harness: makes the tie-break depend
  // on t, which breaks prefix nesting across parameters. Never set in normal use.
  bool perturb_tie_break = false;
};

// One cell whose membership flips inside (-N, N].
struct Crossing {
  double threshold = 0.0;
  // Distance to B in cells (distance to the centre cell q when B is empty).
  double distance_to_b = 0.0;
  std::size_t cell = 0;
};

// Measure of the distance average x A (+) (1-x) B as a step function of x on
// [-N, N], for nested B ⊆ A. The sorted crossing list turns the family into
// prefixes: the set at level k is floor_set plus the first k crossings.
struct HCurve {
  Raster floor_set;  // members at x = -N
  std::vector<Crossing> crossings;
  double cell_area = 1.0;
  double bound = 8.0;

  double floor_measure() const { return measure(floor_set); }
  double ceiling_measure() const {
    return floor_measure() + cell_area * static_cast<double>(crossings.size());
  }
  // h(x), with x clamped to [-N, N].
  double operator()(double x) const;
  Raster prefix(std::size_t k) const;
};

HCurve h_curve(const Raster& a, const Raster& b, double param_bound = 8.0,
               const AverageOptions& options = {});

struct AverageReport {
  double requested_target = 0.0;  // t mu(A) + (1-t) mu(B)
  double achieved_measure = 0.0;
  bool clamped = false;        // target outside [h(-N), h(N)] in some sub-average
  bool fallback_used = false;  // a tie group of equal thresholds was split
  bool extrapolated = false;   // t outside [0, 1]
  std::size_t components = 0;
  std::size_t sub_averages = 0;  // simply-different averages performed
  double cell_area = 1.0;

  // Allowed |achieved - target| for t in [0, 1].
  double budget() const { return 0.5 * cell_area * static_cast<double>(sub_averages); }
};

struct AverageResult {
  Raster set;
  AverageReport report;
};

// Measure average of simply different B ⊆ A (A \ B has at most one
// component). B may be empty. Throws NotNestedError, NotSimplyDifferentError,
// ClippingError.
AverageResult simply_diff_average(const Raster& a, const Raster& b, double t,
                                  const AverageOptions& options = {});

// B plus the cells of A \ B nearest to B, as many as the target measure asks
// for. Requires non-empty B ⊆ A and t in [0, 1].
Raster offset_average(const Raster& a, const Raster& b, double t);

// Per-component measure average of nested B ⊆ A, merged by union (t >= 0) or
// intersection (t < 0).
AverageResult nested_average(const Raster& a, const Raster& b, double t,
                             const AverageOptions& options = {});

// Measure average of arbitrary A, B; parameter t weights A.
AverageResult general_average(const Raster& a, const Raster& b, double t,
                              const AverageOptions& options = {});

struct MetricCheck {
  double measured = 0.0;   // d_mu(avg_s, avg_t)
  double predicted = 0.0;  // |t - s| d_mu(A, B)
  double deviation = 0.0;  // measured - predicted
  double budget = 0.0;     // measure budget of the averages involved
  bool metric_ok = false;     // |deviation| <= 2 budget
  bool submetric_ok = false;  // deviation <= 2 budget
};

MetricCheck metric_property_check(const Raster& a, const Raster& b, double s, double t,
                                  const AverageOptions& options = {});

}  // namespace setavg
