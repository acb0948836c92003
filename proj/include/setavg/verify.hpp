#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "setavg/measure_average.hpp"
#include "setavg/raster.hpp"

namespace setavg {

// Small deterministic generator, identical on every platform.
class SplitMix {
 public:
  explicit SplitMix(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  // Uniform integer in [lo, hi].
  int uniform_int(int lo, int hi);
  // Uniform real in [lo, hi).
  double uniform(double lo, double hi);

 private:
  std::uint64_t state_;
};

enum class PairClass { Nested, General, Disjoint };

const char* pair_class_name(PairClass c);

// Union of a few random disks and rectangles whose cells stay inside the
// central half of the grid, so moderate extrapolation does not clip.
Raster random_blob(SplitMix& rng, const Geometry& g);

// A random pair of the given class. Nested pairs return (A, B) with B ⊆ A.
std::pair<Raster, Raster> random_pair(SplitMix& rng, PairClass c, const Geometry& g);

struct VerifyOptions {
  std::uint64_t seed = 1;
  int size = 32;    // grid side for the random corpus
  int trials = 12;  // pairs per class
  bool fixtures = true;
  bool inject_fault = false;  // perturbed tie-break
  AverageOptions average;
};

struct PropertyResult {
  std::string name;
  std::size_t cases = 0;
  std::size_t failures = 0;
  double max_deviation = 0.0;
  double budget = 0.0;  // budget at the case with the largest deviation
  std::string first_failure;

  bool pass() const { return failures == 0; }
};

struct VerifyReport {
  std::uint64_t seed = 0;
  std::vector<PropertyResult> properties;
  std::vector<AverageReport> trail;  // reports of failing averages

  bool passed() const;
  std::string to_json() const;
};

VerifyReport run_verify(const VerifyOptions& options);

}  // namespace setavg
