#pragma once

#include <string>
#include <vector>

#include "setavg/raster.hpp"

namespace setavg {

struct SliceStack {
  std::vector<Raster> slices;
  double spacing = 1.0;
  std::string source_pattern;
};

// Expands a pattern with exactly one integer conversion such as
// "slice_%03d.pgm". Throws InvalidArgumentError otherwise.
std::string format_pattern(const std::string& pattern, int index);

// Loads slices first, first+1, ... . With count < 0 loading stops at the
// first missing index; otherwise every index in range must exist. Throws
// IoError naming the file on missing files, bad magic numbers and size
// mismatches.
SliceStack load_stack(const std::string& pattern, int threshold = 127, int first = 0,
                      int count = -1);

}  // namespace setavg
