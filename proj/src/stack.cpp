#include "setavg/stack.hpp"

#include <cstdio>
#include <filesystem>
#include <regex>

#include "setavg/error.hpp"
#include "setavg/pnm.hpp"

namespace setavg {

std::string format_pattern(const std::string& pattern, int index) {
  static const std::regex conversion("%0?[0-9]*d");
  std::size_t found = 0;
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    if (pattern[i] != '%') continue;
    if (i + 1 < pattern.size() && pattern[i + 1] == '%') {
      ++i;
      continue;
    }
    std::smatch m;
    const std::string rest = pattern.substr(i);
    if (!std::regex_search(rest, m, conversion, std::regex_constants::match_continuous)) {
      throw InvalidArgumentError("unsupported conversion in pattern " + pattern);
    }
    ++found;
  }
  if (found != 1) {
    throw InvalidArgumentError("pattern needs exactly one integer placeholder: " + pattern);
  }
  const int n = std::snprintf(nullptr, 0, pattern.c_str(), index);
  std::string out(static_cast<std::size_t>(n) + 1, '\0');
  std::snprintf(out.data(), out.size(), pattern.c_str(), index);
  out.resize(static_cast<std::size_t>(n));
  return out;
}

SliceStack load_stack(const std::string& pattern, int threshold, int first, int count) {
  SliceStack stack;
  stack.source_pattern = pattern;
  for (int i = first; count < 0 || i < first + count; ++i) {
    const std::string path = format_pattern(pattern, i);
    if (!std::filesystem::exists(path)) {
      if (count < 0) break;
      throw IoError(path + ": missing slice");
    }
    Raster r = read_pnm(path, threshold);
    if (!stack.slices.empty() && (r.width() != stack.slices[0].width() ||
                                  r.height() != stack.slices[0].height())) {
      throw IoError(path + ": dimensions " + std::to_string(r.width()) + "x" +
                    std::to_string(r.height()) + " differ from " +
                    std::to_string(stack.slices[0].width()) + "x" +
                    std::to_string(stack.slices[0].height()));
    }
    stack.slices.push_back(std::move(r));
  }
  if (stack.slices.empty()) throw IoError(format_pattern(pattern, first) + ": missing slice");
  return stack;
}

}  // namespace setavg
