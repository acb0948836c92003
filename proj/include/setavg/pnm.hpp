#pragma once

#include <string>

#include "setavg/raster.hpp"

namespace setavg {

enum class PnmFormat { P1, P2, P4, P5 };

// Reads P1/P2/P4/P5. PGM pixels above `threshold` are in the set, PBM pixels
// equal to 1 (black) are in the set. File row r becomes raster row y = r.
// The geometry gets cell size 1 and origin (0, 0).
Raster read_pnm(const std::string& path, int threshold = 127);

// PGM writes 255 for set cells and 0 otherwise; PBM writes 1 for set cells.
void write_pnm(const std::string& path, const Raster& r, PnmFormat format = PnmFormat::P5);

PnmFormat parse_pnm_format(const std::string& name);

}  // namespace setavg
