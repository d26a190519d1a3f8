#pragma once

#include "qvortex/grid.hpp"

#include <string>

namespace qvx {

// QVG1 grid file, little-endian:
//   magic "QVG1" | u32 version=1 | u32 nx,ny,nz | f64 origin[3] | f64 spacing[3]
//   | u8 dtype (0 = interleaved complex f64) | payload nx*ny*nz (re,im) pairs,
//   row-major, x fastest.
// Round-trips are bit-exact for finite values.

void write_grid(const ComplexGrid3& g, const std::string& path);
ComplexGrid3 read_grid(const std::string& path);

}  // namespace qvx
