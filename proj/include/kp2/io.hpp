#pragma once

#include <string>
#include <vector>

#include "kp2/types.hpp"

// KPF1 field format: raw little-endian float64, row-major x-fastest, no
// preamble. A sidecar "<stem>.hdr" carries key=value lines (format, grid,
// meta). Kink modulation curves ride in "<stem>.alpha.csv" referenced from
// the header. Curves are two-column CSV (y, value).

namespace kp2::io {

void write_field(const std::string& path, const Field2D& f);
Field2D read_field(const std::string& path);

void write_curve_csv(const std::string& path, const Grid2D& g, const ShiftCurve& c);
ShiftCurve read_curve_csv(const std::string& path);

/// Run manifest: key=value lines, written next to outputs for reproducibility.
void write_manifest(const std::string& path,
                    const std::vector<std::pair<std::string, std::string>>& entries);

std::string format_double(double v);   // round-trip-exact %.17g

} // namespace kp2::io
