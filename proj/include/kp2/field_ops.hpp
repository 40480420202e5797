#pragma once

#include <vector>

#include "kp2/types.hpp"

namespace kp2::field {

enum class AntiderivMode { MeanFreeSpectral, CumulativeFromLeft };

Grid2D make_grid(int nx, int ny, double Lx, double Ly, double x0, double y0);

/// max |f| over the outermost `cols` columns at both x-edges.
double x_edge_sup(const Field2D& f, int cols = 2);

/// Edge-decay precondition: sup over outermost 2 columns < tol * linf(f).
/// Fields below `floor` in sup norm pass trivially.
bool x_decays(const Field2D& f, double tol = 1e-6, double floor = 1e-13);
void require_x_decay(const Field2D& f, const char* who);

/// Per-row x-antiderivative. MeanFreeSpectral divides modes by i*2*pi*xi and
/// zeroes the mean; CumulativeFromLeft is the trapezoid running integral
/// pinned to 0 at the left edge (requires x-decay).
Field2D x_antiderivative(const Field2D& f, AntiderivMode mode);

/// Plain integral plus the discrete norms used throughout the suite.
NormReport integrate_and_norms(const Field2D& f);

double l2(const Field2D& f);
double linf(const Field2D& f);

/// l2 over the interior, excluding `margin` cells at every edge
/// (default nx/16 resp. ny/16).
double interior_l2(const Field2D& f, int margin_x = -1, int margin_y = -1);

/// 6th-order centered finite-difference d/dy (one-sided flavors are not
/// needed: callers mask the affected rows). Rows closer than 3 to an edge
/// are filled with 0.
std::vector<double> y_derivative_fd6(const Grid2D& g, const std::vector<double>& v);
/// Same for d2/dy2.
std::vector<double> y_derivative2_fd6(const Grid2D& g, const std::vector<double>& v);

/// Trapezoid row integral sum f dx of one row.
double row_integral(const Grid2D& g, const double* row);

/// Running integral of a sampled function of y, pinned to 0 at the first row:
/// 4th-order causal stencil, values below the first row read as zero.
std::vector<double> cumulative_quad4(const std::vector<double>& v, double h);

Field2D operator_add(const Field2D& a, const Field2D& b, double ca = 1.0, double cb = 1.0);

} // namespace kp2::field
