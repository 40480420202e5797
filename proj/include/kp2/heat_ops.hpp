#pragma once

#include <vector>

#include "kp2/types.hpp"

// Marching realization of the drifted heat kernels Gamma^(c) =
// (d_y + c d_x - d_x^2)^{-1}, their x-antiderivative variants, and the
// composite transport kernels K_tr+- built from them. Marching is exact per
// Fourier mode for the linear part; the source enters through a cubic
// (4-point) interpolatory quadrature, falling back to linear at the first and
// last steps.

namespace kp2::heat {

/// One exact Fourier step of dw/dy = w_xx - c w_x + f over dy, ETD2 source
/// quadrature with f given at both interval ends. Slices have length nx and
/// must decay at the x-edges; Lx fixes the mode frequencies.
std::vector<double> propagate_slice(const std::vector<double>& w, double c, double dy,
                                    const std::vector<double>& f0,
                                    const std::vector<double>& f1, double Lx);

/// Duhamel solution of d_y u = u_xx - c u_x + f marching up from u = 0 on the
/// bottom row (sources vanish below it). If antideriv, realizes
/// dx^{-1} Gamma^(c): the mean-free x-antiderivative of f is marched and the
/// zero mode is carried as the running integral Z' = mean_x(f) - c*A,
/// A' = mean_x(f) (the drift term transports the accumulated step across the
/// window; dropping it would lose the plateau of dx^{-1}(Gamma^- - Gamma^+)).
/// edge_tol scales the x-decay precondition; <= 0 skips the check (used by
/// iterative callers whose iterates wrap the periodic window by construction).
Field2D apply_gamma(double c, const Field2D& f, bool antideriv = false, double edge_tol = 1e-6);

enum class TrSign { Plus, Minus };

/// Right inverses of L_tr+- = d_y - d_x^2 +- 2 tanh(x) d_x:
///   K_tr+ = Gamma^+ M_{eta+} + Gamma^- M_{eta-}
///           + 1/2 (dx^{-1}Gamma^- - dx^{-1}Gamma^+) M_{sech^2},
///   K_tr- = M_{eta+} Gamma^- + M_{eta-} Gamma^+.
Field2D apply_Ktr(TrSign sign, const Field2D& f);

} // namespace kp2::heat
