#pragma once

#include <vector>

#include "kp2/types.hpp"

// Solvers for the forced viscous Burgers equation v_y - v_xx = (v^2)_x - u_x:
// elementary solutions near a constant lambda by Picard iteration, their
// normalized primitives, the y-initial-value problem with a tanh background,
// and the kink/perturbation splitting of an x-slice.

namespace kp2::miura {

struct SolveOptions {
    double tol = 1e-11;            // relative l3 increment threshold
    int max_iter = 200;
    double smallness_guard = 0.1;  // max allowed h^{-1/2,0} surrogate of u
    double edge_tol = 1e-6;        // x-decay gate on u (dispersed fields need more slack)
};

struct ElementaryReport {
    int iterations = 0;
    double residual_l2 = 0;        // interior l2 of the tilted equation residual
    bool converged = false;
};

/// Fixed point of vt -> Gamma^(-2 lambda) dx(vt^2 - u), the decaying part of
/// the solution in L^3 + lambda. The full solution is vt + lambda.
std::pair<Field2D, ElementaryReport> solve_elementary(const Field2D& u, double lambda,
                                                      const SolveOptions& opts = {});

/// Independent equation residual of a candidate vt (6th-order FD in y,
/// spectral in x), interior l2.
double elementary_residual(const Field2D& u, double lambda, const Field2D& vt);

/// Normalized primitive Vt with dx Vt = vt: row-wise running integral plus
/// C(y) recovered from the primitive equation at the left-edge column, the
/// global constant fixed by the mollifier condition
/// integral (Vt + lambda x + lambda^2 y) rho = 0.
Field2D build_primitive(const Field2D& vt, const Field2D& u, double lambda);

/// Marches v from the initial slice v0 (tanh background) over the grid's
/// y-range: diffusion exact per mode, transport and nonlinearity explicit
/// (integrating-factor RK4), forcing -u_x interpolated between rows.
Field2D solve_kink_ivp(const std::vector<double>& v0, const Field2D& u, int substeps = 1);

struct Sech2Split {
    std::vector<double> w;
    double beta = 0;
};

/// v = tanh(. - beta) + w with integral w sech^2(. - beta) dx = 0; beta by
/// bracketed bisection plus Newton polish on F(beta).
Sech2Split sech2_decompose(const Grid2D& g, const std::vector<double>& slice,
                           double guard = 0.3);

} // namespace kp2::miura
