#pragma once

#include <vector>

#include "kp2/backlund.hpp"
#include "kp2/kp2_evolver.hpp"
#include "kp2/types.hpp"

namespace kp2::diag {

struct MiuraResiduals {
    double r_minus = 0;      // v_y - v_xx - (v^2)_x + u_x
    double r_plus = 0;       // v_y + v_xx - (v^2)_x + ubar_x
    double r_algebraic = 0;  // u - ubar - 2 v_x
};

/// Interior l2 of the three equations of the Miura system (y derivatives by
/// 6th-order finite differences, x derivatives spectral on decaying parts and
/// analytic on the kink background).
MiuraResiduals miura_system_residuals(const Field2D& u, const Field2D& v, const Field2D& u_bar);

struct SeminormResult {
    double value = 0;            // sqrt(inf J)
    ShiftCurve sigma_star;
    Field2D w_star;
    double agreement_gap = 0;    // |value difference| between the two restarts
    int iterations = 0;
};

/// | ubar |_{L^2_phi}: minimizes J(sigma) = ||ubar - phi_sigma||^2 + ||sigma_y||^2
/// by Barzilai-Borwein descent from two independent initializations (per-row
/// trough fit and sigma_init).
SeminormResult l2phi_seminorm(const Field2D& u_bar, const ShiftCurve& sigma_init);

struct CommuteReport {
    std::vector<double> times;
    std::vector<double> gamma0_fit;
    std::vector<double> mismatch;    // relative l2 distance at each snapshot
    double speed_residual = 0;       // l2 of d gamma0/dt - 4 over the snapshots
};

struct CommuteOptions {
    double dt = 1e-3;
    int save_every = 50;
    miura::SolveOptions solver;
};

/// Commuting check: evolve u0 and ubar0 = B(u0, gamma0) independently, refit
/// gamma0 at every snapshot, and report the mismatch and the fitted speed.
CommuteReport commute_check(const Field2D& u0, double gamma0, double T,
                            const CommuteOptions& opts = {});

/// max over row pairs (stride >= 4) of |alpha(y2) - alpha(y1)| / log(2 + |dy|).
double log_growth(const Grid2D& g, const ShiftCurve& alpha);

/// Distributional KP-II residual (u_t - 3(u^2)_x + u_xxx)_x + 3 u_yy, interior
/// l2; u_t from the five time slices u(t + k dt), k = -2..2.
double kp2_residual(const std::vector<Field2D>& slices, double dt);

} // namespace kp2::diag
