#pragma once

#include <vector>

#include "kp2/types.hpp"

// Pseudospectral KP-II time evolution: integrating-factor RK4 in the 2D
// Fourier domain, nonlinearity 3 dx(u^2) with 2/3-rule dealiasing, the
// xi = 0 modes projected out (the mean mode is frozen). Lab frame or the
// frame co-moving with the unit line soliton (speed 4).

namespace kp2::evolve {

enum class Frame { Lab, Comoving4 };

struct EvolveOptions {
    double dt = 1e-3;
    double T = 1.0;
    Frame frame = Frame::Lab;
    bool dealias = true;
    int save_every = 100;
    // test hooks
    bool disable_nonlinear = false;
    bool disable_linear = false;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<Field2D> snapshots;
    std::vector<double> mass_log;
    std::vector<double> l2_log;
};

/// KP-II in the chosen frame: u_t = 3 (u^2)_x - u_xxx - 3 dx^{-1} u_yy
/// (+ 4 u_x in the co-moving frame).
Trajectory evolve(const Field2D& u0, const EvolveOptions& opts);

/// Perturbation g around the modulated soliton phi_alpha in the co-moving
/// frame: g_t = 4 g_x - g_xxx - 3 dx^{-1} g_yy + 3 (g^2)_x + 6 (phi_a g)_x
/// + (alpha_y)^2 dx phi_a - alpha_yy phi_a.
Trajectory evolve_with_soliton(const Field2D& g0, const ShiftCurve& alpha,
                               const EvolveOptions& opts);

/// Least-squares speed of the y-averaged trough across the snapshots
/// (quadratic interpolation of the argmin, unwrapped across the period).
double lab_soliton_speed(const Trajectory& traj);

} // namespace kp2::evolve
