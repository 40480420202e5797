#pragma once

#include <optional>

#include "kp2/types.hpp"

namespace kp2::profiles {

enum class ProfileKind { Soliton, Kink, EtaPlus, EtaMinus, Sech2, Mollifier };

struct ProfileParams {
    double lambda = 1.0;
    double x_shift = 0.0;
    std::optional<ShiftCurve> shift_curve;
};

/// Pointwise closed forms. x is pre-shifted by x_shift and shift_curve(y).
double soliton(double lambda, double x);       // -2 lambda^2 sech^2(lambda x)
double kink(double lambda, double x);          // lambda tanh(lambda x)
double eta_plus(double x);                     // (1 + tanh x)/2
double eta_minus(double x);                    // (1 - tanh x)/2
double sech2(double x);

Field2D eval_profile(ProfileKind kind, const ProfileParams& p, const Grid2D& g);

/// The radial bump c*exp(-1/(1-r^2)) on r<1, quadrature-normalized to
/// integral 1 on the given grid; centered at (cx, cy).
Field2D mollifier(const Grid2D& g, double cx = 0.0, double cy = 0.0);
/// rho-weighted mean: integral of rho(.-cx, .-cy) * f.
double mollifier_pairing(const Field2D& f, double cx, double cy);

enum class MiuraSign { Plus, Minus };

/// M_pm^lambda(v) = -(dx^{-1} v_y pm v_x - v^2 + lambda^2) on the grid.
/// Derivatives are spectral on the decaying residual and analytic on the
/// kink/constant background; dx^{-1} v_y is the cumulative-from-left
/// integral (the constant is fixed by decay at the left edge).
Field2D miura_apply(MiuraSign sign, double lambda, const Field2D& v);

} // namespace kp2::profiles
