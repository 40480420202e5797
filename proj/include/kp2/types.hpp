#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace kp2 {

// Precondition violations (bad arguments, malformed files): CLI exit code 1.
struct PreconditionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Numerical-regime failures (guards, divergence, nonpositive tau/psi): CLI exit code 2.
struct RegimeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

/// Uniform periodic grid on a truncated window [x0, x0+Lx) x [y0, y0+Ly),
/// sample points x_j = x0 + j*dx (right endpoint excluded).
struct Grid2D {
    int nx = 0, ny = 0;
    double Lx = 0, Ly = 0;
    double x0 = 0, y0 = 0;

    double dx() const { return Lx / nx; }
    double dy() const { return Ly / ny; }
    double x(int i) const { return x0 + i * dx(); }
    double y(int j) const { return y0 + j * dy(); }
    std::size_t size() const { return std::size_t(nx) * ny; }

    bool operator==(const Grid2D&) const = default;
};

/// Additive non-decaying background carried alongside a field's samples.
/// Spectral routines act on the residual (samples minus background) only.
struct Background {
    enum class Kind { None, Constant, Kink, Multikink };
    Kind kind = Kind::None;
    double lambda = 0.0;            // constant value, or kink scale
    std::vector<double> curve;      // per-row kink shift alpha(y); empty = 0

    static Background none() { return {}; }
    static Background constant(double lam) { return {Kind::Constant, lam, {}}; }
    static Background kink(double lam, std::vector<double> alpha = {}) {
        return {Kind::Kink, lam, std::move(alpha)};
    }
    static Background multikink() { return {Kind::Multikink, 0.0, {}}; }

    double shift(int row) const { return curve.empty() ? 0.0 : curve[row]; }
    // Pointwise background value; Multikink is a tag only (no closed form kept).
    double value(double x, int row) const {
        switch (kind) {
            case Kind::None: return 0.0;
            case Kind::Constant: return lambda;
            case Kind::Kink: return lambda * std::tanh(lambda * (x - shift(row)));
            case Kind::Multikink: return 0.0;
        }
        return 0.0;
    }
};

/// Real scalar samples on a Grid2D, row-major with x fastest.
struct Field2D {
    Grid2D grid;
    std::vector<double> v;
    Background meta;

    Field2D() = default;
    explicit Field2D(const Grid2D& g, double fill = 0.0)
        : grid(g), v(g.size(), fill) {}

    double& at(int ix, int iy) { return v[std::size_t(iy) * grid.nx + ix]; }
    double at(int ix, int iy) const { return v[std::size_t(iy) * grid.nx + ix]; }
    double* row(int iy) { return v.data() + std::size_t(iy) * grid.nx; }
    const double* row(int iy) const { return v.data() + std::size_t(iy) * grid.nx; }
};

/// Real function of y sampled on the grid's y-axis (alpha, beta, sigma curves).
struct ShiftCurve {
    std::vector<double> v;

    ShiftCurve() = default;
    explicit ShiftCurve(int ny, double fill = 0.0) : v(ny, fill) {}
    int size() const { return int(v.size()); }
    double& operator[](int j) { return v[j]; }
    double operator[](int j) const { return v[j]; }
};

struct NormReport {
    double l2 = 0;
    double l3 = 0;
    double linf = 0;
    double h_minus_half_zero = 0;   // discrete Hdot^{-1/2,0}, xi=0 modes excluded
    double weighted_sech2_l2 = 0;   // ||sech(x) f||_{L2}
    double integral = 0;            // plain integral of f
};

} // namespace kp2
