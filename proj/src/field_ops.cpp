#include "kp2/field_ops.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kp2/fft.hpp"
#include "kp2/kernels.hpp"

namespace kp2::field {

Grid2D make_grid(int nx, int ny, double Lx, double Ly, double x0, double y0) {
    if (!is_pow2(nx) || nx < 16) throw PreconditionError("make_grid: nx not a power of two >= 16");
    if (!is_pow2(ny) || ny < 16) throw PreconditionError("make_grid: ny not a power of two >= 16");
    if (!(Lx > 0) || !(Ly > 0)) throw PreconditionError("make_grid: window lengths must be positive");
    return Grid2D{nx, ny, Lx, Ly, x0, y0};
}

double x_edge_sup(const Field2D& f, int cols) {
    double m = 0;
    for (int j = 0; j < f.grid.ny; ++j) {
        const double* r = f.row(j);
        for (int c = 0; c < cols; ++c) {
            m = std::max(m, std::fabs(r[c]));
            m = std::max(m, std::fabs(r[f.grid.nx - 1 - c]));
        }
    }
    return m;
}

bool x_decays(const Field2D& f, double tol, double floor) {
    double sup = linf(f);
    if (sup < floor) return true;
    return x_edge_sup(f) < tol * sup;
}

void require_x_decay(const Field2D& f, const char* who) {
    if (f.meta.kind != Background::Kind::None)
        throw PreconditionError(std::string(who) + ": field carries a non-decaying background");
    if (!x_decays(f))
        throw PreconditionError(std::string(who) + ": field does not decay at the x-edges");
}

Field2D x_antiderivative(const Field2D& f, AntiderivMode mode) {
    const Grid2D& g = f.grid;
    Field2D out(g);
    if (mode == AntiderivMode::MeanFreeSpectral) {
        if (f.meta.kind != Background::Kind::None)
            throw PreconditionError("x_antiderivative: background not allowed");
        const int nk = g.nx / 2 + 1;
        std::vector<fft::cplx> spec(std::size_t(g.ny) * nk);
        fft::rows_r2c(g, f.v.data(), spec.data());
        for (int j = 0; j < g.ny; ++j) {
            fft::cplx* row = spec.data() + std::size_t(j) * nk;
            row[0] = 0.0;
            for (int k = 1; k < nk; ++k)
                row[k] /= fft::cplx(0.0, 2.0 * M_PI * fft::xi(k, g.nx, g.Lx));
        }
        fft::rows_c2r(g, spec.data(), out.v.data());
    } else {
        require_x_decay(f, "x_antiderivative(cumulative)");
        const double h = g.dx();
        for (int j = 0; j < g.ny; ++j) {
            const double* src = f.row(j);
            double* dst = out.row(j);
            dst[0] = 0.0;
            for (int i = 1; i < g.nx; ++i)
                dst[i] = dst[i - 1] + 0.5 * h * (src[i - 1] + src[i]);
        }
    }
    return out;
}

NormReport integrate_and_norms(const Field2D& f) {
    const Grid2D& g = f.grid;
    const auto& K = kern::ops();
    const double da = g.dx() * g.dy();
    NormReport r;
    r.integral = K.sum(f.v.data(), f.v.size()) * da;
    r.l2 = std::sqrt(K.sum_sq(f.v.data(), f.v.size()) * da);
    r.l3 = std::cbrt(K.sum_abs3(f.v.data(), f.v.size()) * da);
    r.linf = K.max_abs(f.v.data(), f.v.size());

    double wsum = 0;
    for (int j = 0; j < g.ny; ++j) {
        const double* row = f.row(j);
        double s = 0;
        for (int i = 0; i < g.nx; ++i) {
            double c = 1.0 / std::cosh(g.x(i));
            s += c * c * row[i] * row[i];
        }
        wsum += s;
    }
    r.weighted_sech2_l2 = std::sqrt(wsum * da);

    // Hdot^{-1/2,0}: sum over k != 0 of |2 pi xi|^{-1} |u_hat|^2 dxi deta,
    // with u_hat = DFT * dx * dy and dxi deta = 1/(Lx Ly).
    const int nk = g.nx / 2 + 1;
    std::vector<fft::cplx> spec(std::size_t(g.ny) * (nk));
    fft::fft2_r2c(g, f.v.data(), spec.data());
    double acc = 0;
    for (int l = 0; l < g.ny; ++l) {
        const fft::cplx* row = spec.data() + std::size_t(l) * nk;
        for (int k = 1; k < nk; ++k) {
            double w = std::norm(row[k]) / std::fabs(2.0 * M_PI * fft::xi(k, g.nx, g.Lx));
            // r2c stores half the x-spectrum; interior modes represent two.
            acc += (k == g.nx / 2 ? 1.0 : 2.0) * w;
        }
    }
    double cell = da * da / (g.Lx * g.Ly);
    r.h_minus_half_zero = std::sqrt(acc * cell);
    return r;
}

double l2(const Field2D& f) {
    return std::sqrt(kern::ops().sum_sq(f.v.data(), f.v.size()) * f.grid.dx() * f.grid.dy());
}

double linf(const Field2D& f) {
    return kern::ops().max_abs(f.v.data(), f.v.size());
}

double interior_l2(const Field2D& f, int margin_x, int margin_y) {
    const Grid2D& g = f.grid;
    int mx = margin_x >= 0 ? margin_x : g.nx / 16;
    int my = margin_y >= 0 ? margin_y : g.ny / 16;
    double acc = 0;
    for (int j = my; j < g.ny - my; ++j) {
        const double* row = f.row(j);
        acc += kern::ops().sum_sq(row + mx, std::size_t(g.nx - 2 * mx));
    }
    return std::sqrt(acc * g.dx() * g.dy());
}

std::vector<double> y_derivative_fd6(const Grid2D& g, const std::vector<double>& v) {
    std::vector<double> out(g.size(), 0.0);
    static const double c1 = 3.0 / 4.0, c2 = -3.0 / 20.0, c3 = 1.0 / 60.0;
    const double inv = 1.0 / g.dy();
    for (int j = 3; j < g.ny - 3; ++j) {
        const double* m3 = v.data() + std::size_t(j - 3) * g.nx;
        const double* m2 = v.data() + std::size_t(j - 2) * g.nx;
        const double* m1 = v.data() + std::size_t(j - 1) * g.nx;
        const double* p1 = v.data() + std::size_t(j + 1) * g.nx;
        const double* p2 = v.data() + std::size_t(j + 2) * g.nx;
        const double* p3 = v.data() + std::size_t(j + 3) * g.nx;
        double* dst = out.data() + std::size_t(j) * g.nx;
        for (int i = 0; i < g.nx; ++i)
            dst[i] = inv * (c1 * (p1[i] - m1[i]) + c2 * (p2[i] - m2[i]) + c3 * (p3[i] - m3[i]));
    }
    return out;
}

double row_integral(const Grid2D& g, const double* row) {
    return kern::ops().sum(row, std::size_t(g.nx)) * g.dx();
}

Field2D operator_add(const Field2D& a, const Field2D& b, double ca, double cb) {
    if (!(a.grid == b.grid)) throw PreconditionError("field add: grid mismatch");
    Field2D out(a.grid);
    for (std::size_t i = 0; i < out.v.size(); ++i) out.v[i] = ca * a.v[i] + cb * b.v[i];
    return out;
}


std::vector<double> cumulative_quad4(const std::vector<double>& v, double h) {
    const int n = int(v.size());
    std::vector<double> s(n, 0.0);
    auto at = [&](int j) { return j >= 0 ? v[j] : 0.0; };
    for (int j = 0; j + 1 < n; ++j)
        s[j + 1] = s[j] + h * (-19.0 * at(j - 3) + 106.0 * at(j - 2) - 264.0 * at(j - 1) +
                               646.0 * at(j) + 251.0 * at(j + 1)) / 720.0;
    return s;
}

std::vector<double> y_derivative2_fd6(const Grid2D& g, const std::vector<double>& v) {
    std::vector<double> out(g.size(), 0.0);
    static const double c0 = -49.0 / 18.0, c1 = 3.0 / 2.0, c2 = -3.0 / 20.0, c3 = 1.0 / 90.0;
    const double inv = 1.0 / (g.dy() * g.dy());
    for (int j = 3; j < g.ny - 3; ++j) {
        auto row = [&](int jj) { return v.data() + std::size_t(jj) * g.nx; };
        const double *m3 = row(j - 3), *m2 = row(j - 2), *m1 = row(j - 1), *z0 = row(j),
                     *p1 = row(j + 1), *p2 = row(j + 2), *p3 = row(j + 3);
        double* dst = out.data() + std::size_t(j) * g.nx;
        for (int i = 0; i < g.nx; ++i)
            dst[i] = inv * (c0 * z0[i] + c1 * (p1[i] + m1[i]) + c2 * (p2[i] + m2[i]) +
                            c3 * (p3[i] + m3[i]));
    }
    return out;
}

} // namespace kp2::field
