#include "kp2/phi_functional.hpp"

#include <cmath>
#include <complex>

#include "kp2/fft.hpp"
#include "kp2/field_ops.hpp"
#include "kp2/profiles.hpp"

namespace kp2::phi {
namespace {

using cplx = std::complex<double>;

} // namespace

Field2D solve_psi(const Field2D& h, const PhiOptions& opts) {
    const Grid2D& g = h.grid;
    if (h.meta.kind != Background::Kind::None)
        throw PreconditionError("solve_psi: h carries a non-decaying background");
    if (!field::x_decays(h, opts.input_edge_tol))
        throw PreconditionError("solve_psi: h does not decay at the x-edges");

    int sub = opts.substeps;
    if (sub <= 0) sub = std::max(1, int(std::ceil(2.0 * g.dy() / g.dx())));
    const double dt = g.dy() / sub;
    const int nk = g.nx / 2 + 1;

    std::vector<cplx> Eh(nk), Eh2(nk);
    for (int k = 0; k < nk; ++k) {
        double om = 2.0 * M_PI * fft::xi(k, g.nx, g.Lx);
        Eh[k] = std::exp(-om * om * dt);
        Eh2[k] = std::exp(-om * om * dt * 0.5);
    }
    std::vector<double> tanhx(g.nx);
    for (int i = 0; i < g.nx; ++i) tanhx[i] = std::tanh(g.x(i));

    // cubic interpolation of h between rows (index units)
    std::vector<double> hrow(g.nx);
    auto h_at = [&](double jf) {
        int j0 = int(std::floor(jf));
        double t = jf - j0;
        if (j0 >= g.ny - 1) {
            j0 = g.ny - 1;
            t = 0;
        }
        int jm = std::max(j0 - 1, 0), jp = std::min(j0 + 1, g.ny - 1), jq = std::min(j0 + 2, g.ny - 1);
        double wm = -t * (t - 1) * (t - 2) / 6.0;
        double w0 = (t + 1) * (t - 1) * (t - 2) / 2.0;
        double wp = -(t + 1) * t * (t - 2) / 2.0;
        double wq = (t + 1) * t * (t - 1) / 6.0;
        const double* rm = h.row(jm);
        const double* r0 = h.row(j0);
        const double* rp = h.row(jp);
        const double* rq = h.row(jq);
        for (int i = 0; i < g.nx; ++i)
            hrow[i] = wm * rm[i] + w0 * r0[i] + wp * rp[i] + wq * rq[i];
    };

    std::vector<cplx> spec(nk);
    std::vector<double> chi(g.nx, 0.0), dchi(g.nx);
    auto nonlin = [&](const std::vector<double>& c, std::vector<double>& out) {
        // -2 tanh c_x - h (1 + c)
        fft::r2c(g.nx, c.data(), spec.data());
        for (int k = 0; k < nk; ++k) {
            double om = 2.0 * M_PI * fft::xi(k, g.nx, g.Lx);
            spec[k] *= cplx(0.0, om);
            if (k == g.nx / 2) spec[k] = 0.0;
        }
        fft::c2r(g.nx, spec.data(), dchi.data());
        for (int i = 0; i < g.nx; ++i) out[i] = -2.0 * tanhx[i] * dchi[i] - hrow[i] * (1.0 + c[i]);
    };
    auto propagate = [&](const std::vector<double>& in, const std::vector<cplx>& E,
                         std::vector<double>& out) {
        fft::r2c(g.nx, in.data(), spec.data());
        for (int k = 0; k < nk; ++k) spec[k] *= E[k];
        fft::c2r(g.nx, spec.data(), out.data());
    };

    Field2D psi(g, 1.0);
    std::vector<double> k1(g.nx), k2(g.nx), k3(g.nx), k4(g.nx), tmp(g.nx), zs(g.nx), ek1(g.nx),
        bc(g.nx);
    for (int j = 0; j + 1 < g.ny; ++j) {
        for (int s = 0; s < sub; ++s) {
            double jf = j + double(s) / sub;
            // RK4-IF; h is frozen per stage position
            h_at(jf);
            nonlin(chi, k1);
            for (int i = 0; i < g.nx; ++i) tmp[i] = chi[i] + 0.5 * dt * k1[i];
            propagate(tmp, Eh2, zs);
            h_at(jf + 0.5 / sub);
            nonlin(zs, k2);
            propagate(chi, Eh2, tmp);
            for (int i = 0; i < g.nx; ++i) tmp[i] += 0.5 * dt * k2[i];
            nonlin(tmp, k3);
            for (int i = 0; i < g.nx; ++i) tmp[i] = tmp[i] - 0.5 * dt * k2[i] + dt * k3[i];
            propagate(tmp, Eh2, zs);
            h_at(jf + 1.0 / sub);
            nonlin(zs, k4);
            propagate(chi, Eh, tmp);
            propagate(k1, Eh, ek1);
            for (int i = 0; i < g.nx; ++i) bc[i] = k2[i] + k3[i];
            propagate(bc, Eh2, zs);
            for (int i = 0; i < g.nx; ++i)
                chi[i] = tmp[i] + dt / 6.0 * (ek1[i] + 2.0 * zs[i] + k4[i]);
        }
        double* row = psi.row(j + 1);
        double mn = 1e300, mx = 0;
        for (int i = 0; i < g.nx; ++i) {
            row[i] = 1.0 + chi[i];
            mn = std::min(mn, row[i]);
            mx = std::max(mx, std::fabs(chi[i]));
        }
        if (!(mn > 0))
            throw RegimeError("solve_psi: psi nonpositive (h outside the exponential-bound regime)");
        if (!(mx < 1e6)) throw RegimeError("solve_psi: blow-up");
    }

    // Edge contamination: the transported plateau must not have wrapped into
    // the window edges at a level that matters. The plateau fronts carry an
    // erfc tail, so the guard is relative and deliberately loose.
    double chimax = 0, edge = 0;
    for (int j = 0; j < g.ny; ++j) {
        const double* row = psi.row(j);
        for (int i = 0; i < g.nx; ++i) chimax = std::max(chimax, std::fabs(row[i] - 1.0));
        for (int c = 0; c < 2; ++c) {
            edge = std::max(edge, std::fabs(row[c] - 1.0));
            edge = std::max(edge, std::fabs(row[g.nx - 1 - c] - 1.0));
        }
    }
    if (chimax > 1e-12 && edge > opts.edge_tol * chimax)
        throw RegimeError("solve_psi: edge contamination (window too small for the transport)");
    return psi;
}

PhiResult phi(const Field2D& h, const PhiOptions& opts) {
    const Grid2D& g = h.grid;
    PhiResult r;
    r.psi = solve_psi(h, opts);

    double acc = 0;
    for (int j = 0; j < g.ny; ++j) {
        const double* hh = h.row(j);
        const double* pp = r.psi.row(j);
        double s = 0;
        for (int i = 0; i < g.nx; ++i) s += profiles::sech2(g.x(i)) * hh[i] * pp[i];
        acc += s;
    }
    r.value = -0.5 * acc * g.dx() * g.dy();

    const double* top = r.psi.row(g.ny - 1);
    double s = 0;
    for (int i = 0; i < g.nx; ++i) s += profiles::sech2(g.x(i)) * (top[i] - 1.0);
    r.value_alt = 0.5 * s * g.dx();

    r.consistency_gap = std::fabs(r.value - r.value_alt);
    r.psi_min = 1e300;
    for (double v : r.psi.v) r.psi_min = std::min(r.psi_min, v);
    return r;
}

double phi_linear(const Field2D& z) {
    const Grid2D& g = z.grid;
    double acc = 0;
    for (int j = 0; j < g.ny; ++j) {
        const double* zz = z.row(j);
        double s = 0;
        for (int i = 0; i < g.nx; ++i) s += profiles::sech2(g.x(i)) * zz[i];
        acc += s;
    }
    return -0.5 * acc * g.dx() * g.dy();
}

} // namespace kp2::phi
