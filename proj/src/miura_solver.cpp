#include "kp2/miura_solver.hpp"

#include <algorithm>
#include <cmath>

#include "kp2/fft.hpp"
#include "kp2/field_ops.hpp"
#include "kp2/heat_ops.hpp"
#include "kp2/kernels.hpp"
#include "kp2/profiles.hpp"

namespace kp2::miura {
namespace {

double l3(const Field2D& f) {
    return std::cbrt(kern::ops().sum_abs3(f.v.data(), f.v.size()) * f.grid.dx() * f.grid.dy());
}

// source dx(vt^2 - u), spectral derivative
Field2D picard_source(const Field2D& vt, const Field2D& u) {
    Field2D s(u.grid);
    kern::ops().square(vt.v.data(), s.v.data(), s.v.size());
    for (std::size_t i = 0; i < s.v.size(); ++i) s.v[i] -= u.v[i];
    s.v = fft::x_derivative(u.grid, s.v, 1);
    return s;
}

} // namespace

std::pair<Field2D, ElementaryReport> solve_elementary(const Field2D& u, double lambda,
                                                      const SolveOptions& opts) {
    const Grid2D& g = u.grid;
    if (u.meta.kind != Background::Kind::None)
        throw PreconditionError("solve_elementary: u carries a non-decaying background");
    if (!field::x_decays(u, opts.edge_tol))
        throw PreconditionError("solve_elementary: field does not decay at the x-edges");
    double surrogate = field::integrate_and_norms(u).h_minus_half_zero;
    if (surrogate > opts.smallness_guard)
        throw RegimeError("solve_elementary: smallness guard tripped (||u|| surrogate " +
                          std::to_string(surrogate) + " > " + std::to_string(opts.smallness_guard) + ")");

    Field2D vt(g);
    ElementaryReport rep;
    double prev_inc = 0;
    int grow = 0;
    for (int it = 1; it <= opts.max_iter; ++it) {
        Field2D next = heat::apply_gamma(-2.0 * lambda, picard_source(vt, u), false, 0.0);
        Field2D diff = field::operator_add(next, vt, 1.0, -1.0);
        double inc = l3(diff);
        double scale = std::max(l3(next), 1e-30);
        vt = std::move(next);
        rep.iterations = it;
        if (inc <= opts.tol * scale || inc == 0.0) {
            rep.converged = true;
            break;
        }
        if (it > 1 && inc > prev_inc) {
            if (++grow >= 5) throw RegimeError("solve_elementary: diverged (increment grew 5 times)");
        } else {
            grow = 0;
        }
        prev_inc = inc;
    }
    if (!rep.converged && rep.iterations >= opts.max_iter)
        throw RegimeError("solve_elementary: diverged (max_iter reached)");
    rep.residual_l2 = elementary_residual(u, lambda, vt);
    return {std::move(vt), rep};
}

double elementary_residual(const Field2D& u, double lambda, const Field2D& vt) {
    const Grid2D& g = u.grid;
    auto vy = field::y_derivative_fd6(g, vt.v);
    auto vxx = fft::x_derivative(g, vt.v, 2);
    auto vx = fft::x_derivative(g, vt.v, 1);
    std::vector<double> sq(g.size());
    kern::ops().square(vt.v.data(), sq.data(), sq.size());
    auto sqx = fft::x_derivative(g, sq, 1);
    auto ux = fft::x_derivative(g, u.v, 1);
    Field2D r(g);
    for (std::size_t i = 0; i < r.v.size(); ++i)
        r.v[i] = vy[i] - vxx[i] - 2.0 * lambda * vx[i] - sqx[i] + ux[i];
    // FD stencil is undefined in the first/last 3 rows; stay clear of them.
    return field::interior_l2(r, g.nx / 16, std::max(g.ny / 16, 4));
}

Field2D build_primitive(const Field2D& vt, const Field2D& u, double lambda) {
    const Grid2D& g = vt.grid;
    // x-antiderivative pinned to 0 at the left-edge column. vt carries no
    // zero mode (its Picard source is an x-derivative), so the spectral
    // antiderivative recovers dx Vt = vt exactly.
    Field2D Vt(g);
    {
        const int nk = g.nx / 2 + 1;
        std::vector<fft::cplx> spec(std::size_t(g.ny) * nk);
        fft::rows_r2c(g, vt.v.data(), spec.data());
        for (int j = 0; j < g.ny; ++j) {
            fft::cplx* row = spec.data() + std::size_t(j) * nk;
            row[0] = 0.0;
            for (int k = 1; k < nk; ++k)
                row[k] /= fft::cplx(0.0, 2.0 * M_PI * fft::xi(k, g.nx, g.Lx));
        }
        fft::rows_c2r(g, spec.data(), Vt.v.data());
        for (int j = 0; j < g.ny; ++j) {
            double* row = Vt.row(j);
            double left = row[0];
            for (int i = 0; i < g.nx; ++i) row[i] -= left;
        }
    }

    auto vx = fft::x_derivative(g, vt.v, 1);
    std::vector<double> cprime(g.ny);
    for (int j = 0; j < g.ny; ++j) {
        std::size_t idx = std::size_t(j) * g.nx;
        double vt0 = vt.v[idx];
        cprime[j] = vx[idx] + vt0 * vt0 + 2.0 * lambda * vt0 - u.v[idx];
    }
    std::vector<double> C = field::cumulative_quad4(cprime, g.dy());
    for (int j = 0; j < g.ny; ++j) {
        double* row = Vt.row(j);
        for (int i = 0; i < g.nx; ++i) row[i] += C[j];
    }

    // single-constant normalization: integral (Vt + lambda x + lambda^2 y) rho = 0
    Field2D rho = profiles::mollifier(g);
    double s = 0;
    for (int j = 0; j < g.ny; ++j) {
        const double* rr = rho.row(j);
        const double* vv = Vt.row(j);
        double y = g.y(j);
        double acc = 0;
        for (int i = 0; i < g.nx; ++i)
            acc += rr[i] * (vv[i] + lambda * g.x(i) + lambda * lambda * y);
        s += acc;
    }
    s *= g.dx() * g.dy();
    for (double& v : Vt.v) v -= s;
    return Vt;
}

Field2D solve_kink_ivp(const std::vector<double>& v0, const Field2D& u, int substeps) {
    const Grid2D& g = u.grid;
    if (int(v0.size()) != g.nx) throw PreconditionError("solve_kink_ivp: slice length != nx");
    if (substeps < 1) substeps = 1;

    // Background kink position from the initial slice when it is close to a
    // single kink (keeps translated kinks exactly stationary); multikink data
    // fall back to the origin-centered background.
    double beta0 = 0.0;
    try {
        beta0 = sech2_decompose(g, v0).beta;
    } catch (const RegimeError&) {
        beta0 = 0.0;
    }

    const int nk = g.nx / 2 + 1;
    std::vector<double> tanhx(g.nx);
    for (int i = 0; i < g.nx; ++i) tanhx[i] = std::tanh(g.x(i) - beta0);
    std::vector<double> z(g.nx);
    for (int i = 0; i < g.nx; ++i) z[i] = v0[i] - tanhx[i];
    {
        Field2D probe(g);
        for (int j = 0; j < g.ny; ++j) std::copy(z.begin(), z.end(), probe.row(j));
        if (!field::x_decays(probe))
            throw PreconditionError("solve_kink_ivp: v0 - tanh does not decay");
    }

    // forcing -u_x per row, plus cubic interpolation in y between rows
    Field2D ux(g);
    ux.v = fft::x_derivative(g, u.v, 1);
    auto forcing_at = [&](double jf, std::vector<double>& out) {
        int j0 = int(std::floor(jf));
        double t = jf - j0;
        if (j0 >= g.ny - 1) {
            j0 = g.ny - 1;
            t = 0;
        }
        // 4-point Lagrange in the row index, clamped at the ends
        int jm = std::max(j0 - 1, 0), jp = std::min(j0 + 1, g.ny - 1), jq = std::min(j0 + 2, g.ny - 1);
        double wm = -t * (t - 1) * (t - 2) / 6.0;
        double w0 = (t + 1) * (t - 1) * (t - 2) / 2.0;
        double wp = -(t + 1) * t * (t - 2) / 2.0;
        double wq = (t + 1) * t * (t - 1) / 6.0;
        const double* rm = ux.row(jm);
        const double* r0 = ux.row(j0);
        const double* rp = ux.row(jp);
        const double* rq = ux.row(jq);
        for (int i = 0; i < g.nx; ++i)
            out[i] = -(wm * rm[i] + w0 * r0[i] + wp * rp[i] + wq * rq[i]);
    };

    const double h = g.dy() / substeps;
    std::vector<fft::cplx> Eh(nk), Eh2(nk);
    for (int k = 0; k < nk; ++k) {
        double om = 2.0 * M_PI * fft::xi(k, g.nx, g.Lx);
        Eh[k] = std::exp(-om * om * h);
        Eh2[k] = std::exp(-om * om * h * 0.5);
    }

    std::vector<double> f_buf(g.nx), work(g.nx), nl(g.nx);
    auto nonlin = [&](const std::vector<double>& zz, const std::vector<double>& force,
                      std::vector<double>& out) {
        // 2 (tanh z)_x + (z^2)_x + force
        for (int i = 0; i < g.nx; ++i) work[i] = 2.0 * tanhx[i] * zz[i] + zz[i] * zz[i];
        std::vector<fft::cplx> spec(nk);
        fft::r2c(g.nx, work.data(), spec.data());
        for (int k = 0; k < nk; ++k) {
            double om = 2.0 * M_PI * fft::xi(k, g.nx, g.Lx);
            spec[k] *= fft::cplx(0.0, om);
            if (k == g.nx / 2) spec[k] = 0.0;
        }
        fft::c2r(g.nx, spec.data(), out.data());
        for (int i = 0; i < g.nx; ++i) out[i] += force[i];
    };

    auto propagate = [&](const std::vector<double>& in, const std::vector<fft::cplx>& E,
                         std::vector<double>& out) {
        std::vector<fft::cplx> spec(nk);
        fft::r2c(g.nx, in.data(), spec.data());
        for (int k = 0; k < nk; ++k) spec[k] *= E[k];
        fft::c2r(g.nx, spec.data(), out.data());
    };

    Field2D v(g);
    v.meta = Background::kink(1.0, std::vector<double>(g.ny, beta0));
    for (int i = 0; i < g.nx; ++i) v.at(i, 0) = v0[i];

    std::vector<double> k1(g.nx), k2(g.nx), k3(g.nx), k4(g.nx), zs(g.nx), tmp(g.nx);
    std::vector<double> f0(g.nx), fh(g.nx), f1(g.nx);
    for (int j = 0; j + 1 < g.ny; ++j) {
        for (int s = 0; s < substeps; ++s) {
            double jf = j + double(s) / substeps;
            forcing_at(jf, f0);
            forcing_at(jf + 0.5 / substeps, fh);
            forcing_at(jf + 1.0 / substeps, f1);

            // integrating-factor RK4 on z_y = z_xx + N(z)
            nonlin(z, f0, k1);
            for (int i = 0; i < g.nx; ++i) tmp[i] = z[i] + 0.5 * h * k1[i];
            propagate(tmp, Eh2, zs);
            nonlin(zs, fh, k2);
            propagate(z, Eh2, tmp);
            for (int i = 0; i < g.nx; ++i) tmp[i] += 0.5 * h * k2[i];
            nonlin(tmp, fh, k3);
            for (int i = 0; i < g.nx; ++i) tmp[i] = tmp[i] - 0.5 * h * k2[i] + h * k3[i];
            propagate(tmp, Eh2, zs);
            nonlin(zs, f1, k4);

            // combine: z_{n+1} = Eh z_n + h/6 (Eh k1 + 2 Eh2 (k2+k3) + k4)
            propagate(z, Eh, tmp);
            std::vector<double>& ek1 = f_buf;
            propagate(k1, Eh, ek1);
            for (int i = 0; i < g.nx; ++i) nl[i] = k2[i] + k3[i];
            propagate(nl, Eh2, work);
            for (int i = 0; i < g.nx; ++i)
                z[i] = tmp[i] + h / 6.0 * (ek1[i] + 2.0 * work[i] + k4[i]);
        }
        double m = kern::ops().max_abs(z.data(), z.size());
        if (!(m < 1e6)) throw RegimeError("solve_kink_ivp: step-size instability (linf blow-up)");
        for (int i = 0; i < g.nx; ++i) v.at(i, j + 1) = z[i] + tanhx[i];
    }
    return v;
}

Sech2Split sech2_decompose(const Grid2D& g, const std::vector<double>& slice, double guard) {
    if (int(slice.size()) != g.nx) throw PreconditionError("sech2_decompose: slice length != nx");
    const double dx = g.dx();

    auto F = [&](double beta) {
        double acc = 0;
        for (int i = 0; i < g.nx; ++i) {
            double xb = g.x(i) - beta;
            acc += (slice[i] - std::tanh(xb)) * profiles::sech2(xb);
        }
        return acc * dx;
    };
    auto dist2 = [&](double beta) {
        double acc = 0;
        for (int i = 0; i < g.nx; ++i) {
            double d = slice[i] - std::tanh(g.x(i) - beta);
            acc += d * d;
        }
        return std::sqrt(acc * dx);
    };

    // initial guess: zero crossing of the slice
    double guess = 0;
    bool found = false;
    for (int i = 1; i < g.nx; ++i)
        if (slice[i - 1] <= 0 && slice[i] > 0) {
            guess = g.x(i - 1) + dx * (-slice[i - 1]) / (slice[i] - slice[i - 1]);
            found = true;
            break;
        }
    if (!found) throw RegimeError("sech2_decompose: not near kink family (no zero crossing)");

    // expand a bracket around the guess; F is increasing in beta near the family
    double lo = guess - 0.5, hi = guess + 0.5;
    double flo = F(lo), fhi = F(hi);
    int grow = 0;
    while (flo * fhi > 0) {
        lo -= 0.5;
        hi += 0.5;
        flo = F(lo);
        fhi = F(hi);
        if (lo < g.x0 || hi > g.x0 + g.Lx || ++grow > 64)
            throw RegimeError("sech2_decompose: no root in window");
    }
    for (int it = 0; it < 60; ++it) {
        double mid = 0.5 * (lo + hi);
        double fm = F(mid);
        if (flo * fm <= 0) {
            hi = mid;
            fhi = fm;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    double beta = 0.5 * (lo + hi);
    // Newton polish: F'(beta) = integral sech^4 + 2 (v - tanh) sech^2 tanh
    for (int it = 0; it < 4; ++it) {
        double f = F(beta), df = 0;
        for (int i = 0; i < g.nx; ++i) {
            double xb = g.x(i) - beta;
            double s2 = profiles::sech2(xb), th = std::tanh(xb);
            df += s2 * s2 + 2.0 * (slice[i] - th) * s2 * th;
        }
        df *= dx;
        if (df <= 0) break;
        beta -= f / df;
    }

    if (dist2(beta) > guard)
        throw RegimeError("sech2_decompose: not near kink family (guard exceeded)");

    Sech2Split out;
    out.beta = beta;
    out.w.resize(g.nx);
    for (int i = 0; i < g.nx; ++i) out.w[i] = slice[i] - std::tanh(g.x(i) - beta);
    return out;
}

} // namespace kp2::miura
