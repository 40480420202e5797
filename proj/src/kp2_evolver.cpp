#include "kp2/kp2_evolver.hpp"

#include <cmath>
#include <complex>
#include <cstdio>

#include "kp2/fft.hpp"
#include "kp2/field_ops.hpp"
#include "kp2/kernels.hpp"
#include "kp2/profiles.hpp"

namespace kp2::evolve {
namespace {

using cplx = std::complex<double>;

struct Engine {
    Grid2D g;
    EvolveOptions opts;
    int nk = 0;
    std::vector<cplx> E, E2;        // e^{L dt}, e^{L dt/2}
    std::vector<double> dealias;    // 2/3-rule mask
    std::vector<cplx> dx_mult;      // i 2 pi xi (with dealiasing folded in by caller)
    std::vector<double> extra;      // static source (spectral), may be empty
    std::vector<double> coupling;   // 6 phi_alpha for the perturbed frame, may be empty

    Engine(const Grid2D& grid, const EvolveOptions& o, bool comoving) : g(grid), opts(o) {
        nk = g.nx / 2 + 1;
        E.resize(std::size_t(g.ny) * nk);
        E2.resize(E.size());
        dealias.assign(E.size(), 1.0);
        dx_mult.resize(E.size());
        const double dt = opts.dt;
        for (int l = 0; l < g.ny; ++l) {
            double eta = fft::xi(l, g.ny, g.Ly);
            for (int k = 0; k < nk; ++k) {
                double xi = fft::xi(k, g.nx, g.Lx);
                std::size_t idx = std::size_t(l) * nk + k;
                double om_x = 2.0 * M_PI * xi, om_y = 2.0 * M_PI * eta;
                double sym = 0.0;
                if (k != 0) sym = om_x * om_x * om_x - 3.0 * om_y * om_y / om_x;
                if (comoving && k != 0) sym += 4.0 * om_x;
                if (opts.disable_linear) sym = 0.0;
                E[idx] = std::exp(cplx(0.0, sym * dt));
                E2[idx] = std::exp(cplx(0.0, sym * dt * 0.5));
                dx_mult[idx] = cplx(0.0, om_x);
                if (k == g.nx / 2) dx_mult[idx] = 0.0;
                bool cut = std::abs(fft::freq_index(k, g.nx)) > g.nx / 3 ||
                           std::abs(fft::freq_index(l, g.ny)) > g.ny / 3;
                if (opts.dealias && cut) dealias[idx] = 0.0;
            }
        }
    }

    // N(u) = 3 dx(u^2) [+ 6 dx(phi_a u) + S] in spectral space
    void nonlinear(const std::vector<cplx>& uhat, std::vector<cplx>& nhat,
                   std::vector<double>& phys, std::vector<double>& work) const {
        if (opts.disable_nonlinear && coupling.empty() && extra.empty()) {
            std::fill(nhat.begin(), nhat.end(), cplx(0.0, 0.0));
            return;
        }
        fft::fft2_c2r(g, uhat.data(), phys.data());
        if (!opts.disable_nonlinear)
            for (std::size_t i = 0; i < phys.size(); ++i) work[i] = 3.0 * phys[i] * phys[i];
        else
            std::fill(work.begin(), work.end(), 0.0);
        if (!coupling.empty())
            for (std::size_t i = 0; i < phys.size(); ++i) work[i] += coupling[i] * phys[i];
        fft::fft2_r2c(g, work.data(), nhat.data());
        for (std::size_t i = 0; i < nhat.size(); ++i) nhat[i] *= dx_mult[i] * dealias[i];
        if (!extra.empty()) {
            // static source, already spectral, stored interleaved in `extra`
            const cplx* src = reinterpret_cast<const cplx*>(extra.data());
            for (std::size_t i = 0; i < nhat.size(); ++i) nhat[i] += src[i];
        }
        // never feed the xi = 0 column
        for (int l = 0; l < g.ny; ++l) nhat[std::size_t(l) * nk] = 0.0;
    }

    Trajectory run(const Field2D& u0) {
        const int nsteps = std::abs(int(std::llround(opts.T / opts.dt)));
        std::vector<cplx> uhat(std::size_t(g.ny) * nk);
        fft::fft2_r2c(g, u0.v.data(), uhat.data());

        // project x-means per row (xi = 0, eta != 0); keep the frozen mean mode
        double drop = 0;
        for (int l = 1; l < g.ny; ++l) {
            drop = std::max(drop, std::abs(uhat[std::size_t(l) * nk]) / (g.nx * g.ny));
            uhat[std::size_t(l) * nk] = 0.0;
        }
        if (drop > 1e-10)
            std::fprintf(stderr,
                         "kp2_evolver: warning: projected y-dependent x-means (%.2e) off the data\n",
                         drop);

        const double cfl_u = field::linf(u0);
        if (cfl_u > 0 && std::fabs(opts.dt) > 0.5 * g.dx() / (6.0 * cfl_u))
            throw RegimeError("evolve: CFL violation (dt too large for max|6u|)");

        Trajectory traj;
        std::vector<double> phys(g.size()), work(g.size());
        std::vector<cplx> a(uhat.size()), b(uhat.size()), c(uhat.size()), d(uhat.size()),
            tmp(uhat.size()), acc(uhat.size());

        auto snapshot = [&](int step) {
            Field2D f(g);
            fft::fft2_c2r(g, uhat.data(), f.v.data());
            auto r = field::integrate_and_norms(f);
            traj.times.push_back(step * opts.dt);
            traj.mass_log.push_back(r.integral);
            traj.l2_log.push_back(r.l2);
            traj.snapshots.push_back(std::move(f));
            if (!(r.linf < 1e6)) throw RegimeError("evolve: blow-up guard tripped (linf > 1e6)");
        };
        snapshot(0);

        const double h = opts.dt;
        const auto& K = kern::ops();
        const std::size_t n = uhat.size();
        auto re = [](std::vector<cplx>& v) { return reinterpret_cast<double*>(v.data()); };
        std::vector<cplx> eu2(n);
        for (int step = 0; step < nsteps; ++step) {
            nonlinear(uhat, a, phys, work);
            tmp = uhat;
            K.axpby(0.5 * h, re(a), 1.0, re(tmp), 2 * n);      // u + h/2 a
            K.cmul(E2.data(), tmp.data(), n);
            nonlinear(tmp, b, phys, work);
            eu2 = uhat;
            K.cmul(E2.data(), eu2.data(), n);                  // E2 u
            tmp = eu2;
            K.axpby(0.5 * h, re(b), 1.0, re(tmp), 2 * n);
            nonlinear(tmp, c, phys, work);
            tmp = eu2;
            K.axpby(h, re(c), 1.0, re(tmp), 2 * n);
            K.cmul(E2.data(), tmp.data(), n);                  // E2 (E2 u + h c)
            nonlinear(tmp, d, phys, work);

            acc = uhat;
            K.cmul(E.data(), acc.data(), n);                   // E u
            K.cmul(E.data(), a.data(), n);                     // E a
            K.axpby(1.0, re(c), 1.0, re(b), 2 * n);            // b + c
            K.cmul(E2.data(), b.data(), n);                    // E2 (b + c)
            K.axpby(h / 6.0, re(a), 1.0, re(acc), 2 * n);
            K.axpby(h / 3.0, re(b), 1.0, re(acc), 2 * n);
            K.axpby(h / 6.0, re(d), 1.0, re(acc), 2 * n);
            uhat.swap(acc);
            if ((step + 1) % opts.save_every == 0 || step + 1 == nsteps) snapshot(step + 1);
        }
        return traj;
    }
};

} // namespace

Trajectory evolve(const Field2D& u0, const EvolveOptions& opts) {
    if (opts.dt == 0.0 || !(opts.T > 0)) throw PreconditionError("evolve: need dt != 0 and T > 0");
    Engine eng(u0.grid, opts, opts.frame == Frame::Comoving4);
    return eng.run(u0);
}

Trajectory evolve_with_soliton(const Field2D& g0, const ShiftCurve& alpha,
                               const EvolveOptions& opts) {
    const Grid2D& g = g0.grid;
    if (alpha.size() != g.ny) throw PreconditionError("evolve_with_soliton: alpha length != ny");
    Engine eng(g, opts, true);

    // coupling term 6 phi_alpha and the static modulation source
    eng.coupling.resize(g.size());
    std::vector<double> ay(g.ny, 0.0), ayy(g.ny, 0.0);
    bool constant = true;
    for (int j = 1; j < g.ny; ++j)
        if (alpha[j] != alpha[0]) constant = false;
    if (!constant) {
        // spectral derivatives over the periodic y-axis
        Grid2D yg = g;
        Field2D tmpf(g);
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) tmpf.at(i, j) = alpha[j];
        auto d1 = fft::y_derivative(yg, tmpf.v, 1);
        auto d2 = fft::y_derivative(yg, tmpf.v, 2);
        for (int j = 0; j < g.ny; ++j) {
            ay[j] = d1[std::size_t(j) * g.nx];
            ayy[j] = d2[std::size_t(j) * g.nx];
        }
    }
    Field2D source(g);
    for (int j = 0; j < g.ny; ++j) {
        double* cp = eng.coupling.data() + std::size_t(j) * g.nx;
        double* sp = source.row(j);
        for (int i = 0; i < g.nx; ++i) {
            double xa = g.x(i) - alpha[j];
            double phi = profiles::soliton(1.0, xa);
            double phix = 4.0 * std::tanh(xa) * profiles::sech2(xa);   // dx of -2 sech^2
            cp[i] = 6.0 * phi;
            sp[i] = ay[j] * ay[j] * phix - ayy[j] * phi;
        }
    }
    const int nk = g.nx / 2 + 1;
    std::vector<cplx> shat(std::size_t(g.ny) * nk);
    fft::fft2_r2c(g, source.v.data(), shat.data());
    for (int l = 0; l < g.ny; ++l) shat[std::size_t(l) * nk] = 0.0;
    bool any = false;
    for (auto& z : shat)
        if (z != cplx(0.0, 0.0)) any = true;
    if (any) {
        eng.extra.resize(2 * shat.size());
        std::copy(reinterpret_cast<double*>(shat.data()),
                  reinterpret_cast<double*>(shat.data()) + 2 * shat.size(), eng.extra.begin());
    }
    return eng.run(g0);
}

double lab_soliton_speed(const Trajectory& traj) {
    if (traj.snapshots.size() < 2) throw PreconditionError("lab_soliton_speed: need >= 2 snapshots");
    const Grid2D& g = traj.snapshots[0].grid;
    std::vector<double> pos(traj.snapshots.size());
    double prev = 0;
    for (std::size_t s = 0; s < traj.snapshots.size(); ++s) {
        const Field2D& f = traj.snapshots[s];
        std::vector<double> prof(g.nx, 0.0);
        for (int j = 0; j < g.ny; ++j) {
            const double* row = f.row(j);
            for (int i = 0; i < g.nx; ++i) prof[i] += row[i];
        }
        int imin = 0;
        for (int i = 1; i < g.nx; ++i)
            if (prof[i] < prof[imin]) imin = i;
        double depth = -prof[imin] / g.ny;
        if (depth < 1e-6)
            throw RegimeError("lab_soliton_speed: no pronounced trough to track");
        // quadratic interpolation around the grid argmin (periodic neighbors)
        double ym = prof[(imin + g.nx - 1) % g.nx], y0 = prof[imin], yp = prof[(imin + 1) % g.nx];
        double denom = ym - 2 * y0 + yp;
        double frac = denom != 0.0 ? 0.5 * (ym - yp) / denom : 0.0;
        double x = g.x(imin) + frac * g.dx();
        if (s > 0) {
            // unwrap across the periodic seam
            while (x - prev > g.Lx / 2) x -= g.Lx;
            while (x - prev < -g.Lx / 2) x += g.Lx;
        }
        pos[s] = x;
        prev = x;
    }
    // least-squares slope over time
    double n = double(pos.size());
    double st = 0, sx = 0, stt = 0, stx = 0;
    for (std::size_t s = 0; s < pos.size(); ++s) {
        st += traj.times[s];
        sx += pos[s];
        stt += traj.times[s] * traj.times[s];
        stx += traj.times[s] * pos[s];
    }
    double denom = n * stt - st * st;
    if (denom == 0.0) throw PreconditionError("lab_soliton_speed: degenerate time base");
    return (n * stx - st * sx) / denom;
}

} // namespace kp2::evolve
