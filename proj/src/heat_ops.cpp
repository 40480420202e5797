#include "kp2/heat_ops.hpp"

#include <cmath>
#include <complex>

#include "kp2/fft.hpp"
#include "kp2/field_ops.hpp"
#include "kp2/kernels.hpp"
#include "kp2/profiles.hpp"

namespace kp2::heat {
namespace {

using cplx = std::complex<double>;

// phi_k(z) = int_0^1 e^{z(1-s)} s^{k-1}/(k-1)! ds; series for small |z|.
struct Phis {
    cplx p1, p2, p3, p4, p5;
};

Phis phis(cplx z) {
    Phis r;
    if (std::abs(z) < 0.5) {
        // phi_k(z) = sum_{n>=0} z^n / (n+k)!
        auto series = [&](int k0) {
            double fact = 1.0;
            for (int j = 2; j <= k0; ++j) fact *= j;
            cplx term = 1.0 / fact;
            cplx sum(0.0, 0.0);
            for (int n = 0; n < 24; ++n) {
                sum += term;
                term *= z / double(k0 + n + 1);
            }
            return sum;
        };
        r.p1 = series(1);
        r.p2 = series(2);
        r.p3 = series(3);
        r.p4 = series(4);
        r.p5 = series(5);
    } else {
        cplx ez = std::exp(z);
        r.p1 = (ez - 1.0) / z;
        r.p2 = (r.p1 - 1.0) / z;
        r.p3 = (r.p2 - 0.5) / z;
        r.p4 = (r.p3 - 1.0 / 6.0) / z;
        r.p5 = (r.p4 - 1.0 / 24.0) / z;
    }
    return r;
}

// Per-mode step factors: E = e^{mh} and the causal quartic source weights.
// The step [y_j, y_j+h] interpolates the source through rows {j-3,...,j+1}
// (rows below the bottom read as zero), so output rows strictly below the
// source support stay identically zero.
struct MarchPlan {
    int nk = 0;
    std::vector<cplx> E;
    std::vector<cplx> Q[5];   // weights for nodes {-3,-2,-1,0,1}
};

MarchPlan make_plan(const Grid2D& g, double c) {
    MarchPlan p;
    const double h = g.dy();
    p.nk = g.nx / 2 + 1;
    p.E.resize(p.nk);
    for (auto& q : p.Q) q.resize(p.nk);
    for (int k = 0; k < p.nk; ++k) {
        double w = 2.0 * M_PI * fft::xi(k, g.nx, g.Lx);
        cplx m(-w * w, -c * w);
        cplx z = m * h;
        p.E[k] = std::exp(z);
        Phis f = phis(z);
        p.Q[0][k] = h * (-f.p2 / 12.0 - f.p3 / 12.0 + 0.5 * f.p4 + f.p5);
        p.Q[1][k] = h * (0.5 * f.p2 + f.p3 / 3.0 - 3.0 * f.p4 - 4.0 * f.p5);
        p.Q[2][k] = h * (-1.5 * f.p2 + 0.5 * f.p3 + 6.0 * f.p4 + 6.0 * f.p5);
        p.Q[3][k] = h * (f.p1 + 5.0 / 6.0 * f.p2 - 5.0 / 3.0 * f.p3 - 5.0 * f.p4 - 4.0 * f.p5);
        p.Q[4][k] = h * (0.25 * f.p2 + 11.0 / 12.0 * f.p3 + 1.5 * f.p4 + f.p5);
    }
    return p;
}

// March u(row 0) = 0 upward; src holds the r2c spectrum of every source row.
void march(const Grid2D& g, const MarchPlan& p, const std::vector<cplx>& src,
           std::vector<cplx>& out) {
    const int nk = p.nk;
    std::vector<cplx> w(nk, cplx(0.0, 0.0));
    const std::vector<cplx> zero(nk, cplx(0.0, 0.0));
    auto srow = [&](int j) { return j >= 0 ? src.data() + std::size_t(j) * nk : zero.data(); };
    auto orow = [&](int j) { return out.data() + std::size_t(j) * nk; };
    for (int k = 0; k < nk; ++k) orow(0)[k] = 0.0;
    for (int j = 0; j + 1 < g.ny; ++j) {
        const cplx* s0 = srow(j - 3);
        const cplx* s1 = srow(j - 2);
        const cplx* s2 = srow(j - 1);
        const cplx* s3 = srow(j);
        const cplx* s4 = srow(j + 1);
        for (int k = 0; k < nk; ++k)
            w[k] = p.E[k] * w[k] + p.Q[0][k] * s0[k] + p.Q[1][k] * s1[k] +
                   p.Q[2][k] * s2[k] + p.Q[3][k] * s3[k] + p.Q[4][k] * s4[k];
        for (int k = 0; k < nk; ++k) orow(j + 1)[k] = w[k];
    }
}


} // namespace

std::vector<double> propagate_slice(const std::vector<double>& w, double c, double dy,
                                    const std::vector<double>& f0,
                                    const std::vector<double>& f1, double Lx) {
    const int nx = int(w.size());
    if (!is_pow2(nx) || int(f0.size()) != nx || int(f1.size()) != nx)
        throw PreconditionError("propagate_slice: slice lengths must match and be powers of two");
    if (!(dy > 0)) throw PreconditionError("propagate_slice: dy must be positive");
    const int nk = nx / 2 + 1;
    std::vector<cplx> wh(nk), s0(nk), s1(nk), E(nk), A(nk), B(nk);
    fft::r2c(nx, w.data(), wh.data());
    fft::r2c(nx, f0.data(), s0.data());
    fft::r2c(nx, f1.data(), s1.data());
    for (int k = 0; k < nk; ++k) {
        double om = 2.0 * M_PI * fft::xi(k, nx, Lx);
        cplx z = cplx(-om * om, -c * om) * dy;
        Phis f = phis(z);
        E[k] = std::exp(z);
        A[k] = dy * (f.p1 - f.p2);
        B[k] = dy * f.p2;
    }
    kern::ops().etd_combine(E.data(), A.data(), B.data(), s0.data(), s1.data(), wh.data(), nk);
    std::vector<double> out(nx);
    fft::c2r(nx, wh.data(), out.data());
    return out;
}

Field2D apply_gamma(double c, const Field2D& f, bool antideriv, double edge_tol) {
    const Grid2D& g = f.grid;
    if (edge_tol > 0) {
        if (f.meta.kind != Background::Kind::None)
            throw PreconditionError("apply_gamma: field carries a non-decaying background");
        if (!field::x_decays(f, edge_tol))
            throw PreconditionError("apply_gamma: field does not decay at the x-edges");
    }
    const int nk = g.nx / 2 + 1;

    const Field2D* src_field = &f;
    Field2D amf;
    std::vector<double> zero_mode;
    if (antideriv) {
        amf = field::x_antiderivative(f, field::AntiderivMode::MeanFreeSpectral);
        src_field = &amf;
        std::vector<double> mbar(g.ny);
        for (int j = 0; j < g.ny; ++j) mbar[j] = field::row_integral(g, f.row(j)) / g.Lx;
        std::vector<double> A = field::cumulative_quad4(mbar, g.dy());
        std::vector<double> gz(g.ny);
        for (int j = 0; j < g.ny; ++j) gz[j] = mbar[j] - c * A[j];
        zero_mode = field::cumulative_quad4(gz, g.dy());
    }

    std::vector<cplx> src(std::size_t(g.ny) * nk), out(std::size_t(g.ny) * nk);
    fft::rows_r2c(g, src_field->v.data(), src.data());
    MarchPlan plan = make_plan(g, c);
    march(g, plan, src, out);

    Field2D u(g);
    fft::rows_c2r(g, out.data(), u.v.data());
    if (antideriv)
        for (int j = 0; j < g.ny; ++j) {
            double* row = u.row(j);
            for (int i = 0; i < g.nx; ++i) row[i] += zero_mode[j];
        }
    return u;
}

Field2D apply_Ktr(TrSign sign, const Field2D& f) {
    const Grid2D& g = f.grid;
    field::require_x_decay(f, "apply_Ktr");

    if (sign == TrSign::Minus) {
        Field2D gp = apply_gamma(-2.0, f);
        Field2D gm = apply_gamma(+2.0, f);
        Field2D out(g);
        for (int j = 0; j < g.ny; ++j) {
            double* o = out.row(j);
            const double* a = gp.row(j);
            const double* b = gm.row(j);
            for (int i = 0; i < g.nx; ++i) {
                double x = g.x(i);
                o[i] = profiles::eta_plus(x) * a[i] + profiles::eta_minus(x) * b[i];
            }
        }
        return out;
    }

    Field2D fp(g), fm(g), fs(g);
    for (int j = 0; j < g.ny; ++j) {
        const double* s = f.row(j);
        double* p = fp.row(j);
        double* m = fm.row(j);
        double* q = fs.row(j);
        for (int i = 0; i < g.nx; ++i) {
            double x = g.x(i);
            p[i] = profiles::eta_plus(x) * s[i];
            m[i] = profiles::eta_minus(x) * s[i];
            q[i] = profiles::sech2(x) * s[i];
        }
    }
    Field2D t1 = apply_gamma(+2.0, fp);
    Field2D t2 = apply_gamma(-2.0, fm);
    Field2D d1 = apply_gamma(-2.0, fs, true);
    Field2D d2 = apply_gamma(+2.0, fs, true);
    Field2D out(g);
    for (std::size_t i = 0; i < out.v.size(); ++i)
        out.v[i] = t1.v[i] + t2.v[i] + 0.5 * (d1.v[i] - d2.v[i]);
    return out;
}

} // namespace kp2::heat
