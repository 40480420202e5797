#include "kp2/backlund.hpp"

#include <algorithm>
#include <cmath>

#include "kp2/fft.hpp"
#include "kp2/field_ops.hpp"
#include "kp2/parallel.hpp"
#include "kp2/profiles.hpp"

namespace kp2::backlund {
namespace {

void check_spec(const MultiSpec& spec) {
    if (spec.lambdas.empty() || spec.lambdas.size() != spec.cs.size())
        throw PreconditionError("MultiSpec: lambdas/cs must be non-empty and equally long");
    for (std::size_t j = 1; j < spec.lambdas.size(); ++j)
        if (!(spec.lambdas[j] > spec.lambdas[j - 1]))
            throw PreconditionError("MultiSpec: lambdas must be strictly increasing");
}

} // namespace

ElementaryPair elementary_pair(const Field2D& u, const miura::SolveOptions& opts) {
    ElementaryPair p;
    p.u = u;
    auto [vp, rp] = miura::solve_elementary(u, +1.0, opts);
    auto [vm, rm] = miura::solve_elementary(u, -1.0, opts);
    p.vt_plus = std::move(vp);
    p.vt_minus = std::move(vm);
    p.report_plus = rp;
    p.report_minus = rm;
    p.Vt_plus = miura::build_primitive(p.vt_plus, u, +1.0);
    p.Vt_minus = miura::build_primitive(p.vt_minus, u, -1.0);
    return p;
}

Superposition superpose(const Field2D& u, const std::vector<double>& lambdas,
                        const std::vector<Field2D>& vts, const std::vector<Field2D>& Vts,
                        const std::vector<double>& cs) {
    const Grid2D& g = u.grid;
    const int M = int(lambdas.size());
    if (int(vts.size()) != M || int(Vts.size()) != M || int(cs.size()) != M)
        throw PreconditionError("superpose: mismatched elementary lists");
    for (const auto& f : vts)
        if (!(f.grid == g)) throw PreconditionError("superpose: grid mismatch");

    std::vector<std::vector<double>> vtx(M);
    for (int m = 0; m < M; ++m) vtx[m] = fft::x_derivative(g, vts[m].v, 1);

    Superposition S;
    S.v = Field2D(g);
    S.vx = Field2D(g);
    S.log_psi = Field2D(g);

    parallel_for(g.ny, [&](int j) {
        std::vector<double> E(M);
        for (int i = 0; i < g.nx; ++i) {
            const std::size_t idx = std::size_t(j) * g.nx + i;
            double x = g.x(i), y = g.y(j);
            double emax = -1e300;
            for (int m = 0; m < M; ++m) {
                E[m] = Vts[m].v[idx] + lambdas[m] * x + lambdas[m] * lambdas[m] * y + cs[m];
                emax = std::max(emax, E[m]);
            }
            double zsum = 0, vsum = 0, dsum = 0;
            for (int m = 0; m < M; ++m) {
                double z = std::exp(E[m] - emax);
                double vm = vts[m].v[idx] + lambdas[m];
                zsum += z;
                vsum += z * vm;
                dsum += z * (vtx[m][idx] + vm * vm);
            }
            double v = vsum / zsum;
            S.v.v[idx] = v;
            S.vx.v[idx] = dsum / zsum - v * v;
            S.log_psi.v[idx] = emax + std::log(zsum);
        }
    });

    if (M == 1) {
        S.v.meta = Background::constant(lambdas[0]);
    } else if (M == 2 && lambdas[0] == -1.0 && lambdas[1] == 1.0) {
        S.v.meta = Background::kink(1.0);
    } else {
        S.v.meta = Background::multikink();
    }
    return S;
}

Superposition superpose_pair(const ElementaryPair& pair, double c) {
    return superpose(pair.u, {-1.0, 1.0}, {pair.vt_minus, pair.vt_plus},
                     {pair.Vt_minus, pair.Vt_plus}, {c, -c});
}

std::pair<Field2D, ShiftCurve> modulated_decompose(const Field2D& v, const ElementaryPair& pair) {
    const Grid2D& g = v.grid;
    const double dx = g.dx();

    Field2D omega(g);
    ShiftCurve alpha(g.ny);

    // per-row root of \int (v - G_a) dx = 0; the integral is monotone in a
    // with slope in [1, 3] for small data, so an expanding bracket around the
    // previous row's root always closes.
    std::vector<double> iv(g.ny);
    for (int j = 0; j < g.ny; ++j) iv[j] = field::row_integral(g, v.row(j));

    auto g_integral = [&](int j, double a) {
        const double* vp = pair.vt_plus.row(j);
        const double* vm = pair.vt_minus.row(j);
        double acc = 0;
        for (int i = 0; i < g.nx; ++i) {
            double xa = g.x(i) - a;
            double th = std::tanh(xa);
            acc += th + 0.5 * (1.0 + th) * vp[i] + 0.5 * (1.0 - th) * vm[i];
        }
        return iv[j] - acc * dx;   // integral of (v - G_a)
    };

    double prev = 0.0;
    for (int j = 0; j < g.ny; ++j) {
        double lo = prev - 1.0, hi = prev + 1.0;
        double flo = g_integral(j, lo), fhi = g_integral(j, hi);
        int grow = 0;
        while (flo * fhi > 0) {
            lo -= 1.0;
            hi += 1.0;
            flo = g_integral(j, lo);
            fhi = g_integral(j, hi);
            if (++grow > 64)
                throw RegimeError("modulated_decompose: no bracket (v too far from the kink family)");
        }
        // integral decreases in a (d/da ~ -[1,3]); bisect accordingly
        for (int it = 0; it < 60; ++it) {
            double mid = 0.5 * (lo + hi);
            double fm = g_integral(j, mid);
            if (flo * fm <= 0) {
                hi = mid;
                fhi = fm;
            } else {
                lo = mid;
                flo = fm;
            }
        }
        alpha[j] = 0.5 * (lo + hi);
        prev = alpha[j];

        const double* vp = pair.vt_plus.row(j);
        const double* vm = pair.vt_minus.row(j);
        const double* vr = v.row(j);
        double* om = omega.row(j);
        for (int i = 0; i < g.nx; ++i) {
            double xa = g.x(i) - alpha[j];
            double th = std::tanh(xa);
            om[i] = vr[i] - (th + 0.5 * (1.0 + th) * vp[i] + 0.5 * (1.0 - th) * vm[i]);
        }
    }
    return {std::move(omega), std::move(alpha)};
}

double param_map(ParamDirection dir, const ElementaryPair& pair, double value) {
    const Grid2D& g = pair.u.grid;

    auto gamma_of_c = [&](double c) {
        Superposition S = superpose_pair(pair, c);
        auto F = [&](double gam) { return profiles::mollifier_pairing(S.v, gam, 0.0); };
        double half = g.Lx / 3.0;
        double lo = c - half, hi = c + half;
        double flo = F(lo), fhi = F(hi);
        if (flo * fhi > 0) throw RegimeError("param_map: gamma_0 root outside the window bracket");
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
        return 0.5 * (lo + hi);
    };

    if (dir == ParamDirection::CToGamma0) return gamma_of_c(value);

    // secant iteration for c given gamma_0
    if (std::fabs(value - (g.x0 + g.Lx / 2)) > g.Lx / 2 - 3.0)
        throw PreconditionError("param_map: gamma_0 must sit at least 3 units inside the window");
    double c0 = value, c1 = value + 0.05;
    double h0 = gamma_of_c(c0) - value;
    double h1 = gamma_of_c(c1) - value;
    for (int it = 0; it < 40; ++it) {
        if (std::fabs(h1) < 1e-12) break;
        if (h1 == h0) break;
        double c2 = c1 - h1 * (c1 - c0) / (h1 - h0);
        c0 = c1;
        h0 = h1;
        c1 = c2;
        h1 = gamma_of_c(c1) - value;
    }
    return c1;
}

BacklundOutput soliton_add_with_pair(const ElementaryPair& pair, double gamma0) {
    const Grid2D& g = pair.u.grid;
    BacklundOutput out;
    out.pair = pair;
    out.gamma0 = gamma0;
    out.c = param_map(ParamDirection::Gamma0ToC, pair, gamma0);

    Superposition S = superpose_pair(pair, out.c);
    auto [omega, alpha] = modulated_decompose(S.v, pair);

    // dx v: analytic kink derivative plus the spectral derivative of the
    // decaying residual v - tanh_alpha
    Field2D resid(g);
    for (int j = 0; j < g.ny; ++j) {
        const double* vr = S.v.row(j);
        double* rr = resid.row(j);
        for (int i = 0; i < g.nx; ++i) rr[i] = vr[i] - std::tanh(g.x(i) - alpha[j]);
    }
    auto rx = fft::x_derivative(g, resid.v, 1);

    out.u_bar = Field2D(g);
    for (int j = 0; j < g.ny; ++j) {
        const double* uu = pair.u.row(j);
        double* ub = out.u_bar.row(j);
        for (int i = 0; i < g.nx; ++i) {
            double vx = rx[std::size_t(j) * g.nx + i] + profiles::sech2(g.x(i) - alpha[j]);
            ub[i] = uu[i] - 2.0 * vx;
        }
    }

    out.v = std::move(S.v);
    out.v.meta = Background::kink(1.0, alpha.v);
    out.omega = std::move(omega);
    out.alpha = std::move(alpha);
    return out;
}

BacklundOutput soliton_add(const Field2D& u, double gamma0, const miura::SolveOptions& opts) {
    return soliton_add_with_pair(elementary_pair(u, opts), gamma0);
}

Field2D multisoliton_add(const Field2D& u, const MultiSpec& spec, const miura::SolveOptions& opts) {
    check_spec(spec);
    const int M = int(spec.lambdas.size());
    std::vector<Field2D> vts(M), Vts(M);
    for (int m = 0; m < M; ++m) {
        auto [vt, rep] = miura::solve_elementary(u, spec.lambdas[m], opts);
        vts[m] = std::move(vt);
        Vts[m] = miura::build_primitive(vts[m], u, spec.lambdas[m]);
    }
    Superposition S = superpose(u, spec.lambdas, vts, Vts, spec.cs);
    Field2D ub(u.grid);
    for (std::size_t i = 0; i < ub.v.size(); ++i) ub.v[i] = u.v[i] - 2.0 * S.vx.v[i];
    return ub;
}

} // namespace kp2::backlund
