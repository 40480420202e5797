#include "kp2/verify.hpp"

#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

#include "kp2/backlund.hpp"
#include "kp2/diagnostics.hpp"
#include "kp2/fft.hpp"
#include "kp2/field_ops.hpp"
#include "kp2/heat_ops.hpp"
#include "kp2/kp2_evolver.hpp"
#include "kp2/miura_solver.hpp"
#include "kp2/phi_functional.hpp"
#include "kp2/profiles.hpp"
#include "kp2/tau_solitons.hpp"

namespace kp2::verify {
namespace {

using field::make_grid;

const Grid2D kDefault = make_grid(512, 512, 40, 40, -20, -20);
// Wide windows where transported content must not wrap the periodic seam.
const Grid2D kKernelGrid = make_grid(4096, 512, 240, 40, -120, -20);
const Grid2D kBacklundGrid = make_grid(2048, 256, 160, 20, -80, -10);
const Grid2D kPhiGrid = make_grid(2048, 512, 160, 36, -80, -8);
const Grid2D kCommuteGrid = make_grid(2048, 512, 160, 40, -80, -20);

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(3);
    os << std::scientific << v;
    return os.str();
}

Field2D gaussian_dx(const Grid2D& g, double amp, double width2) {
    Field2D u(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            double x = g.x(i), y = g.y(j);
            u.at(i, j) = amp * (-2.0 * x / width2) * std::exp(-(x * x + y * y) / width2);
        }
    return u;
}

Field2D random_bumps(const Grid2D& g, unsigned seed, double ext, int nb, bool deriv_form) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> cd(-ext, ext), wd(0.8, 1.5), ad(-1.0, 1.0);
    Field2D f(g);
    for (int b = 0; b < nb; ++b) {
        double cx = cd(rng), cy = cd(rng), w = wd(rng), a = ad(rng);
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) {
                double dx = g.x(i) - cx, dy = g.y(j) - cy;
                double e = std::exp(-(dx * dx + dy * dy) / (w * w));
                f.at(i, j) += deriv_form ? a * (-2.0 * dx / (w * w)) * e : a * e;
            }
    }
    return f;
}

CriterionResult c01_miura_kink() {
    CriterionResult r{"C01 miura-kink-identities", false, "", 0};
    Field2D Q = profiles::eval_profile(profiles::ProfileKind::Kink, {}, kDefault);
    Q.meta = Background::kink(1.0);
    double m_minus = field::linf(profiles::miura_apply(profiles::MiuraSign::Minus, 1.0, Q));
    Field2D mp = profiles::miura_apply(profiles::MiuraSign::Plus, 1.0, Q);
    double m_plus = 0;
    for (int j = 0; j < kDefault.ny; ++j)
        for (int i = 0; i < kDefault.nx; ++i)
            m_plus = std::max(m_plus,
                              std::fabs(mp.at(i, j) - profiles::soliton(1.0, kDefault.x(i))));
    r.pass = m_minus < 1e-8 && m_plus < 1e-8;
    r.detail = "|M-(Q)|inf=" + fmt(m_minus) + " |M+(Q)-phi|inf=" + fmt(m_plus) + " (tol 1e-8)";
    return r;
}

CriterionResult c02_kernel_right_inverse() {
    CriterionResult r{"C02 kernel-right-inverse", false, "", 0};
    const Grid2D& g = kKernelGrid;
    double worst = 0;
    for (unsigned seed : {1u, 2u, 3u, 4u, 5u}) {
        Field2D f = random_bumps(g, seed, 5.0, 4, false);
        Field2D u = heat::apply_Ktr(heat::TrSign::Plus, f);
        auto ux = fft::x_derivative(g, u.v, 1);
        auto uxx = fft::x_derivative(g, u.v, 2);
        auto uy = field::y_derivative_fd6(g, u.v);
        Field2D diff(g);
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) {
                std::size_t idx = std::size_t(j) * g.nx + i;
                diff.at(i, j) =
                    uy[idx] - uxx[idx] + 2.0 * std::tanh(g.x(i)) * ux[idx] - f.at(i, j);
            }
        worst = std::max(worst, field::interior_l2(diff, 32, 32) / field::interior_l2(f, 32, 32));
    }
    r.pass = worst < 1e-3;
    r.detail = "max interior rel l2 over 5 seeds = " + fmt(worst) + " (tol 1e-3)";
    return r;
}

CriterionResult c03_elementary_solver() {
    CriterionResult r{"C03 elementary-solver", false, "", 0};
    Field2D u = gaussian_dx(kDefault, 0.01, 4.0);
    auto [vt, rep] = miura::solve_elementary(u, 1.0);
    bool conv = rep.converged && rep.iterations <= 30 && rep.residual_l2 < 1e-8;

    // Lax check through the log form of (d_y - d_xx + u) e^V = 0
    backlund::ElementaryPair pair = backlund::elementary_pair(u);
    double c = backlund::param_map(backlund::ParamDirection::Gamma0ToC, pair, 0.0);
    backlund::Superposition S = backlund::superpose_pair(pair, c);
    auto Vy = field::y_derivative_fd6(kDefault, S.log_psi.v);
    Field2D res(kDefault);
    double scale = 0;
    for (std::size_t i = 0; i < res.v.size(); ++i) {
        res.v[i] = Vy[i] - S.vx.v[i] - S.v.v[i] * S.v.v[i] + u.v[i];
        scale = std::max(scale, std::fabs(S.vx.v[i]) + S.v.v[i] * S.v.v[i]);
    }
    double lax = field::interior_l2(res, 32, 32) / scale;
    r.pass = conv && lax < 1e-5;
    r.detail = "iters=" + std::to_string(rep.iterations) + " residual=" + fmt(rep.residual_l2) +
               " (tol 1e-8), Lax rel=" + fmt(lax) + " (tol 1e-5)";
    return r;
}

CriterionResult c04_multikink_ivp() {
    CriterionResult r{"C04 multikink-ivp", false, "", 0};
    Grid2D g = make_grid(512, 512, 56, 16, -28, -8);
    Field2D u(g);
    auto multikink = [](double x, double y) {
        double e1 = x + y, e3 = -x + y;
        double m = std::max({e1, 0.0, e3});
        double s1 = std::exp(e1 - m), s2 = std::exp(-m), s3 = std::exp(e3 - m);
        return (s1 - s3) / (s1 + s2 + s3);
    };
    std::vector<double> v0(g.nx);
    for (int i = 0; i < g.nx; ++i) v0[i] = multikink(g.x(i), -8.0);
    Field2D v = miura::solve_kink_ivp(v0, u);
    double num = 0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            double want = multikink(g.x(i), g.y(j));
            num += (v.at(i, j) - want) * (v.at(i, j) - want);
        }
    double err = std::sqrt(num * g.dx() * g.dy());
    r.pass = err < 1e-4;
    r.detail = "windowed l2 error vs closed form = " + fmt(err) + " (tol 1e-4)";
    return r;
}

CriterionResult c05_tau_agreement() {
    CriterionResult r{"C05 tau-backlund-agreement", false, "", 0};
    Field2D zero(kDefault);

    backlund::MultiSpec m2{{-1.0, 1.0}, {0.7, -0.7}};
    Field2D b2 = backlund::multisoliton_add(zero, m2);
    tausol::TauSpec t2;
    t2.M = 2;
    t2.N = 1;
    t2.A = {{std::exp(0.7), std::exp(-0.7)}};
    t2.lambdas = {-1.0, 1.0};
    t2.theta0 = {0.0, 0.0};
    Field2D u2 = tausol::u_from_tau(t2, 0.0, kDefault);

    backlund::MultiSpec m3{{-1.0, 0.0, 1.0}, {0.0, 0.0, 0.0}};
    Field2D b3 = backlund::multisoliton_add(zero, m3);
    tausol::TauSpec t3;
    t3.M = 3;
    t3.N = 1;
    t3.A = {{1.0, 1.0, 1.0}};
    t3.lambdas = {-1.0, 0.0, 1.0};
    t3.theta0 = {0.0, 0.0, 0.0};
    Field2D u3 = tausol::u_from_tau(t3, 0.0, kDefault);

    double d2 = 0, d3 = 0, dsol = 0;
    for (std::size_t i = 0; i < b2.v.size(); ++i) {
        d2 = std::max(d2, std::fabs(b2.v[i] - u2.v[i]));
        d3 = std::max(d3, std::fabs(b3.v[i] - u3.v[i]));
    }
    for (int j = 0; j < kDefault.ny; j += 7)
        for (int i = 0; i < kDefault.nx; ++i)
            dsol = std::max(dsol,
                            std::fabs(b2.at(i, j) - profiles::soliton(1.0, kDefault.x(i) - 0.7)));
    r.pass = d2 < 1e-9 && d3 < 1e-9 && dsol < 1e-9;
    r.detail = "max|B-tau| M=2: " + fmt(d2) + ", M=3: " + fmt(d3) +
               ", |B - phi(x-0.7)|: " + fmt(dsol) + " (tol 1e-9)";
    return r;
}

CriterionResult c06_evolver() {
    CriterionResult r{"C06 evolver-conservation-speed", false, "", 0};
    Field2D u = gaussian_dx(kDefault, 0.01, 8.0);
    evolve::EvolveOptions eo;
    eo.T = 1.0;
    eo.dt = 1e-3;
    eo.save_every = 500;
    auto traj = evolve::evolve(u, eo);
    double drift = std::fabs(traj.l2_log.back() - traj.l2_log.front()) / traj.l2_log.front();

    Field2D phi0(kDefault);
    for (int j = 0; j < kDefault.ny; ++j)
        for (int i = 0; i < kDefault.nx; ++i)
            phi0.at(i, j) = profiles::soliton(1.0, kDefault.x(i) + 10.0);
    eo.save_every = 100;
    auto straj = evolve::evolve(phi0, eo);
    double speed = evolve::lab_soliton_speed(straj);

    r.pass = drift < 1e-8 && std::fabs(speed - 4.0) <= 0.02;
    r.detail = "l2 drift=" + fmt(drift) + " (tol 1e-8), speed=" + fmt(speed) + " (4 +- 0.02)";
    return r;
}

CriterionResult c07_commute() {
    CriterionResult r{"C07 commute-with-flow", false, "", 0};
    const double T = 0.25;
    diag::CommuteOptions co;
    co.dt = 1e-3;
    co.save_every = 50;

    std::vector<double> ladder{0.005, 0.01, 0.02};
    std::vector<double> final_mismatch, speed_resid;
    double base_max_mismatch = 0, gamma_start_err = 0;
    for (double eps : ladder) {
        Field2D u0 = gaussian_dx(kCommuteGrid, eps, 8.0);
        auto rep = diag::commute_check(u0, 0.0, T, co);
        final_mismatch.push_back(rep.mismatch.back());
        speed_resid.push_back(rep.speed_residual);
        if (eps == 0.01) {
            gamma_start_err = std::fabs(rep.gamma0_fit.front());
            for (double m : rep.mismatch) base_max_mismatch = std::max(base_max_mismatch, m);
        }
    }
    // mismatch(eps) ~ eps^p with p >= 1.5 across the ladder endpoints; when the
    // whole ladder sits at the discretization floor (orders below the 5e-3
    // tolerance), exact commuting is already evidenced and the regression
    // carries no signal.
    double p = std::log(final_mismatch[2] / final_mismatch[0]) / std::log(ladder[2] / ladder[0]);
    double ladder_max = std::max({final_mismatch[0], final_mismatch[1], final_mismatch[2]});
    bool scaling_ok = p >= 1.5 || ladder_max < 1e-4;
    bool monotone = speed_resid[0] <= speed_resid[1] && speed_resid[1] <= speed_resid[2];
    r.pass = base_max_mismatch < 5e-3 && gamma_start_err < 1e-3 && scaling_ok && monotone;
    r.detail = "mismatch(eps=0.01)max=" + fmt(base_max_mismatch) +
               " (tol 5e-3), |gamma_fit(0)|=" + fmt(gamma_start_err) + ", ladder exponent p=" +
               fmt(p) + " (>=1.5 or ladder max " + fmt(ladder_max) +
               " below the 1e-4 floor), speed-residual ladder " + fmt(speed_resid[0]) + " <= " +
               fmt(speed_resid[1]) + " <= " + fmt(speed_resid[2]);
    return r;
}

CriterionResult c08_phi() {
    CriterionResult r{"C08 phi-functional", false, "", 0};
    const Grid2D& g = kPhiGrid;

    Field2D zero(make_grid(64, 64, 16, 16, -8, -8));
    bool zero_ok = phi::phi(zero).value == 0.0;

    auto sech2gauss = [&](double amp) {
        Field2D h(g);
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) {
                double y = g.y(j);
                h.at(i, j) = amp * profiles::sech2(g.x(i)) * std::exp(-y * y);
            }
        return h;
    };
    const double eps = 1e-4;
    auto rp = phi::phi(sech2gauss(eps));
    auto rm = phi::phi(sech2gauss(-eps));
    double fd = (rp.value - rm.value) / (2.0 * eps);
    double lin = phi::phi_linear(sech2gauss(1.0));
    double fd_rel = std::fabs(fd - lin) / std::fabs(lin);

    double lin_want = -(2.0 / 3.0) * std::sqrt(M_PI);
    double lin_rel = std::fabs(lin - lin_want) / std::fabs(lin_want);

    // reflection invariance on a y-asymmetric input
    auto asym = [&](bool reflect) {
        Field2D h(g);
        const double yc = g.y0 + 0.5 * (g.Ly - g.dy());
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) {
                double y = g.y(j);
                if (reflect) y = 2.0 * yc - y;
                h.at(i, j) = 1e-3 * profiles::sech2(g.x(i)) *
                             (std::exp(-(y - 2) * (y - 2)) + 0.5 * std::exp(-0.5 * (y + 1) * (y + 1)));
            }
        return h;
    };
    double refl = std::fabs(phi::phi(asym(false)).value - phi::phi(asym(true)).value);

    r.pass = zero_ok && fd_rel < 1e-4 && refl < 1e-8 && rp.consistency_gap < 1e-5 &&
             lin_rel < 1e-3;
    r.detail = "FD-vs-linear rel=" + fmt(fd_rel) + " (tol 1e-4), reflection gap=" + fmt(refl) +
               " (tol 1e-8), consistency gap=" + fmt(rp.consistency_gap) +
               " (tol 1e-5), DPhi value rel=" + fmt(lin_rel) + " (tol 1e-3)";
    return r;
}

CriterionResult c09_range_necessity() {
    CriterionResult r{"C09 range-necessity", false, "", 0};
    const Grid2D& g = kPhiGrid;
    std::vector<double> ratios;
    for (double eps : {0.005, 0.01, 0.02}) {
        // even-in-y localized u
        Field2D u = gaussian_dx(g, eps, 4.0);
        auto out = backlund::soliton_add(u, 0.0);
        // g = ubar - phi_alpha: the full-curve subtraction keeps the tails zero
        Field2D pert(g);
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i)
                pert.at(i, j) =
                    out.u_bar.at(i, j) - profiles::soliton(1.0, g.x(i) - out.alpha[j]);
        phi::PhiOptions po;
        // g carries 1e-5-level transported wrap at the far x-edges; harmless
        // under the sech^2 weight of Phi
        po.input_edge_tol = 5e-2;
        double val = phi::phi(pert, po).value;
        double scale = field::l2(pert);
        ratios.push_back(std::fabs(val) / scale);
    }
    bool small = ratios[0] < 1e-3 && ratios[1] < 1e-3 && ratios[2] < 1e-3;
    bool decreasing = ratios[0] <= ratios[1] && ratios[1] <= ratios[2];
    r.pass = small && decreasing;
    r.detail = "|Phi(g)|/||g|| ladder = " + fmt(ratios[0]) + ", " + fmt(ratios[1]) + ", " +
               fmt(ratios[2]) + " (tol 1e-3, decreasing with eps)";
    return r;
}

CriterionResult c10_double_estimate() {
    CriterionResult r{"C10 l2phi-equivalence", false, "", 0};
    const double eps = 0.01;
    double rmin = 1e300, rmax = 0, worst_omega = 0, worst_ay = 0, worst_lg = 0;
    for (unsigned seed = 1; seed <= 10; ++seed) {
        Field2D u = random_bumps(kDefault, seed, 5.0, 3, true);
        double norm = field::l2(u);
        for (double& v : u.v) v *= eps / norm * 3.0;   // comparable scale across seeds
        auto out = backlund::soliton_add(u, 0.0);
        auto sem = diag::l2phi_seminorm(out.u_bar, ShiftCurve(kDefault.ny, 0.0));
        double ratio = sem.value / field::l2(u);
        rmin = std::min(rmin, ratio);
        rmax = std::max(rmax, ratio);

        for (int j = 0; j < kDefault.ny; ++j)
            worst_omega = std::max(
                worst_omega, std::fabs(field::row_integral(kDefault, out.omega.row(j))));
        double ay = 0;
        for (int j = 1; j + 1 < kDefault.ny; ++j) {
            double d = (out.alpha[j + 1] - out.alpha[j - 1]) / (2 * kDefault.dy());
            ay += d * d * kDefault.dy();
        }
        worst_ay = std::max(worst_ay, std::sqrt(ay));
        worst_lg = std::max(worst_lg, diag::log_growth(kDefault, out.alpha));
    }
    bool band = rmin >= 0.1 && rmax <= 10.0;
    bool invariants = worst_omega < 1e-8 && worst_ay < 50.0 * eps && worst_lg < 50.0 * eps;
    r.pass = band && invariants;
    r.detail = "ratio in [" + fmt(rmin) + ", " + fmt(rmax) + "] (band [0.1, 10]), max|int omega|=" +
               fmt(worst_omega) + ", max||alpha_y||=" + fmt(worst_ay) + ", max log-growth=" +
               fmt(worst_lg);
    return r;
}

} // namespace

std::vector<CriterionResult> run_suite(const std::string& suite, const Progress& progress) {
    std::vector<int> which;
    if (suite == "quick") {
        which = {1, 3, 4, 5, 8};
    } else if (suite == "full" || suite.empty()) {
        which = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    } else {
        std::stringstream ss(suite);
        std::string tok;
        while (std::getline(ss, tok, ',')) which.push_back(std::stoi(tok));
    }

    std::vector<CriterionResult> out;
    for (int id : which) {
        auto t0 = std::chrono::steady_clock::now();
        CriterionResult res;
        switch (id) {
            case 1: res = c01_miura_kink(); break;
            case 2: res = c02_kernel_right_inverse(); break;
            case 3: res = c03_elementary_solver(); break;
            case 4: res = c04_multikink_ivp(); break;
            case 5: res = c05_tau_agreement(); break;
            case 6: res = c06_evolver(); break;
            case 7: res = c07_commute(); break;
            case 8: res = c08_phi(); break;
            case 9: res = c09_range_necessity(); break;
            case 10: res = c10_double_estimate(); break;
            default: throw PreconditionError("verify: unknown criterion " + std::to_string(id));
        }
        res.seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (progress) progress(res);
        out.push_back(std::move(res));
    }
    return out;
}

} // namespace kp2::verify
