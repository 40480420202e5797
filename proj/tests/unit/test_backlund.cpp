#include <doctest.h>

#include <cmath>

#include "kp2/backlund.hpp"
#include "kp2/field_ops.hpp"
#include "kp2/fft.hpp"
#include "kp2/profiles.hpp"
#include "kp2/tau_solitons.hpp"

using namespace kp2;
using field::make_grid;

namespace {

const Grid2D kGrid = make_grid(512, 512, 40, 40, -20, -20);

Field2D gaussian_dx(const Grid2D& g, double amp, double width2) {
    Field2D u(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            double x = g.x(i), y = g.y(j);
            u.at(i, j) = amp * (-2.0 * x / width2) * std::exp(-(x * x + y * y) / width2);
        }
    return u;
}

} // namespace

TEST_CASE("superpose: u = 0 closed forms") {
    Field2D u(kGrid);
    backlund::ElementaryPair pair = backlund::elementary_pair(u);

    SUBCASE("two-kink logistic reduces to tanh(x - c)") {
        for (double c : {0.0, 1.5, -2.25}) {
            auto S = backlund::superpose_pair(pair, c);
            double err = 0;
            for (int j = 0; j < kGrid.ny; j += 37)
                for (int i = 0; i < kGrid.nx; ++i)
                    err = std::max(err, std::fabs(S.v.at(i, j) - std::tanh(kGrid.x(i) - c)));
            CHECK(err < 1e-12);
        }
    }

    SUBCASE("single elementary solution is the constant lambda") {
        auto [vt, rep] = miura::solve_elementary(u, 0.7);
        Field2D Vt = miura::build_primitive(vt, u, 0.7);
        auto S = backlund::superpose(u, {0.7}, {vt}, {Vt}, {0.0});
        CHECK(field::linf(field::operator_add(S.v, Field2D(kGrid, 0.7), 1.0, -1.0)) < 1e-12);
    }

    SUBCASE("three phases give the exact multikink") {
        std::vector<double> lams{-1.0, 0.0, 1.0};
        std::vector<Field2D> vts, Vts;
        for (double lam : lams) {
            auto [vt, rep] = miura::solve_elementary(u, lam);
            Vts.push_back(miura::build_primitive(vt, u, lam));
            vts.push_back(std::move(vt));
        }
        auto S = backlund::superpose(u, lams, vts, Vts, {0.0, 0.0, 0.0});
        double err = 0;
        for (int j = 0; j < kGrid.ny; j += 19)
            for (int i = 0; i < kGrid.nx; ++i) {
                double x = kGrid.x(i), y = kGrid.y(j);
                double m = std::max({-x + y, 0.0, x + y});
                double s1 = std::exp(-x + y - m), s2 = std::exp(-m), s3 = std::exp(x + y - m);
                double want = (s3 - s1) / (s1 + s2 + s3);
                err = std::max(err, std::fabs(S.v.at(i, j) - want));
            }
        CHECK(err < 1e-10);
    }
}

TEST_CASE("modulated_decompose: pure kinks and the G-integral sandwich") {
    Field2D u(kGrid);
    backlund::ElementaryPair pair = backlund::elementary_pair(u);

    auto S = backlund::superpose_pair(pair, 1.25);
    auto [omega, alpha] = backlund::modulated_decompose(S.v, pair);
    double werr = field::linf(omega);
    double aerr = 0;
    for (int j = 0; j < kGrid.ny; ++j) aerr = std::max(aerr, std::fabs(alpha[j] - 1.25));
    CHECK(werr < 1e-10);
    CHECK(aerr < 1e-10);

    // integral of (G_a - G_b) dx = 2 (b - a) for u = 0
    auto g_int = [&](double a) {
        double acc = 0;
        for (int i = 0; i < kGrid.nx; ++i) acc += std::tanh(kGrid.x(i) - a);
        return acc * kGrid.dx();
    };
    double a = -1.0, b = 2.0;
    CHECK(g_int(a) - g_int(b) == doctest::Approx(2.0 * (b - a)).epsilon(1e-12));
}

TEST_CASE("param_map: u = 0 identity and inverse") {
    Field2D u(kGrid);
    backlund::ElementaryPair pair = backlund::elementary_pair(u);
    // the pinned mollifier is Gevrey-regular, not analytic: its quadrature on
    // this grid limits the root to ~1e-5
    CHECK(std::fabs(backlund::param_map(backlund::ParamDirection::CToGamma0, pair, 1.5) - 1.5) <
          5e-5);
    CHECK(std::fabs(backlund::param_map(backlund::ParamDirection::Gamma0ToC, pair, -2.0) + 2.0) <
          5e-5);
    CHECK_THROWS_AS(backlund::param_map(backlund::ParamDirection::Gamma0ToC, pair, 18.5),
                    PreconditionError);
}

TEST_CASE("soliton_add: u = 0 produces the line soliton") {
    Field2D u(kGrid);
    auto out = backlund::soliton_add(u, 0.0);
    double err = 0;
    for (int j = 0; j < kGrid.ny; j += 11)
        for (int i = 0; i < kGrid.nx; ++i)
            err = std::max(err, std::fabs(out.u_bar.at(i, j) - profiles::soliton(1.0, kGrid.x(i))));
    CHECK(err < 1e-9);
    CHECK(out.gamma0 == 0.0);
    CHECK(std::fabs(out.c) < 1e-10);

    auto out2 = backlund::soliton_add(u, 2.5);
    err = 0;
    for (int j = 0; j < kGrid.ny; j += 11)
        for (int i = 0; i < kGrid.nx; ++i)
            err = std::max(err,
                           std::fabs(out2.u_bar.at(i, j) - profiles::soliton(1.0, kGrid.x(i) - 2.5)));
    CHECK(err < 1e-9);
}

TEST_CASE("soliton_add: small-u structure") {
    const double eps = 0.01;
    Field2D u = gaussian_dx(kGrid, eps, 8.0);
    auto out = backlund::soliton_add(u, 0.0);
    double surr = field::integrate_and_norms(u).h_minus_half_zero;

    SUBCASE("u_bar = u - 2 v_x holds by construction") {
        // recompute the split derivative exactly as soliton_add does
        Field2D resid(kGrid);
        for (int j = 0; j < kGrid.ny; ++j)
            for (int i = 0; i < kGrid.nx; ++i)
                resid.at(i, j) = out.v.at(i, j) - std::tanh(kGrid.x(i) - out.alpha[j]);
        auto rx = fft::x_derivative(kGrid, resid.v, 1);
        double err = 0;
        for (int j = 0; j < kGrid.ny; ++j)
            for (int i = 0; i < kGrid.nx; ++i) {
                double vx = rx[std::size_t(j) * kGrid.nx + i] +
                            profiles::sech2(kGrid.x(i) - out.alpha[j]);
                err = std::max(err, std::fabs(out.u_bar.at(i, j) - (u.at(i, j) - 2.0 * vx)));
            }
        CHECK(err < 1e-10);
    }

    SUBCASE("per-row zero mean of omega") {
        double worst = 0;
        for (int j = 0; j < kGrid.ny; ++j)
            worst = std::max(worst, std::fabs(field::row_integral(kGrid, out.omega.row(j))));
        CHECK(worst < 1e-8);
    }

    SUBCASE("reconstruction: v = tanh_a + eta+_a vt+ + eta-_a vt- + omega") {
        double err = 0;
        for (int j = 0; j < kGrid.ny; ++j)
            for (int i = 0; i < kGrid.nx; ++i) {
                double xa = kGrid.x(i) - out.alpha[j];
                double want = std::tanh(xa) + profiles::eta_plus(xa) * out.pair.vt_plus.at(i, j) +
                              profiles::eta_minus(xa) * out.pair.vt_minus.at(i, j) +
                              out.omega.at(i, j);
                err = std::max(err, std::fabs(out.v.at(i, j) - want));
            }
        CHECK(err < 1e-10);
    }

    SUBCASE("alpha_y control and gamma0-vs-c closeness") {
        double ady = 0;
        for (int j = 1; j + 1 < kGrid.ny; ++j) {
            double d = (out.alpha[j + 1] - out.alpha[j - 1]) / (2 * kGrid.dy());
            ady += d * d * kGrid.dy();
        }
        ady = std::sqrt(ady);
        CHECK(ady < 20.0 * surr);
        CHECK(std::fabs(out.gamma0 - out.c) < 20.0 * (1.0 + std::fabs(out.c)) * surr);
    }

    SUBCASE("Lax eigenfunction: log-psi satisfies the log-form Lax equation") {
        auto S = backlund::superpose_pair(out.pair, out.c);
        auto Vy = field::y_derivative_fd6(kGrid, S.log_psi.v);
        Field2D r(kGrid);
        double scale = 0;
        for (std::size_t i = 0; i < r.v.size(); ++i) {
            r.v[i] = Vy[i] - S.vx.v[i] - S.v.v[i] * S.v.v[i] + u.v[i];
            scale = std::max(scale, std::fabs(S.vx.v[i]) + S.v.v[i] * S.v.v[i]);
        }
        double rel = field::interior_l2(r, 32, 32) / scale;
        CHECK(rel < 1e-5);
    }
}

TEST_CASE("multisoliton_add: tau oracle agreement and invariances") {
    Field2D u(kGrid);

    SUBCASE("M = 3 resonance matches u_from_tau and the symbolic value") {
        backlund::MultiSpec ms{{-1.0, 0.0, 1.0}, {0.0, 0.0, 0.0}};
        Field2D ub = backlund::multisoliton_add(u, ms);

        tausol::TauSpec ts;
        ts.M = 3;
        ts.N = 1;
        ts.A = {{1.0, 1.0, 1.0}};
        ts.lambdas = {-1.0, 0.0, 1.0};
        ts.theta0 = {0.0, 0.0, 0.0};
        Field2D ut = tausol::u_from_tau(ts, 0.0, kGrid);

        double diff = 0;
        for (std::size_t i = 0; i < ub.v.size(); ++i)
            diff = std::max(diff, std::fabs(ub.v[i] - ut.v[i]));
        CHECK(diff < 1e-9);

        // -2 d^2/dx^2 log(e^{-x} + 1 + e^{x}) at the origin = -4/3
        int i0 = kGrid.nx / 2, j0 = kGrid.ny / 2;
        CHECK(ub.at(i0, j0) == doctest::Approx(-4.0 / 3.0).epsilon(1e-10));
    }

    SUBCASE("M = 2 with phases matches the shifted line soliton") {
        backlund::MultiSpec ms{{-1.0, 1.0}, {0.9, -0.9}};
        Field2D ub = backlund::multisoliton_add(u, ms);
        double err = 0;
        for (int j = 0; j < kGrid.ny; j += 23)
            for (int i = 0; i < kGrid.nx; ++i)
                err = std::max(err,
                               std::fabs(ub.at(i, j) - profiles::soliton(1.0, kGrid.x(i) - 0.9)));
        CHECK(err < 1e-9);
    }

    SUBCASE("M = 1 with u = 0 returns zero (constant elementary solution)") {
        backlund::MultiSpec ms{{0.5}, {0.3}};
        Field2D ub = backlund::multisoliton_add(u, ms);
        CHECK(field::linf(ub) < 1e-12);
    }

    SUBCASE("M = 1 with u != 0 is a nontrivial soliton-free transform") {
        Field2D usmall = gaussian_dx(kGrid, 0.01, 8.0);
        backlund::MultiSpec ms{{0.5}, {0.3}};
        Field2D ub = backlund::multisoliton_add(usmall, ms);
        double diff = field::l2(field::operator_add(ub, usmall, 1.0, -1.0));
        CHECK(diff > 1e-6);
        CHECK(diff < 1.0);
    }

    SUBCASE("shift invariance of the phase vector") {
        Field2D usmall = gaussian_dx(kGrid, 0.01, 8.0);
        backlund::MultiSpec a{{-1.0, 0.0, 1.0}, {0.1, -0.4, 0.2}};
        backlund::MultiSpec b{{-1.0, 0.0, 1.0}, {3.1, 2.6, 3.2}};
        Field2D ua = backlund::multisoliton_add(usmall, a);
        Field2D ubb = backlund::multisoliton_add(usmall, b);
        double err = 0;
        for (std::size_t i = 0; i < ua.v.size(); ++i)
            err = std::max(err, std::fabs(ua.v[i] - ubb.v[i]));
        CHECK(err < 1e-12);
    }
}

TEST_CASE("multisoliton oracle with nonzero phases: A_m = e^{c_m}") {
    Field2D u(kGrid);
    backlund::MultiSpec ms{{-1.0, 0.0, 1.0}, {0.3, -0.2, 0.5}};
    Field2D ub = backlund::multisoliton_add(u, ms);

    tausol::TauSpec ts;
    ts.M = 3;
    ts.N = 1;
    ts.A = {{std::exp(0.3), std::exp(-0.2), std::exp(0.5)}};
    ts.lambdas = {-1.0, 0.0, 1.0};
    ts.theta0 = {0.0, 0.0, 0.0};
    Field2D ut = tausol::u_from_tau(ts, 0.0, kGrid);
    double diff = 0;
    for (std::size_t i = 0; i < ub.v.size(); ++i)
        diff = std::max(diff, std::fabs(ub.v[i] - ut.v[i]));
    CHECK(diff < 1e-9);
}

TEST_CASE("log-growth statistic of the soliton_add curve stays eps-small") {
    for (double eps : {0.005, 0.01}) {
        Field2D u = gaussian_dx(kGrid, eps, 8.0);
        auto out = backlund::soliton_add(u, 0.0);
        double stat = 0;
        for (int j1 = 0; j1 < kGrid.ny; j1 += 8)
            for (int j2 = j1 + 4; j2 < kGrid.ny; j2 += 8) {
                double dy = std::fabs(kGrid.y(j2) - kGrid.y(j1));
                stat = std::max(stat,
                                std::fabs(out.alpha[j2] - out.alpha[j1]) / std::log(2.0 + dy));
            }
        CHECK(stat < 30.0 * eps);
    }
}
