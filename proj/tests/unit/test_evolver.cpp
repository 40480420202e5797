#include <doctest.h>

#include <cmath>

#include "kp2/fft.hpp"
#include "kp2/field_ops.hpp"
#include "kp2/kp2_evolver.hpp"
#include "kp2/profiles.hpp"

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

TEST_CASE("evolve: zero stays zero") {
    Field2D u(kGrid);
    evolve::EvolveOptions o;
    o.T = 0.01;
    o.dt = 1e-3;
    auto traj = evolve::evolve(u, o);
    CHECK(field::linf(traj.snapshots.back()) == 0.0);
}

TEST_CASE("evolve: linear step rotates an eigenmode pair exactly") {
    Grid2D g = make_grid(64, 64, 16, 16, -8, -8);
    double wx = 2 * M_PI / g.Lx, wy = 2 * M_PI / g.Ly;
    Field2D u(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            u.at(i, j) = std::sin(wx * g.x(i)) * std::cos(wy * g.y(j));

    evolve::EvolveOptions o;
    o.dt = 0.01;
    o.T = 0.01;
    o.disable_nonlinear = true;
    o.save_every = 1;
    auto traj = evolve::evolve(u, o);
    // u(t) = sin(wx x + S t) cos(wy y), S = wx^3 - 3 wy^2/wx
    double S = wx * wx * wx - 3.0 * wy * wy / wx;
    double err = 0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            double want = std::sin(wx * g.x(i) + S * o.T) * std::cos(wy * g.y(j));
            err = std::max(err, std::fabs(traj.snapshots.back().at(i, j) - want));
        }
    CHECK(err < 1e-12);
}

TEST_CASE("evolve: l2 conservation for small smooth data") {
    Field2D u = gaussian_dx(kGrid, 0.01, 8.0);
    evolve::EvolveOptions o;
    o.T = 0.25;
    o.dt = 1e-3;
    o.save_every = 250;
    auto traj = evolve::evolve(u, o);
    double drift = std::fabs(traj.l2_log.back() - traj.l2_log.front()) / traj.l2_log.front();
    CHECK(drift < 1e-8);

    // x-mean per row stays below 1e-10
    const Field2D& f = traj.snapshots.back();
    double worst = 0;
    for (int j = 0; j < kGrid.ny; ++j)
        worst = std::max(worst, std::fabs(field::row_integral(kGrid, f.row(j)) / kGrid.Lx));
    CHECK(worst < 1e-10);
}

TEST_CASE("evolve: time reversibility") {
    Field2D u = gaussian_dx(kGrid, 0.01, 8.0);
    evolve::EvolveOptions o;
    o.T = 0.1;
    o.dt = 1e-3;
    o.save_every = 100;
    auto fwd = evolve::evolve(u, o);
    o.dt = -1e-3;
    auto back = evolve::evolve(fwd.snapshots.back(), o);
    double num = 0, den = 0;
    const Field2D& r = back.snapshots.back();
    for (std::size_t i = 0; i < r.v.size(); ++i) {
        num += (r.v[i] - u.v[i]) * (r.v[i] - u.v[i]);
        den += u.v[i] * u.v[i];
    }
    CHECK(std::sqrt(num / den) < 1e-6);
}

TEST_CASE("evolve: lab soliton speed is 4") {
    Field2D phi(kGrid);
    for (int j = 0; j < kGrid.ny; ++j)
        for (int i = 0; i < kGrid.nx; ++i) phi.at(i, j) = profiles::soliton(1.0, kGrid.x(i) + 8.0);
    evolve::EvolveOptions o;
    o.T = 0.5;
    o.dt = 1e-3;
    o.save_every = 100;
    auto traj = evolve::evolve(phi, o);
    double speed = evolve::lab_soliton_speed(traj);
    CHECK(speed == doctest::Approx(4.0).epsilon(0.005));
}

TEST_CASE("evolve: scaled soliton travels at 4 lambda^2") {
    const double lam = 0.8;
    Field2D phi(kGrid);
    for (int j = 0; j < kGrid.ny; ++j)
        for (int i = 0; i < kGrid.nx; ++i) phi.at(i, j) = profiles::soliton(lam, kGrid.x(i) + 8.0);
    evolve::EvolveOptions o;
    o.T = 0.5;
    o.dt = 1e-3;
    o.save_every = 100;
    auto traj = evolve::evolve(phi, o);
    CHECK(evolve::lab_soliton_speed(traj) == doctest::Approx(4.0 * lam * lam).epsilon(0.005));
}

TEST_CASE("evolve: static field has zero fitted speed") {
    Field2D phi(kGrid);
    for (int j = 0; j < kGrid.ny; ++j)
        for (int i = 0; i < kGrid.nx; ++i) phi.at(i, j) = profiles::soliton(1.0, kGrid.x(i));
    evolve::EvolveOptions o;
    o.T = 0.05;
    o.dt = 1e-3;
    o.save_every = 10;
    o.disable_linear = true;
    o.disable_nonlinear = true;
    auto traj = evolve::evolve(phi, o);
    CHECK(std::fabs(evolve::lab_soliton_speed(traj)) < 1e-12);
}

TEST_CASE("evolve_with_soliton: the soliton is a steady state") {
    Field2D g0(kGrid);
    ShiftCurve alpha(kGrid.ny, 0.0);
    evolve::EvolveOptions o;
    o.T = 0.05;
    o.dt = 1e-3;
    o.save_every = 50;
    auto traj = evolve::evolve_with_soliton(g0, alpha, o);
    CHECK(field::linf(traj.snapshots.back()) == 0.0);
}

TEST_CASE("evolve_with_soliton: translation zero mode is steady") {
    const double delta = 0.1;
    Field2D g0(kGrid);
    for (int j = 0; j < kGrid.ny; ++j)
        for (int i = 0; i < kGrid.nx; ++i)
            g0.at(i, j) = profiles::soliton(1.0, kGrid.x(i) - delta) - profiles::soliton(1.0, kGrid.x(i));
    ShiftCurve alpha(kGrid.ny, 0.0);
    evolve::EvolveOptions o;
    o.T = 0.25;
    o.dt = 1e-3;
    o.save_every = 250;
    auto traj = evolve::evolve_with_soliton(g0, alpha, o);
    double num = 0, den = 0;
    const Field2D& r = traj.snapshots.back();
    for (std::size_t i = 0; i < r.v.size(); ++i) {
        num += (r.v[i] - g0.v[i]) * (r.v[i] - g0.v[i]);
        den += g0.v[i] * g0.v[i];
    }
    CHECK(std::sqrt(num / den) < 1e-5);
}

TEST_CASE("evolve_with_soliton: perturbation stays bounded (stability smoke)") {
    Field2D g0(kGrid);
    for (int j = 0; j < kGrid.ny; ++j)
        for (int i = 0; i < kGrid.nx; ++i) {
            double x = kGrid.x(i), y = kGrid.y(j);
            g0.at(i, j) = 0.01 * std::exp(-(x * x + y * y) / 8.0);
        }
    ShiftCurve alpha(kGrid.ny, 0.0);
    evolve::EvolveOptions o;
    o.T = 0.5;
    o.dt = 1e-3;
    o.save_every = 500;
    auto traj = evolve::evolve_with_soliton(g0, alpha, o);
    double ratio = traj.l2_log.back() / traj.l2_log.front();
    CHECK(ratio < 3.0);
    CHECK(ratio > 1.0 / 3.0);
}

TEST_CASE("frame consistency: lab evolution equals shifted co-moving evolution") {
    Field2D g0(kGrid);
    for (int j = 0; j < kGrid.ny; ++j)
        for (int i = 0; i < kGrid.nx; ++i) {
            double x = kGrid.x(i), y = kGrid.y(j);
            g0.at(i, j) = 0.01 * std::exp(-(x * x + y * y) / 8.0);
        }
    Field2D lab0(kGrid);
    for (int j = 0; j < kGrid.ny; ++j)
        for (int i = 0; i < kGrid.nx; ++i)
            lab0.at(i, j) = profiles::soliton(1.0, kGrid.x(i)) + g0.at(i, j);

    evolve::EvolveOptions o;
    o.T = 0.25;
    o.dt = 1e-3;
    o.save_every = 250;
    auto lab = evolve::evolve(lab0, o);
    ShiftCurve alpha(kGrid.ny, 0.0);
    auto com = evolve::evolve_with_soliton(g0, alpha, o);

    // lab result shifted back by 4T should equal phi + g(T)
    Field2D shifted(kGrid);
    shifted.v = fft::x_translate(kGrid, lab.snapshots.back().v, -4.0 * o.T);
    double num = 0, den = 0;
    for (int j = 0; j < kGrid.ny; ++j)
        for (int i = 0; i < kGrid.nx; ++i) {
            double want = profiles::soliton(1.0, kGrid.x(i)) + com.snapshots.back().at(i, j);
            double got = shifted.at(i, j);
            num += (got - want) * (got - want);
            den += want * want;
        }
    CHECK(std::sqrt(num / den) < 1e-5);
}

TEST_CASE("evolve: CFL and blow-up guards") {
    Field2D u(kGrid);
    for (int j = 0; j < kGrid.ny; ++j)
        for (int i = 0; i < kGrid.nx; ++i) u.at(i, j) = profiles::soliton(1.0, kGrid.x(i));
    evolve::EvolveOptions o;
    o.dt = 0.1;   // far beyond 0.5 dx / max|6u|
    o.T = 0.2;
    CHECK_THROWS_AS(evolve::evolve(u, o), RegimeError);
}
