#include "kp2/profiles.hpp"

#include <algorithm>
#include <cmath>

#include "kp2/fft.hpp"
#include "kp2/field_ops.hpp"
#include "kp2/parallel.hpp"

namespace kp2::profiles {

double soliton(double lambda, double x) {
    double s = 1.0 / std::cosh(lambda * x);
    return -2.0 * lambda * lambda * s * s;
}

double kink(double lambda, double x) { return lambda * std::tanh(lambda * x); }

double eta_plus(double x) { return 0.5 * (1.0 + std::tanh(x)); }

double eta_minus(double x) { return 0.5 * (1.0 - std::tanh(x)); }

double sech2(double x) {
    double s = 1.0 / std::cosh(x);
    return s * s;
}

Field2D eval_profile(ProfileKind kind, const ProfileParams& p, const Grid2D& g) {
    if (!(p.lambda > 0)) throw PreconditionError("eval_profile: lambda must be positive");
    if (p.shift_curve && p.shift_curve->size() != g.ny)
        throw PreconditionError("eval_profile: shift curve length != ny");
    if (kind == ProfileKind::Mollifier) {
        if (p.shift_curve) throw PreconditionError("eval_profile: mollifier takes no curve");
        return mollifier(g, p.x_shift, 0.0);
    }

    Field2D f(g);
    parallel_for(g.ny, [&](int j) {
        double shift = p.x_shift + (p.shift_curve ? (*p.shift_curve)[j] : 0.0);
        double* row = f.row(j);
        for (int i = 0; i < g.nx; ++i) {
            double x = g.x(i) - shift;
            switch (kind) {
                case ProfileKind::Soliton: row[i] = soliton(p.lambda, x); break;
                case ProfileKind::Kink: row[i] = kink(p.lambda, x); break;
                case ProfileKind::EtaPlus: row[i] = eta_plus(x); break;
                case ProfileKind::EtaMinus: row[i] = eta_minus(x); break;
                case ProfileKind::Sech2: row[i] = sech2(p.lambda * x); break;
                case ProfileKind::Mollifier: break;
            }
        }
    });
    return f;
}

Field2D mollifier(const Grid2D& g, double cx, double cy) {
    Field2D f(g);
    for (int j = 0; j < g.ny; ++j) {
        double* row = f.row(j);
        double yy = g.y(j) - cy;
        for (int i = 0; i < g.nx; ++i) {
            double xx = g.x(i) - cx;
            double r2 = xx * xx + yy * yy;
            row[i] = r2 < 1.0 ? std::exp(-1.0 / (1.0 - r2)) : 0.0;
        }
    }
    double mass = field::integrate_and_norms(f).integral;
    for (double& v : f.v) v /= mass;
    return f;
}

double mollifier_pairing(const Field2D& f, double cx, double cy) {
    const Grid2D& g = f.grid;
    Field2D rho = mollifier(g, cx, cy);
    double acc = 0;
    for (std::size_t i = 0; i < f.v.size(); ++i) acc += rho.v[i] * f.v[i];
    return acc * g.dx() * g.dy();
}

Field2D miura_apply(MiuraSign sign, double lambda, const Field2D& v) {
    const Grid2D& g = v.grid;
    if (v.meta.kind == Background::Kind::Multikink)
        throw PreconditionError("miura_apply: multikink backgrounds are not supported");

    // Residual (decaying part) and analytic background derivatives.
    Field2D res(g);
    std::vector<double> bx(g.size(), 0.0), by(g.size(), 0.0);
    const bool kinkbg = v.meta.kind == Background::Kind::Kink;
    const double lb = v.meta.lambda;

    std::vector<double> dalpha(g.ny, 0.0);
    if (kinkbg && !v.meta.curve.empty()) {
        const auto& a = v.meta.curve;
        for (int j = 0; j < g.ny; ++j) {
            int jm = std::max(0, j - 1), jp = std::min(g.ny - 1, j + 1);
            dalpha[j] = (a[jp] - a[jm]) / ((jp - jm) * g.dy());
        }
    }
    for (int j = 0; j < g.ny; ++j) {
        const double* src = v.row(j);
        double* r = res.row(j);
        for (int i = 0; i < g.nx; ++i) {
            double b = v.meta.value(g.x(i), j);
            r[i] = src[i] - b;
            if (kinkbg) {
                double s = sech2(lb * (g.x(i) - v.meta.shift(j)));
                bx[std::size_t(j) * g.nx + i] = lb * lb * s;
                by[std::size_t(j) * g.nx + i] = -dalpha[j] * lb * lb * s;
            }
        }
    }
    if (!field::x_decays(res))
        throw PreconditionError("miura_apply: residual does not decay at the x-edges");

    std::vector<double> rx = fft::x_derivative(g, res.v, 1);
    std::vector<double> ry = fft::y_derivative(g, res.v, 1);

    // v_y = residual_y + background_y; its x-antiderivative is pinned to 0 at
    // the left edge, where v_y decays.
    Field2D vy(g);
    for (std::size_t i = 0; i < vy.v.size(); ++i) vy.v[i] = ry[i] + by[i];
    if (!field::x_decays(vy))
        throw PreconditionError("miura_apply: v_y does not decay at the left edge");
    Field2D P = field::x_antiderivative(vy, field::AntiderivMode::CumulativeFromLeft);

    const double sgn = sign == MiuraSign::Plus ? 1.0 : -1.0;
    Field2D out(g);
    for (int j = 0; j < g.ny; ++j) {
        const double* vv = v.row(j);
        double* o = out.row(j);
        for (int i = 0; i < g.nx; ++i) {
            std::size_t idx = std::size_t(j) * g.nx + i;
            double vx = rx[idx] + bx[idx];
            o[i] = -(P.v[idx] + sgn * vx - vv[i] * vv[i] + lambda * lambda);
        }
    }
    return out;
}

} // namespace kp2::profiles
