#include "kp2/tau_solitons.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "kp2/parallel.hpp"

namespace kp2::tausol {
namespace {

void check_shape(const TauSpec& s) {
    if (!(s.N > 0 && s.N < s.M)) throw PreconditionError("TauSpec: need 0 < N < M");
    if (int(s.A.size()) != s.N) throw PreconditionError("TauSpec: A has wrong row count");
    for (const auto& row : s.A)
        if (int(row.size()) != s.M) throw PreconditionError("TauSpec: A has wrong column count");
    if (int(s.lambdas.size()) != s.M || int(s.theta0.size()) != s.M)
        throw PreconditionError("TauSpec: lambda/theta0 must have length M");
    for (int m = 1; m < s.M; ++m)
        if (!(s.lambdas[m] > s.lambdas[m - 1]))
            throw PreconditionError("TauSpec: lambdas must be strictly increasing");
}

double det_small(std::vector<std::vector<double>> a) {
    const int n = int(a.size());
    double det = 1.0;
    for (int c = 0; c < n; ++c) {
        int piv = c;
        for (int r = c + 1; r < n; ++r)
            if (std::fabs(a[r][c]) > std::fabs(a[piv][c])) piv = r;
        if (a[piv][c] == 0.0) return 0.0;
        if (piv != c) {
            std::swap(a[piv], a[c]);
            det = -det;
        }
        det *= a[c][c];
        for (int r = c + 1; r < n; ++r) {
            double f = a[r][c] / a[c][c];
            for (int k = c; k < n; ++k) a[r][k] -= f * a[c][k];
        }
    }
    return det;
}

int rank_of(std::vector<std::vector<double>> a, double tol = 1e-10) {
    const int rows = int(a.size()), cols = int(a[0].size());
    int rank = 0;
    for (int c = 0; c < cols && rank < rows; ++c) {
        int piv = rank;
        for (int r = rank + 1; r < rows; ++r)
            if (std::fabs(a[r][c]) > std::fabs(a[piv][c])) piv = r;
        if (std::fabs(a[piv][c]) < tol) continue;
        std::swap(a[piv], a[rank]);
        for (int r = rank + 1; r < rows; ++r) {
            double f = a[r][c] / a[rank][c];
            for (int k = c; k < cols; ++k) a[r][k] -= f * a[rank][k];
        }
        ++rank;
    }
    return rank;
}

// Second x-log-derivative of the Wronskian at one point. Phases are rescaled
// by the max before anything exponential happens.
double d2_log_tau(const TauSpec& s, double t, double x, double y) {
    const int M = s.M, N = s.N;
    std::vector<double> th(M);
    double thmax = -1e300;
    for (int m = 0; m < M; ++m) {
        double lam = s.lambdas[m];
        th[m] = lam * x + lam * lam * y - 4.0 * lam * lam * lam * t + s.theta0[m];
        thmax = std::max(thmax, th[m]);
    }
    std::vector<double> e(M);
    for (int m = 0; m < M; ++m) e[m] = std::exp(th[m] - thmax);

    if (N == 1) {
        double s0 = 0, s1 = 0, s2 = 0;
        for (int m = 0; m < M; ++m) {
            double w = s.A[0][m] * e[m];
            s0 += w;
            s1 += w * s.lambdas[m];
            s2 += w * s.lambdas[m] * s.lambdas[m];
        }
        if (!(s0 > 0)) throw RegimeError("u_from_tau: tau <= 0 (invalid spec or overflow)");
        double mean = s1 / s0;
        return s2 / s0 - mean * mean;
    }

    // f_i^(p) = sum_m A[i][m] lambda^p e~_m for p = 0..N+1
    std::vector<std::vector<double>> f(N, std::vector<double>(N + 2, 0.0));
    for (int i = 0; i < N; ++i)
        for (int m = 0; m < M; ++m) {
            double w = s.A[i][m] * e[m];
            double p = 1.0;
            for (int d = 0; d < N + 2; ++d) {
                f[i][d] += w * p;
                p *= s.lambdas[m];
            }
        }

    // W[i][j] = f_i^(j); W' and W'' shift the derivative order per column
    auto col = [&](int j) { return j; };
    std::vector<std::vector<double>> W(N, std::vector<double>(N));
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) W[i][j] = f[i][col(j)];

    // LU of W with partial pivoting; also gives sign(det)
    std::vector<std::vector<double>> lu = W;
    std::vector<int> perm(N);
    double detsign = 1.0;
    for (int i = 0; i < N; ++i) perm[i] = i;
    for (int c = 0; c < N; ++c) {
        int piv = c;
        for (int r = c + 1; r < N; ++r)
            if (std::fabs(lu[r][c]) > std::fabs(lu[piv][c])) piv = r;
        if (lu[piv][c] == 0.0) throw RegimeError("u_from_tau: singular Wronskian (tau = 0)");
        if (piv != c) {
            std::swap(lu[piv], lu[c]);
            std::swap(perm[piv], perm[c]);
            detsign = -detsign;
        }
        if (lu[c][c] < 0) detsign = -detsign;
        for (int r = c + 1; r < N; ++r) {
            double fmul = lu[r][c] / lu[c][c];
            lu[r][c] = fmul;
            for (int k = c + 1; k < N; ++k) lu[r][k] -= fmul * lu[c][k];
        }
    }
    if (detsign < 0) throw RegimeError("u_from_tau: tau <= 0 (negative Wronskian)");

    auto solve = [&](const std::vector<double>& rhs) {
        std::vector<double> xv(N);
        for (int i = 0; i < N; ++i) xv[i] = rhs[perm[i]];
        for (int i = 0; i < N; ++i)
            for (int k = 0; k < i; ++k) xv[i] -= lu[i][k] * xv[k];
        for (int i = N - 1; i >= 0; --i) {
            for (int k = i + 1; k < N; ++k) xv[i] -= lu[i][k] * xv[k];
            xv[i] /= lu[i][i];
        }
        return xv;
    };

    // B = W^{-1} W', C2 = W^{-1} W'' column by column
    std::vector<std::vector<double>> B(N, std::vector<double>(N)), C2(N, std::vector<double>(N));
    std::vector<double> rhs(N);
    for (int j = 0; j < N; ++j) {
        for (int i = 0; i < N; ++i) rhs[i] = f[i][j + 1];
        auto bj = solve(rhs);
        for (int i = 0; i < N; ++i) B[i][j] = bj[i];
        for (int i = 0; i < N; ++i) rhs[i] = f[i][j + 2];
        auto cj = solve(rhs);
        for (int i = 0; i < N; ++i) C2[i][j] = cj[i];
    }
    double tr_c = 0, tr_bb = 0;
    for (int i = 0; i < N; ++i) {
        tr_c += C2[i][i];
        for (int j = 0; j < N; ++j) tr_bb += B[i][j] * B[j][i];
    }
    return tr_c - tr_bb;
}

} // namespace

Validation validate_spec(const TauSpec& spec) {
    check_shape(spec);
    Validation v;
    v.label = "(" + std::to_string(spec.M - spec.N) + "," + std::to_string(spec.N) + ")";
    v.rank_ok = rank_of(spec.A) == spec.N;

    // enumerate all C(M, N) minors
    v.minors_ok = true;
    v.min_minor = 1e300;
    std::vector<int> idx(spec.N);
    for (int i = 0; i < spec.N; ++i) idx[i] = i;
    for (;;) {
        std::vector<std::vector<double>> sub(spec.N, std::vector<double>(spec.N));
        for (int r = 0; r < spec.N; ++r)
            for (int c = 0; c < spec.N; ++c) sub[r][c] = spec.A[r][idx[c]];
        double d = det_small(sub);
        if (d < v.min_minor) v.min_minor = d;
        if (d < -1e-12 && v.offending_columns.empty()) {
            v.minors_ok = false;
            v.offending_columns = idx;
        }
        // next combination
        int i = spec.N - 1;
        while (i >= 0 && idx[i] == spec.M - spec.N + i) --i;
        if (i < 0) break;
        ++idx[i];
        for (int k = i + 1; k < spec.N; ++k) idx[k] = idx[k - 1] + 1;
    }
    v.valid = v.rank_ok && v.minors_ok;
    return v;
}

double u_from_tau_at(const TauSpec& spec, double t, double x, double y) {
    return -2.0 * d2_log_tau(spec, t, x, y);
}

Field2D u_from_tau(const TauSpec& spec, double t, const Grid2D& g) {
    check_shape(spec);
    Validation val = validate_spec(spec);
    if (!val.valid)
        throw RegimeError("u_from_tau: invalid spec (rank or minor check failed, label " +
                          val.label + ")");
    Field2D u(g);
    parallel_for(g.ny, [&](int j) {
        double* row = u.row(j);
        for (int i = 0; i < g.nx; ++i) row[i] = -2.0 * d2_log_tau(spec, t, g.x(i), g.y(j));
    });
    return u;
}

TauSpec parse_tau_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw PreconditionError("cannot open tau spec " + path);
    TauSpec s;
    std::string line;
    bool reading_a = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (reading_a) {
            std::istringstream iss(line);
            std::vector<double> row;
            double v;
            while (iss >> v) row.push_back(v);
            if (!row.empty()) s.A.push_back(std::move(row));
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        std::string key = line.substr(0, eq), val = line.substr(eq + 1);
        if (key == "M") s.M = std::stoi(val);
        else if (key == "N") s.N = std::stoi(val);
        else if (key == "lambda" || key == "theta0") {
            std::istringstream iss(val);
            std::vector<double> vv;
            double v;
            while (iss >> v) vv.push_back(v);
            (key == "lambda" ? s.lambdas : s.theta0) = std::move(vv);
        } else if (key == "A") {
            reading_a = true;
        }
    }
    if (s.theta0.empty()) s.theta0.assign(std::size_t(std::max(s.M, 0)), 0.0);
    check_shape(s);
    return s;
}

void write_tau_spec(const std::string& path, const TauSpec& spec) {
    std::ofstream out(path);
    if (!out) throw PreconditionError("cannot write tau spec " + path);
    out << "M=" << spec.M << "\nN=" << spec.N << "\nlambda=";
    for (int m = 0; m < spec.M; ++m) out << (m ? " " : "") << spec.lambdas[m];
    out << "\ntheta0=";
    for (int m = 0; m < spec.M; ++m) out << (m ? " " : "") << spec.theta0[m];
    out << "\nA=\n";
    for (const auto& row : spec.A) {
        for (int m = 0; m < spec.M; ++m) out << (m ? " " : "") << row[m];
        out << "\n";
    }
}

} // namespace kp2::tausol
