#include "kp2/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

namespace kp2::fft {
namespace {

constexpr unsigned kFlags = FFTW_ESTIMATE | FFTW_UNALIGNED;

struct PlanSet {
    fftw_plan row_f = nullptr, row_b = nullptr;     // 1D r2c/c2r length nx
    fftw_plan rows_f = nullptr, rows_b = nullptr;   // batch over ny rows
    fftw_plan cols_f = nullptr, cols_b = nullptr;   // batch over nx columns
    fftw_plan two_f = nullptr, two_b = nullptr;     // full 2D
};

std::mutex g_mutex;
std::map<std::pair<int, int>, PlanSet> g_plans;

fftw_complex* fc(cplx* p) { return reinterpret_cast<fftw_complex*>(p); }

PlanSet& plans(int nx, int ny) {
    std::lock_guard<std::mutex> lock(g_mutex);
    auto key = std::make_pair(nx, ny);
    auto it = g_plans.find(key);
    if (it != g_plans.end()) return it->second;

    PlanSet ps;
    std::vector<double> re(std::size_t(nx) * std::max(ny, 1));
    std::vector<cplx> sp(std::size_t(std::max(nx, ny) / 2 + 1) * std::max({nx, ny, 1}));

    ps.row_f = fftw_plan_dft_r2c_1d(nx, re.data(), fc(sp.data()), kFlags);
    ps.row_b = fftw_plan_dft_c2r_1d(nx, fc(sp.data()), re.data(), kFlags);
    if (ny > 0) {
        int n[1] = {nx};
        ps.rows_f = fftw_plan_many_dft_r2c(1, n, ny, re.data(), nullptr, 1, nx,
                                           fc(sp.data()), nullptr, 1, nx / 2 + 1, kFlags);
        ps.rows_b = fftw_plan_many_dft_c2r(1, n, ny, fc(sp.data()), nullptr, 1, nx / 2 + 1,
                                           re.data(), nullptr, 1, nx, kFlags);
        int m[1] = {ny};
        ps.cols_f = fftw_plan_many_dft_r2c(1, m, nx, re.data(), nullptr, nx, 1,
                                           fc(sp.data()), nullptr, 1, ny / 2 + 1, kFlags);
        ps.cols_b = fftw_plan_many_dft_c2r(1, m, nx, fc(sp.data()), nullptr, 1, ny / 2 + 1,
                                           re.data(), nullptr, nx, 1, kFlags);
        ps.two_f = fftw_plan_dft_r2c_2d(ny, nx, re.data(), fc(sp.data()), kFlags);
        ps.two_b = fftw_plan_dft_c2r_2d(ny, nx, fc(sp.data()), re.data(), kFlags);
    }
    return g_plans.emplace(key, ps).first->second;
}

void scale_real(double* p, std::size_t n, double s) {
    for (std::size_t i = 0; i < n; ++i) p[i] *= s;
}

} // namespace

void r2c(int n, const double* in, cplx* out) {
    fftw_execute_dft_r2c(plans(n, 0).row_f, const_cast<double*>(in), fc(out));
}

void c2r(int n, const cplx* in, double* out) {
    // c2r destroys its input; work on a copy so callers keep their spectra.
    std::vector<cplx> tmp(in, in + n / 2 + 1);
    fftw_execute_dft_c2r(plans(n, 0).row_b, fc(tmp.data()), out);
    scale_real(out, n, 1.0 / n);
}

void rows_r2c(const Grid2D& g, const double* in, cplx* spec) {
    fftw_execute_dft_r2c(plans(g.nx, g.ny).rows_f, const_cast<double*>(in), fc(spec));
}

void rows_c2r(const Grid2D& g, const cplx* spec, double* out) {
    std::vector<cplx> tmp(spec, spec + std::size_t(g.ny) * (g.nx / 2 + 1));
    fftw_execute_dft_c2r(plans(g.nx, g.ny).rows_b, fc(tmp.data()), out);
    scale_real(out, g.size(), 1.0 / g.nx);
}

void cols_r2c(const Grid2D& g, const double* in, cplx* spec) {
    fftw_execute_dft_r2c(plans(g.nx, g.ny).cols_f, const_cast<double*>(in), fc(spec));
}

void cols_c2r(const Grid2D& g, const cplx* spec, double* out) {
    std::vector<cplx> tmp(spec, spec + std::size_t(g.nx) * (g.ny / 2 + 1));
    fftw_execute_dft_c2r(plans(g.nx, g.ny).cols_b, fc(tmp.data()), out);
    scale_real(out, g.size(), 1.0 / g.ny);
}

void fft2_r2c(const Grid2D& g, const double* in, cplx* spec) {
    fftw_execute_dft_r2c(plans(g.nx, g.ny).two_f, const_cast<double*>(in), fc(spec));
}

void fft2_c2r(const Grid2D& g, const cplx* spec, double* out) {
    std::vector<cplx> tmp(spec, spec + std::size_t(g.ny) * (g.nx / 2 + 1));
    fftw_execute_dft_c2r(plans(g.nx, g.ny).two_b, fc(tmp.data()), out);
    scale_real(out, g.size(), 1.0 / g.size());
}

std::vector<double> x_derivative(const Grid2D& g, const std::vector<double>& v, int order) {
    const int nk = g.nx / 2 + 1;
    std::vector<cplx> spec(std::size_t(g.ny) * nk);
    rows_r2c(g, v.data(), spec.data());
    std::vector<cplx> mult(nk);
    for (int k = 0; k < nk; ++k) {
        cplx iw(0.0, 2.0 * M_PI * xi(k, g.nx, g.Lx));
        cplx m = 1.0;
        for (int o = 0; o < order; ++o) m *= iw;
        // Nyquist mode of an odd-order derivative has no real representation.
        if (k == g.nx / 2 && order % 2 == 1) m = 0.0;
        mult[k] = m;
    }
    for (int j = 0; j < g.ny; ++j) {
        cplx* row = spec.data() + std::size_t(j) * nk;
        for (int k = 0; k < nk; ++k) row[k] *= mult[k];
    }
    std::vector<double> out(g.size());
    rows_c2r(g, spec.data(), out.data());
    return out;
}

std::vector<double> y_derivative(const Grid2D& g, const std::vector<double>& v, int order) {
    const int nk = g.ny / 2 + 1;
    std::vector<cplx> spec(std::size_t(g.nx) * nk);
    cols_r2c(g, v.data(), spec.data());
    std::vector<cplx> mult(nk);
    for (int k = 0; k < nk; ++k) {
        cplx iw(0.0, 2.0 * M_PI * xi(k, g.ny, g.Ly));
        cplx m = 1.0;
        for (int o = 0; o < order; ++o) m *= iw;
        if (k == g.ny / 2 && order % 2 == 1) m = 0.0;
        mult[k] = m;
    }
    for (int i = 0; i < g.nx; ++i) {
        cplx* col = spec.data() + std::size_t(i) * nk;
        for (int k = 0; k < nk; ++k) col[k] *= mult[k];
    }
    std::vector<double> out(g.size());
    cols_c2r(g, spec.data(), out.data());
    return out;
}

std::vector<double> x_translate(const Grid2D& g, const std::vector<double>& v, double shift) {
    const int nk = g.nx / 2 + 1;
    std::vector<cplx> spec(std::size_t(g.ny) * nk);
    rows_r2c(g, v.data(), spec.data());
    std::vector<cplx> mult(nk);
    for (int k = 0; k < nk; ++k) {
        double ph = -2.0 * M_PI * xi(k, g.nx, g.Lx) * shift;
        mult[k] = cplx(std::cos(ph), std::sin(ph));
    }
    for (int j = 0; j < g.ny; ++j) {
        cplx* row = spec.data() + std::size_t(j) * nk;
        for (int k = 0; k < nk; ++k) row[k] *= mult[k];
    }
    std::vector<double> out(g.size());
    rows_c2r(g, spec.data(), out.data());
    return out;
}

} // namespace kp2::fft
