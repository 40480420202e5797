#include "kp2/kernels.hpp"

#include <cmath>

// Reference kernels. Reductions run 4 striped accumulators (lane j takes
// indices 4k+j) and combine as (l0+l1)+(l2+l3), then fold the tail in order;
// the AVX2 variants reproduce exactly this association.

namespace kp2::kern {
namespace {

void axpby_s(double a, const double* x, double b, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] = a * x[i] + b * y[i];
}

void mul_s(const double* x, const double* y, double* z, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) z[i] = x[i] * y[i];
}

void square_s(const double* x, double* z, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) z[i] = x[i] * x[i];
}

void scale_s(double* x, double a, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

void cmul_s(const cplx* w, cplx* z, std::size_t n) {
    const double* pw = reinterpret_cast<const double*>(w);
    double* pz = reinterpret_cast<double*>(z);
    for (std::size_t i = 0; i < n; ++i) {
        double wr = pw[2 * i], wi = pw[2 * i + 1];
        double zr = pz[2 * i], zi = pz[2 * i + 1];
        pz[2 * i] = wr * zr - wi * zi;
        pz[2 * i + 1] = wr * zi + wi * zr;
    }
}

inline void cmac(const double* a, const double* b, std::size_t i, double& re, double& im) {
    double ar = a[2 * i], ai = a[2 * i + 1];
    double br = b[2 * i], bi = b[2 * i + 1];
    re += ar * br - ai * bi;
    im += ar * bi + ai * br;
}

void etd_combine_s(const cplx* e, const cplx* a, const cplx* b,
                   const cplx* s0, const cplx* s1, cplx* w, std::size_t n) {
    const double* pe = reinterpret_cast<const double*>(e);
    const double* pa = reinterpret_cast<const double*>(a);
    const double* pb = reinterpret_cast<const double*>(b);
    const double* p0 = reinterpret_cast<const double*>(s0);
    const double* p1 = reinterpret_cast<const double*>(s1);
    double* pw = reinterpret_cast<double*>(w);
    for (std::size_t i = 0; i < n; ++i) {
        double re = 0, im = 0;
        cmac(pe, pw, i, re, im);
        cmac(pa, p0, i, re, im);
        cmac(pb, p1, i, re, im);
        pw[2 * i] = re;
        pw[2 * i + 1] = im;
    }
}

template <class F>
double reduce4(const double* x, const double* y, std::size_t n, F term) {
    double l0 = 0, l1 = 0, l2 = 0, l3 = 0;
    std::size_t nv = n - n % 4;
    for (std::size_t i = 0; i < nv; i += 4) {
        l0 += term(x, y, i);
        l1 += term(x, y, i + 1);
        l2 += term(x, y, i + 2);
        l3 += term(x, y, i + 3);
    }
    double s = (l0 + l1) + (l2 + l3);
    for (std::size_t i = nv; i < n; ++i) s += term(x, y, i);
    return s;
}

double sum_sq_s(const double* x, std::size_t n) {
    return reduce4(x, x, n, [](const double* a, const double*, std::size_t i) { return a[i] * a[i]; });
}

double dot_s(const double* x, const double* y, std::size_t n) {
    return reduce4(x, y, n, [](const double* a, const double* b, std::size_t i) { return a[i] * b[i]; });
}

double sum_abs3_s(const double* x, std::size_t n) {
    return reduce4(x, x, n, [](const double* a, const double*, std::size_t i) {
        double t = std::fabs(a[i]);
        return t * t * t;
    });
}

double sum_s(const double* x, std::size_t n) {
    return reduce4(x, x, n, [](const double* a, const double*, std::size_t i) { return a[i]; });
}

double max_abs_s(const double* x, std::size_t n) {
    double m = 0;
    for (std::size_t i = 0; i < n; ++i) m = std::fmax(m, std::fabs(x[i]));
    return m;
}

} // namespace

const Ops& scalar_ops() {
    static const Ops t{axpby_s, mul_s, square_s, scale_s, cmul_s, etd_combine_s,
                       sum_sq_s, dot_s, sum_abs3_s, max_abs_s, sum_s};
    return t;
}

} // namespace kp2::kern
