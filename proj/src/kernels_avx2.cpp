#include "kp2/kernels.hpp"

#include <cmath>
#include <immintrin.h>

// AVX2 variants. Multiplies and adds only (no FMA), 4-lane striped reductions
// with the same final combine as the scalar reference, so outputs are bitwise
// identical to kernels_scalar.cpp. This file is compiled with -mavx2; nothing
// here runs unless the dispatcher selected Avx2 at startup.

namespace kp2::kern {
namespace {

void axpby_v(double a, const double* x, double b, double* y, std::size_t n) {
    __m256d va = _mm256_set1_pd(a), vb = _mm256_set1_pd(b);
    std::size_t nv = n - n % 4;
    for (std::size_t i = 0; i < nv; i += 4) {
        __m256d vx = _mm256_loadu_pd(x + i);
        __m256d vy = _mm256_loadu_pd(y + i);
        vy = _mm256_add_pd(_mm256_mul_pd(va, vx), _mm256_mul_pd(vb, vy));
        _mm256_storeu_pd(y + i, vy);
    }
    for (std::size_t i = nv; i < n; ++i) y[i] = a * x[i] + b * y[i];
}

void mul_v(const double* x, const double* y, double* z, std::size_t n) {
    std::size_t nv = n - n % 4;
    for (std::size_t i = 0; i < nv; i += 4)
        _mm256_storeu_pd(z + i, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    for (std::size_t i = nv; i < n; ++i) z[i] = x[i] * y[i];
}

void square_v(const double* x, double* z, std::size_t n) { mul_v(x, x, z, n); }

void scale_v(double* x, double a, std::size_t n) {
    __m256d va = _mm256_set1_pd(a);
    std::size_t nv = n - n % 4;
    for (std::size_t i = 0; i < nv; i += 4)
        _mm256_storeu_pd(x + i, _mm256_mul_pd(_mm256_loadu_pd(x + i), va));
    for (std::size_t i = nv; i < n; ++i) x[i] *= a;
}

// Two interleaved complex products per register: lane pairs give
// (wr*zr - wi*zi, wr*zi + wi*zr), matching the scalar expression order.
inline __m256d cmul2(__m256d w, __m256d z) {
    __m256d wre = _mm256_movedup_pd(w);          // [wr0 wr0 wr1 wr1]
    __m256d wim = _mm256_permute_pd(w, 0xF);     // [wi0 wi0 wi1 wi1]
    __m256d zsw = _mm256_permute_pd(z, 0x5);     // [zi0 zr0 zi1 zr1]
    return _mm256_addsub_pd(_mm256_mul_pd(wre, z), _mm256_mul_pd(wim, zsw));
}

void cmul_v(const cplx* w, cplx* z, std::size_t n) {
    const double* pw = reinterpret_cast<const double*>(w);
    double* pz = reinterpret_cast<double*>(z);
    std::size_t nv = n - n % 2;
    for (std::size_t i = 0; i < nv; i += 2) {
        __m256d r = cmul2(_mm256_loadu_pd(pw + 2 * i), _mm256_loadu_pd(pz + 2 * i));
        _mm256_storeu_pd(pz + 2 * i, r);
    }
    for (std::size_t i = nv; i < n; ++i) {
        double wr = pw[2 * i], wi = pw[2 * i + 1];
        double zr = pz[2 * i], zi = pz[2 * i + 1];
        pz[2 * i] = wr * zr - wi * zi;
        pz[2 * i + 1] = wr * zi + wi * zr;
    }
}

void etd_combine_v(const cplx* e, const cplx* a, const cplx* b,
                   const cplx* s0, const cplx* s1, cplx* w, std::size_t n) {
    const double* pe = reinterpret_cast<const double*>(e);
    const double* pa = reinterpret_cast<const double*>(a);
    const double* pb = reinterpret_cast<const double*>(b);
    const double* p0 = reinterpret_cast<const double*>(s0);
    const double* p1 = reinterpret_cast<const double*>(s1);
    double* pw = reinterpret_cast<double*>(w);
    std::size_t nv = n - n % 2;
    for (std::size_t i = 0; i < nv; i += 2) {
        __m256d t1 = cmul2(_mm256_loadu_pd(pe + 2 * i), _mm256_loadu_pd(pw + 2 * i));
        __m256d t2 = cmul2(_mm256_loadu_pd(pa + 2 * i), _mm256_loadu_pd(p0 + 2 * i));
        __m256d t3 = cmul2(_mm256_loadu_pd(pb + 2 * i), _mm256_loadu_pd(p1 + 2 * i));
        _mm256_storeu_pd(pw + 2 * i, _mm256_add_pd(_mm256_add_pd(t1, t2), t3));
    }
    for (std::size_t i = nv; i < n; ++i) {
        double re = 0, im = 0;
        auto mac = [&](const double* p, const double* q) {
            double ar = p[2 * i], ai = p[2 * i + 1];
            double br = q[2 * i], bi = q[2 * i + 1];
            re += ar * br - ai * bi;
            im += ar * bi + ai * br;
        };
        mac(pe, pw);
        mac(pa, p0);
        mac(pb, p1);
        pw[2 * i] = re;
        pw[2 * i + 1] = im;
    }
}

inline double fold4(__m256d acc) {
    double lane[4];
    _mm256_storeu_pd(lane, acc);
    return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

double sum_sq_v(const double* x, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t nv = n - n % 4;
    for (std::size_t i = 0; i < nv; i += 4) {
        __m256d v = _mm256_loadu_pd(x + i);
        acc = _mm256_add_pd(acc, _mm256_mul_pd(v, v));
    }
    double s = fold4(acc);
    for (std::size_t i = nv; i < n; ++i) s += x[i] * x[i];
    return s;
}

double dot_v(const double* x, const double* y, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t nv = n - n % 4;
    for (std::size_t i = 0; i < nv; i += 4)
        acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    double s = fold4(acc);
    for (std::size_t i = nv; i < n; ++i) s += x[i] * y[i];
    return s;
}

double sum_abs3_v(const double* x, std::size_t n) {
    const __m256d sign = _mm256_set1_pd(-0.0);
    __m256d acc = _mm256_setzero_pd();
    std::size_t nv = n - n % 4;
    for (std::size_t i = 0; i < nv; i += 4) {
        __m256d v = _mm256_andnot_pd(sign, _mm256_loadu_pd(x + i));
        acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_mul_pd(v, v), v));
    }
    double s = fold4(acc);
    for (std::size_t i = nv; i < n; ++i) {
        double t = std::fabs(x[i]);
        s += t * t * t;
    }
    return s;
}

double sum_v(const double* x, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t nv = n - n % 4;
    for (std::size_t i = 0; i < nv; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
    double s = fold4(acc);
    for (std::size_t i = nv; i < n; ++i) s += x[i];
    return s;
}

double max_abs_v(const double* x, std::size_t n) {
    const __m256d sign = _mm256_set1_pd(-0.0);
    __m256d acc = _mm256_setzero_pd();
    std::size_t nv = n - n % 4;
    for (std::size_t i = 0; i < nv; i += 4)
        acc = _mm256_max_pd(acc, _mm256_andnot_pd(sign, _mm256_loadu_pd(x + i)));
    double lane[4];
    _mm256_storeu_pd(lane, acc);
    double m = std::fmax(std::fmax(lane[0], lane[1]), std::fmax(lane[2], lane[3]));
    for (std::size_t i = nv; i < n; ++i) m = std::fmax(m, std::fabs(x[i]));
    return m;
}

} // namespace

const Ops& avx2_ops() {
    static const Ops t{axpby_v, mul_v, square_v, scale_v, cmul_v, etd_combine_v,
                       sum_sq_v, dot_v, sum_abs3_v, max_abs_v, sum_v};
    return t;
}

} // namespace kp2::kern
