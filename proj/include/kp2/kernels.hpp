#pragma once

#include <complex>
#include <cstddef>
#include <string>

// Data-parallel inner loops shared by every module: pointwise field arithmetic,
// complex spectral multiplies, ETD stage combination, and fixed-order
// reductions. Each kernel has a scalar reference implementation and an AVX2
// variant selected once at startup; the two are bitwise-equivalent (no FMA
// contraction, identical accumulation order), so results do not depend on the
// selected instruction set.

namespace kp2::kern {

using cplx = std::complex<double>;

enum class Isa { Scalar, Avx2 };

/// Selected implementation. Override with KP2_SIMD=scalar|avx2 (default auto).
Isa active_isa();
const char* isa_name();
void force_isa(Isa isa);   // used by the equivalence tests

struct Ops {
    // y[i] = a*x[i] + b*y[i]
    void (*axpby)(double a, const double* x, double b, double* y, std::size_t n);
    // z[i] = x[i]*y[i]
    void (*mul)(const double* x, const double* y, double* z, std::size_t n);
    // z[i] = x[i]*x[i]
    void (*square)(const double* x, double* z, std::size_t n);
    // x[i] *= a
    void (*scale)(double* x, double a, std::size_t n);
    // z[i] *= w[i]  (complex)
    void (*cmul)(const cplx* w, cplx* z, std::size_t n);
    // w[i] = e[i]*w[i] + a[i]*s0[i] + b[i]*s1[i]  (complex ETD stage)
    void (*etd_combine)(const cplx* e, const cplx* a, const cplx* b,
                        const cplx* s0, const cplx* s1, cplx* w, std::size_t n);
    // sum x[i]^2 over 4 striped accumulators, fixed combine order
    double (*sum_sq)(const double* x, std::size_t n);
    // sum x[i]*y[i], same accumulation pattern
    double (*dot)(const double* x, const double* y, std::size_t n);
    // sum |x[i]|^3
    double (*sum_abs3)(const double* x, std::size_t n);
    // max |x[i]|
    double (*max_abs)(const double* x, std::size_t n);
    // sum x[i]
    double (*sum)(const double* x, std::size_t n);
};

const Ops& scalar_ops();
const Ops& avx2_ops();     // valid only if CPU supports AVX2
const Ops& ops();          // active dispatch table

} // namespace kp2::kern
