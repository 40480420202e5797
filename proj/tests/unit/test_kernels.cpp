#include <doctest.h>

#include <random>
#include <vector>

#include "kp2/kernels.hpp"

using namespace kp2;

namespace {

std::vector<double> random_vec(std::size_t n, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> d(-2.0, 2.0);
    std::vector<double> v(n);
    for (auto& x : v) x = d(rng);
    return v;
}

std::vector<kern::cplx> random_cvec(std::size_t n, unsigned seed) {
    auto re = random_vec(2 * n, seed);
    std::vector<kern::cplx> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = {re[2 * i], re[2 * i + 1]};
    return v;
}

} // namespace

TEST_CASE("scalar and avx2 kernels agree bitwise") {
    if (!__builtin_cpu_supports("avx2")) {
        MESSAGE("no AVX2 on this host; skipping equivalence");
        return;
    }
    const auto& S = kern::scalar_ops();
    const auto& V = kern::avx2_ops();

    for (std::size_t n : {1u, 4u, 7u, 64u, 257u, 1000u}) {
        auto x = random_vec(n, 11 + unsigned(n));
        auto y = random_vec(n, 23 + unsigned(n));

        auto y1 = y, y2 = y;
        S.axpby(1.7, x.data(), -0.3, y1.data(), n);
        V.axpby(1.7, x.data(), -0.3, y2.data(), n);
        CHECK(y1 == y2);

        std::vector<double> z1(n), z2(n);
        S.mul(x.data(), y.data(), z1.data(), n);
        V.mul(x.data(), y.data(), z2.data(), n);
        CHECK(z1 == z2);

        S.square(x.data(), z1.data(), n);
        V.square(x.data(), z2.data(), n);
        CHECK(z1 == z2);

        auto s1 = x, s2 = x;
        S.scale(s1.data(), 0.731, n);
        V.scale(s2.data(), 0.731, n);
        CHECK(s1 == s2);

        CHECK(S.sum_sq(x.data(), n) == V.sum_sq(x.data(), n));
        CHECK(S.dot(x.data(), y.data(), n) == V.dot(x.data(), y.data(), n));
        CHECK(S.sum_abs3(x.data(), n) == V.sum_abs3(x.data(), n));
        CHECK(S.max_abs(x.data(), n) == V.max_abs(x.data(), n));
        CHECK(S.sum(x.data(), n) == V.sum(x.data(), n));

        auto w = random_cvec(n, 5 + unsigned(n));
        auto c1 = random_cvec(n, 7);
        auto c2 = c1;
        S.cmul(w.data(), c1.data(), n);
        V.cmul(w.data(), c2.data(), n);
        CHECK(c1 == c2);

        auto e = random_cvec(n, 31);
        auto a = random_cvec(n, 37);
        auto b = random_cvec(n, 41);
        auto q0 = random_cvec(n, 43);
        auto q1 = random_cvec(n, 47);
        auto w1 = w, w2 = w;
        S.etd_combine(e.data(), a.data(), b.data(), q0.data(), q1.data(), w1.data(), n);
        V.etd_combine(e.data(), a.data(), b.data(), q0.data(), q1.data(), w2.data(), n);
        CHECK(w1 == w2);
    }
}

TEST_CASE("kernel reference values") {
    const auto& S = kern::scalar_ops();
    std::vector<double> x{1, -2, 3, -4, 5};
    CHECK(S.sum(x.data(), 5) == doctest::Approx(3.0));
    CHECK(S.sum_sq(x.data(), 5) == doctest::Approx(55.0));
    CHECK(S.max_abs(x.data(), 5) == 5.0);
    CHECK(S.sum_abs3(x.data(), 5) == doctest::Approx(1 + 8 + 27 + 64 + 125));
}
