#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <random>

#include "kp2/field_ops.hpp"
#include "kp2/io.hpp"

using namespace kp2;

TEST_CASE("KPF1 round trip is bit exact") {
    Grid2D g = field::make_grid(32, 16, 12.5, 7.25, -6.25, -3.5);
    Field2D f(g);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> d(-1e3, 1e3);
    for (auto& v : f.v) v = d(rng);
    f.meta = Background::kink(1.25, std::vector<double>(g.ny, 0.5));

    const std::string path = "roundtrip_test.kpf";
    io::write_field(path, f);
    Field2D back = io::read_field(path);
    CHECK(back.grid == g);
    CHECK(back.v == f.v);
    CHECK(back.meta.kind == Background::Kind::Kink);
    CHECK(back.meta.lambda == f.meta.lambda);
    CHECK(back.meta.curve == f.meta.curve);

    std::remove(path.c_str());
    std::remove("roundtrip_test.hdr");
    std::remove("roundtrip_test.alpha.csv");
}

TEST_CASE("curve CSV round trip") {
    Grid2D g = field::make_grid(16, 16, 16, 16, -8, -8);
    ShiftCurve c(g.ny);
    for (int j = 0; j < g.ny; ++j) c[j] = std::sin(0.3 * j) * 1e-7 + j;
    io::write_curve_csv("curve_test.csv", g, c);
    ShiftCurve back = io::read_curve_csv("curve_test.csv");
    CHECK(back.v == c.v);
    std::remove("curve_test.csv");
}

TEST_CASE("reading a truncated field reports an error") {
    Grid2D g = field::make_grid(16, 16, 16, 16, -8, -8);
    Field2D f(g, 1.0);
    io::write_field("trunc_test.kpf", f);
    { std::ofstream(std::string("trunc_test.kpf"), std::ios::binary) << "short"; }
    CHECK_THROWS_AS(io::read_field("trunc_test.kpf"), PreconditionError);
    std::remove("trunc_test.kpf");
    std::remove("trunc_test.hdr");
}
