#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include "kp2/io.hpp"
#include "kp2/profiles.hpp"
#include "kp2/tau_solitons.hpp"

#ifndef KP2_BIN
#define KP2_BIN "kp2"
#endif

using namespace kp2;

namespace {

int run(const std::string& args) {
    std::string cmd = std::string(KP2_BIN) + " " + args + " > cli_stdout.txt 2> cli_stderr.txt";
    int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::string s, line;
    while (std::getline(in, line)) s += line + "\n";
    return s;
}

} // namespace

TEST_CASE("gen-multisoliton writes the resonance field with the pinned value") {
    tausol::TauSpec s;
    s.M = 3;
    s.N = 1;
    s.A = {{1.0, 1.0, 1.0}};
    s.lambdas = {-1.0, 0.0, 1.0};
    s.theta0 = {0.0, 0.0, 0.0};
    tausol::write_tau_spec("cli_y.tau", s);

    REQUIRE(run("gen-multisoliton --spec cli_y.tau --t 0 --out cli_y.kpf --nx 256 --ny 256") == 0);
    Field2D f = io::read_field("cli_y.kpf");
    // value at the origin: -2 d^2/dx^2 log(e^-x + 1 + e^x) = -4/3
    CHECK(f.at(128, 128) == doctest::Approx(-4.0 / 3.0).epsilon(1e-10));
    CHECK(slurp("cli_y.manifest.txt").find("label=(2,1)") != std::string::npos);

    for (const char* p : {"cli_y.tau", "cli_y.kpf", "cli_y.hdr", "cli_y.manifest.txt"})
        std::remove(p);
}

TEST_CASE("backlund-add on zero input produces the line soliton") {
    REQUIRE(run("backlund-add --u zero --gamma0 0 --out cli_s.kpf --nx 256 --ny 256") == 0);
    Field2D f = io::read_field("cli_s.kpf");
    double err = 0;
    for (int j = 0; j < f.grid.ny; j += 17)
        for (int i = 0; i < f.grid.nx; ++i)
            err = std::max(err, std::fabs(f.at(i, j) - profiles::soliton(1.0, f.grid.x(i))));
    CHECK(err < 1e-9);
    for (const char* p : {"cli_s.kpf", "cli_s.hdr", "cli_s.alpha.csv", "cli_s.manifest.txt"})
        std::remove(p);
}

TEST_CASE("reruns are bitwise identical") {
    REQUIRE(run("backlund-add --u gauss:0.01,8 --gamma0 0.5 --out cli_a.kpf --nx 256 --ny 256") == 0);
    REQUIRE(run("backlund-add --u gauss:0.01,8 --gamma0 0.5 --out cli_b.kpf --nx 256 --ny 256") == 0);
    Field2D a = io::read_field("cli_a.kpf");
    Field2D b = io::read_field("cli_b.kpf");
    CHECK(a.v == b.v);
    for (const char* p : {"cli_a.kpf", "cli_a.hdr", "cli_a.alpha.csv", "cli_a.manifest.txt",
                          "cli_b.kpf", "cli_b.hdr", "cli_b.alpha.csv", "cli_b.manifest.txt"})
        std::remove(p);
}

TEST_CASE("evolve writes numbered snapshots plus a manifest") {
    REQUIRE(run("evolve --u gauss:0.01,8 --dt 1e-3 --T 0.01 --save-every 5 --out cli_tr "
                "--nx 128 --ny 128 --Lx 40 --Ly 40 --x0 -20 --y0 -20") == 0);
    Field2D f0 = io::read_field("cli_tr_000.kpf");
    Field2D f2 = io::read_field("cli_tr_002.kpf");
    CHECK(f0.grid.nx == 128);
    CHECK(f2.v != f0.v);
    std::string man = slurp("cli_tr.manifest.txt");
    CHECK(man.find("snapshots=3") != std::string::npos);
    for (const char* p : {"cli_tr_000.kpf", "cli_tr_000.hdr", "cli_tr_001.kpf", "cli_tr_001.hdr",
                          "cli_tr_002.kpf", "cli_tr_002.hdr", "cli_tr.manifest.txt"})
        std::remove(p);
}

TEST_CASE("export-csv yslice matches the field") {
    REQUIRE(run("backlund-add --u zero --gamma0 0 --out cli_e.kpf --nx 256 --ny 64 --Ly 10 --y0 -5") ==
            0);
    REQUIRE(run("export-csv --in cli_e.kpf --out cli_e.csv --mode yslice --at 0") == 0);
    std::string csv = slurp("cli_e.csv");
    CHECK(csv.find("x,value") == 0);
    for (const char* p : {"cli_e.kpf", "cli_e.hdr", "cli_e.alpha.csv", "cli_e.manifest.txt",
                          "cli_e.csv"})
        std::remove(p);
}

TEST_CASE("exit codes: precondition 1, regime 2") {
    CHECK(run("gen-multisoliton --spec missing.tau --t 0 --out x.kpf") == 1);
    // amplitude far above the smallness guard
    CHECK(run("backlund-add --u gauss:5.0,8 --gamma0 0 --out x.kpf --nx 256 --ny 256") == 2);
    std::remove("x.kpf");
    std::remove("x.hdr");
}

TEST_CASE("verify quick prints a pass/fail table and exits 0") {
    REQUIRE(run("verify --suite 1,5") == 0);
    std::string out = slurp("cli_stdout.txt");
    CHECK(out.find("[PASS]") != std::string::npos);
    CHECK(out.find("VERIFY PASS") != std::string::npos);
}

TEST_CASE("phi command on a gaussian-sech2 style input") {
    REQUIRE(run("phi --u gauss:1e-4,4 --out cli_phi.txt --ny 256 --Ly 24 "
                "--y0 -8") == 0);
    std::string rep = slurp("cli_phi.txt");
    CHECK(rep.find("value=") != std::string::npos);
    CHECK(rep.find("consistency_gap=") != std::string::npos);
    std::remove("cli_phi.txt");
}
