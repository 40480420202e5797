// kp2: command-line front end. One command = one pipeline; outputs are KPF1
// fields, CSV curves, and a key=value run manifest next to each output.
// Exit codes: 0 success, 1 precondition error, 2 numerical-regime error.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "kp2/backlund.hpp"
#include "kp2/diagnostics.hpp"
#include "kp2/field_ops.hpp"
#include "kp2/io.hpp"
#include "kp2/kernels.hpp"
#include "kp2/kp2_evolver.hpp"
#include "kp2/parallel.hpp"
#include "kp2/phi_functional.hpp"
#include "kp2/tau_solitons.hpp"
#include "kp2/verify.hpp"

namespace {

using namespace kp2;

constexpr const char* kVersion = "kp2 0.1.0";

struct GridArgs {
    int nx = 512, ny = 512;
    double Lx = 40, Ly = 40, x0 = -20, y0 = -20;

    void attach(CLI::App* cmd) {
        cmd->add_option("--nx", nx, "x samples (power of two)");
        cmd->add_option("--ny", ny, "y samples (power of two)");
        cmd->add_option("--Lx", Lx, "window length in x");
        cmd->add_option("--Ly", Ly, "window length in y");
        cmd->add_option("--x0", x0, "window corner x");
        cmd->add_option("--y0", y0, "window corner y");
    }
    Grid2D grid() const { return field::make_grid(nx, ny, Lx, Ly, x0, y0); }
};

struct SolverArgs {
    double tol = 1e-11;
    int max_iter = 200;
    double guard = 0.1;

    void attach(CLI::App* cmd) {
        cmd->add_option("--tol", tol, "Picard increment tolerance");
        cmd->add_option("--max-iter", max_iter, "Picard iteration cap");
        cmd->add_option("--guard", guard, "smallness guard on the u surrogate norm");
    }
    miura::SolveOptions opts() const { return {tol, max_iter, guard}; }
};

// --u <path|zero|gauss:amp,width>: gauss builds amp * dx exp(-(x^2+y^2)/width)
Field2D load_u(const std::string& spec, const Grid2D& g) {
    if (spec == "zero") return Field2D(g);
    if (spec.rfind("gauss:", 0) == 0) {
        auto comma = spec.find(',', 6);
        if (comma == std::string::npos)
            throw PreconditionError("--u gauss:<amp>,<width> expects two numbers");
        double amp = std::stod(spec.substr(6, comma - 6));
        double width = std::stod(spec.substr(comma + 1));
        if (!(width > 0)) throw PreconditionError("--u gauss: width must be positive");
        Field2D u(g);
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) {
                double x = g.x(i), y = g.y(j);
                u.at(i, j) = amp * (-2.0 * x / width) * std::exp(-(x * x + y * y) / width);
            }
        return u;
    }
    Field2D u = io::read_field(spec);
    return u;
}

std::vector<std::pair<std::string, std::string>> base_manifest(const std::string& cmd,
                                                               const Grid2D& g) {
    return {
        {"version", kVersion},
        {"command", cmd},
        {"simd", kern::isa_name()},
        {"threads", std::to_string(thread_count())},
        {"nx", std::to_string(g.nx)},
        {"ny", std::to_string(g.ny)},
        {"Lx", io::format_double(g.Lx)},
        {"Ly", io::format_double(g.Ly)},
        {"x0", io::format_double(g.x0)},
        {"y0", io::format_double(g.y0)},
    };
}

void add_norms(std::vector<std::pair<std::string, std::string>>& m, const std::string& tag,
               const Field2D& f) {
    auto r = field::integrate_and_norms(f);
    m.emplace_back(tag + "_l2", io::format_double(r.l2));
    m.emplace_back(tag + "_linf", io::format_double(r.linf));
    m.emplace_back(tag + "_integral", io::format_double(r.integral));
    m.emplace_back(tag + "_hmhalf", io::format_double(r.h_minus_half_zero));
}

std::string stem_of(const std::string& path) {
    auto dot = path.find_last_of('.');
    auto slash = path.find_last_of('/');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return path;
    return path.substr(0, dot);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"KP-II Backlund toolkit: soliton addition, tau multisolitons, "
                 "pseudospectral evolution, and the range functional"};
    app.require_subcommand(1);

    int threads = 0;
    app.add_option("--threads", threads, "worker threads (default: hardware, env KP2_THREADS)");

    // gen-multisoliton
    auto* gen = app.add_subcommand("gen-multisoliton", "sample a Wronskian multisoliton field");
    GridArgs gen_grid;
    gen_grid.attach(gen);
    std::string gen_spec, gen_out;
    double gen_t = 0.0;
    gen->add_option("--spec", gen_spec, "TauSpec text file")->required();
    gen->add_option("--t", gen_t, "evaluation time");
    gen->add_option("--out", gen_out, "output KPF1 field")->required();

    // backlund-add
    auto* badd = app.add_subcommand("backlund-add", "add a line soliton to u");
    GridArgs badd_grid;
    SolverArgs badd_solver;
    badd_grid.attach(badd);
    badd_solver.attach(badd);
    std::string badd_u, badd_out;
    double badd_gamma0 = 0.0;
    badd->add_option("--u", badd_u, "input field (path|zero|gauss:amp,width)")->required();
    badd->add_option("--gamma0", badd_gamma0, "soliton position at y = 0");
    badd->add_option("--out", badd_out, "output KPF1 field (u_bar)")->required();

    // multisoliton-add
    auto* madd = app.add_subcommand("multisoliton-add", "add a (M-1,1)-multisoliton to u");
    GridArgs madd_grid;
    SolverArgs madd_solver;
    madd_grid.attach(madd);
    madd_solver.attach(madd);
    std::string madd_u, madd_out;
    std::vector<double> madd_lambda, madd_c;
    madd->add_option("--u", madd_u, "input field (path|zero|gauss:amp,width)")->required();
    madd->add_option("--lambda", madd_lambda, "strictly increasing spectral parameters")->required();
    madd->add_option("--c", madd_c, "phase parameters, same length")->required();
    madd->add_option("--out", madd_out, "output KPF1 field")->required();

    // evolve
    auto* ev = app.add_subcommand("evolve", "pseudospectral KP-II evolution");
    GridArgs ev_grid;
    ev_grid.attach(ev);
    std::string ev_u, ev_out, ev_frame = "lab";
    double ev_dt = 1e-3, ev_T = 1.0;
    int ev_save = 100;
    ev->add_option("--u", ev_u, "initial field (path|zero|gauss:amp,width)")->required();
    ev->add_option("--dt", ev_dt, "time step");
    ev->add_option("--T", ev_T, "final time");
    ev->add_option("--save-every", ev_save, "snapshot stride in steps");
    ev->add_option("--frame", ev_frame, "lab | comoving4");
    ev->add_option("--out", ev_out, "output prefix (writes <out>_NNN.kpf + manifest)")->required();

    // phi
    auto* ph = app.add_subcommand("phi", "evaluate the range functional Phi(h)");
    GridArgs ph_grid;
    ph_grid.nx = 2048;
    ph_grid.ny = 512;
    ph_grid.Lx = 160;
    ph_grid.Ly = 36;
    ph_grid.x0 = -80;
    ph_grid.y0 = -8;
    ph_grid.attach(ph);
    std::string ph_h, ph_out;
    ph->add_option("--u", ph_h, "input field h (path|zero|gauss:amp,width)")->required();
    ph->add_option("--out", ph_out, "report file")->required();

    // seminorm
    auto* sn = app.add_subcommand("seminorm", "L^2_phi distance to the modulated soliton family");
    std::string sn_ubar, sn_out;
    sn->add_option("--ubar", sn_ubar, "input KPF1 field")->required();
    sn->add_option("--out", sn_out, "report file")->required();

    // commute-check
    auto* cc = app.add_subcommand("commute-check", "commuting-with-the-flow diagnostic");
    GridArgs cc_grid;
    SolverArgs cc_solver;
    cc_grid.attach(cc);
    cc_solver.attach(cc);
    std::string cc_u, cc_out;
    double cc_gamma0 = 0.0, cc_T = 0.25, cc_dt = 1e-3;
    int cc_save = 50;
    cc->add_option("--u", cc_u, "initial field (path|zero|gauss:amp,width)")->required();
    cc->add_option("--gamma0", cc_gamma0, "initial soliton position");
    cc->add_option("--T", cc_T, "horizon");
    cc->add_option("--dt", cc_dt, "time step");
    cc->add_option("--save-every", cc_save, "snapshot stride");
    cc->add_option("--out", cc_out, "CSV report (t, gamma_fit, mismatch)")->required();

    // verify
    auto* vf = app.add_subcommand("verify", "run the acceptance criteria");
    std::string vf_suite = "quick";
    vf->add_option("--suite", vf_suite, "quick | full | comma-separated ids");

    // export-csv
    auto* ex = app.add_subcommand("export-csv", "dump a KPF1 field as CSV");
    std::string ex_in, ex_out, ex_mode = "full";
    double ex_at = 0.0;
    ex->add_option("--in", ex_in, "input KPF1 field")->required();
    ex->add_option("--out", ex_out, "output CSV")->required();
    ex->add_option("--mode", ex_mode, "full | xslice | yslice | ymean");
    ex->add_option("--at", ex_at, "slice coordinate for xslice/yslice");

    CLI11_PARSE(app, argc, argv);
    if (threads > 0) set_threads(threads);

    try {
        if (*gen) {
            Grid2D g = gen_grid.grid();
            tausol::TauSpec spec = tausol::parse_tau_spec(gen_spec);
            Field2D u = tausol::u_from_tau(spec, gen_t, g);
            io::write_field(gen_out, u);
            auto m = base_manifest("gen-multisoliton", g);
            m.emplace_back("spec", gen_spec);
            m.emplace_back("t", io::format_double(gen_t));
            m.emplace_back("label", tausol::validate_spec(spec).label);
            add_norms(m, "u", u);
            io::write_manifest(stem_of(gen_out) + ".manifest.txt", m);
        } else if (*badd) {
            Grid2D g = badd_grid.grid();
            Field2D u = load_u(badd_u, g);
            auto out = backlund::soliton_add(u, badd_gamma0, badd_solver.opts());
            io::write_field(badd_out, out.u_bar);
            io::write_curve_csv(stem_of(badd_out) + ".alpha.csv", g, out.alpha);
            auto m = base_manifest("backlund-add", g);
            m.emplace_back("u", badd_u);
            m.emplace_back("gamma0", io::format_double(badd_gamma0));
            m.emplace_back("c", io::format_double(out.c));
            add_norms(m, "u_bar", out.u_bar);
            io::write_manifest(stem_of(badd_out) + ".manifest.txt", m);
        } else if (*madd) {
            Grid2D g = madd_grid.grid();
            Field2D u = load_u(madd_u, g);
            backlund::MultiSpec spec{madd_lambda, madd_c};
            Field2D ub = backlund::multisoliton_add(u, spec, madd_solver.opts());
            io::write_field(madd_out, ub);
            auto m = base_manifest("multisoliton-add", g);
            m.emplace_back("u", madd_u);
            add_norms(m, "u_bar", ub);
            io::write_manifest(stem_of(madd_out) + ".manifest.txt", m);
        } else if (*ev) {
            Grid2D g = ev_grid.grid();
            Field2D u = load_u(ev_u, g);
            evolve::EvolveOptions eo;
            eo.dt = ev_dt;
            eo.T = ev_T;
            eo.save_every = ev_save;
            if (ev_frame == "comoving4")
                eo.frame = evolve::Frame::Comoving4;
            else if (ev_frame != "lab")
                throw PreconditionError("evolve: --frame must be lab or comoving4");
            auto traj = evolve::evolve(u, eo);
            auto m = base_manifest("evolve", g);
            m.emplace_back("dt", io::format_double(ev_dt));
            m.emplace_back("T", io::format_double(ev_T));
            m.emplace_back("frame", ev_frame);
            m.emplace_back("snapshots", std::to_string(traj.snapshots.size()));
            for (std::size_t s = 0; s < traj.snapshots.size(); ++s) {
                char name[32];
                std::snprintf(name, sizeof name, "_%03zu.kpf", s);
                io::write_field(ev_out + name, traj.snapshots[s]);
                m.emplace_back("t_" + std::to_string(s), io::format_double(traj.times[s]));
                m.emplace_back("l2_" + std::to_string(s), io::format_double(traj.l2_log[s]));
                m.emplace_back("mass_" + std::to_string(s), io::format_double(traj.mass_log[s]));
            }
            io::write_manifest(ev_out + ".manifest.txt", m);
        } else if (*ph) {
            Grid2D g = ph_grid.grid();
            Field2D h = load_u(ph_h, g);
            auto res = phi::phi(h);
            auto m = base_manifest("phi", g);
            m.emplace_back("h_input", ph_h);
            m.emplace_back("value", io::format_double(res.value));
            m.emplace_back("value_alt", io::format_double(res.value_alt));
            m.emplace_back("consistency_gap", io::format_double(res.consistency_gap));
            m.emplace_back("psi_min", io::format_double(res.psi_min));
            io::write_manifest(ph_out, m);
            std::printf("phi=%s gap=%s\n", io::format_double(res.value).c_str(),
                        io::format_double(res.consistency_gap).c_str());
        } else if (*sn) {
            Field2D ub = io::read_field(sn_ubar);
            auto res = diag::l2phi_seminorm(ub, ShiftCurve(ub.grid.ny, 0.0));
            auto m = base_manifest("seminorm", ub.grid);
            m.emplace_back("ubar", sn_ubar);
            m.emplace_back("value", io::format_double(res.value));
            m.emplace_back("agreement_gap", io::format_double(res.agreement_gap));
            m.emplace_back("iterations", std::to_string(res.iterations));
            io::write_manifest(sn_out, m);
            io::write_curve_csv(stem_of(sn_out) + ".sigma.csv", ub.grid, res.sigma_star);
            std::printf("seminorm=%s\n", io::format_double(res.value).c_str());
        } else if (*cc) {
            Grid2D g = cc_grid.grid();
            Field2D u = load_u(cc_u, g);
            diag::CommuteOptions co;
            co.dt = cc_dt;
            co.save_every = cc_save;
            co.solver = cc_solver.opts();
            auto rep = diag::commute_check(u, cc_gamma0, cc_T, co);
            std::FILE* f = std::fopen(cc_out.c_str(), "w");
            if (!f) throw PreconditionError("cannot write " + cc_out);
            std::fprintf(f, "t,gamma0_fit,mismatch\n");
            for (std::size_t s = 0; s < rep.times.size(); ++s)
                std::fprintf(f, "%s,%s,%s\n", io::format_double(rep.times[s]).c_str(),
                             io::format_double(rep.gamma0_fit[s]).c_str(),
                             io::format_double(rep.mismatch[s]).c_str());
            std::fclose(f);
            auto m = base_manifest("commute-check", g);
            m.emplace_back("speed_residual", io::format_double(rep.speed_residual));
            io::write_manifest(stem_of(cc_out) + ".manifest.txt", m);
            std::printf("speed_residual=%s\n", io::format_double(rep.speed_residual).c_str());
        } else if (*vf) {
            bool all = true;
            auto results =
                kp2::verify::run_suite(vf_suite, [&](const kp2::verify::CriterionResult& r) {
                    std::printf("[%s] %-32s %7.1fs  %s\n", r.pass ? "PASS" : "FAIL", r.id.c_str(),
                                r.seconds, r.detail.c_str());
                    std::fflush(stdout);
                });
            for (const auto& r : results) all = all && r.pass;
            std::printf("%s\n", all ? "VERIFY PASS" : "VERIFY FAIL");
            return all ? 0 : 2;
        } else if (*ex) {
            Field2D f = io::read_field(ex_in);
            const Grid2D& g = f.grid;
            std::FILE* out = std::fopen(ex_out.c_str(), "w");
            if (!out) throw PreconditionError("cannot write " + ex_out);
            if (ex_mode == "full") {
                std::fprintf(out, "x,y,value\n");
                for (int j = 0; j < g.ny; ++j)
                    for (int i = 0; i < g.nx; ++i)
                        std::fprintf(out, "%s,%s,%s\n", io::format_double(g.x(i)).c_str(),
                                     io::format_double(g.y(j)).c_str(),
                                     io::format_double(f.at(i, j)).c_str());
            } else if (ex_mode == "yslice") {
                int j = int(std::lround((ex_at - g.y0) / g.dy()));
                if (j < 0 || j >= g.ny) throw PreconditionError("--at outside the window");
                std::fprintf(out, "x,value\n");
                for (int i = 0; i < g.nx; ++i)
                    std::fprintf(out, "%s,%s\n", io::format_double(g.x(i)).c_str(),
                                 io::format_double(f.at(i, j)).c_str());
            } else if (ex_mode == "xslice") {
                int i = int(std::lround((ex_at - g.x0) / g.dx()));
                if (i < 0 || i >= g.nx) throw PreconditionError("--at outside the window");
                std::fprintf(out, "y,value\n");
                for (int j = 0; j < g.ny; ++j)
                    std::fprintf(out, "%s,%s\n", io::format_double(g.y(j)).c_str(),
                                 io::format_double(f.at(i, j)).c_str());
            } else if (ex_mode == "ymean") {
                std::fprintf(out, "x,value\n");
                for (int i = 0; i < g.nx; ++i) {
                    double acc = 0;
                    for (int j = 0; j < g.ny; ++j) acc += f.at(i, j);
                    std::fprintf(out, "%s,%s\n", io::format_double(g.x(i)).c_str(),
                                 io::format_double(acc / g.ny).c_str());
                }
            } else {
                std::fclose(out);
                throw PreconditionError("export-csv: unknown --mode " + ex_mode);
            }
            std::fclose(out);
        }
    } catch (const PreconditionError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const RegimeError& e) {
        std::fprintf(stderr, "numerical-regime error: %s\n", e.what());
        return 2;
    }
    return 0;
}
