#include "kp2/io.hpp"

#include <bit>
#include <cinttypes>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

namespace kp2::io {
namespace {

static_assert(std::endian::native == std::endian::little,
              "KPF1 I/O assumes a little-endian host");

std::string stem_of(const std::string& path) {
    auto dot = path.find_last_of('.');
    auto slash = path.find_last_of('/');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return path;
    return path.substr(0, dot);
}

std::map<std::string, std::string> read_kv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw PreconditionError("cannot open " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(in, line)) {
        auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        kv[line.substr(0, eq)] = line.substr(eq + 1);
    }
    return kv;
}

std::string meta_string(const Background& m) {
    switch (m.kind) {
        case Background::Kind::None: return "none";
        case Background::Kind::Constant: return "constant:" + format_double(m.lambda);
        case Background::Kind::Kink: return "kink:" + format_double(m.lambda);
        case Background::Kind::Multikink: return "multikink";
    }
    return "none";
}

} // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_field(const std::string& path, const Field2D& f) {
    std::ofstream bin(path, std::ios::binary);
    if (!bin) throw PreconditionError("cannot write " + path);
    bin.write(reinterpret_cast<const char*>(f.v.data()),
              std::streamsize(f.v.size() * sizeof(double)));
    if (!bin) throw PreconditionError("short write to " + path);

    const std::string stem = stem_of(path);
    std::ofstream hdr(stem + ".hdr");
    hdr << "format=KPF1\n"
        << "nx=" << f.grid.nx << "\nny=" << f.grid.ny << "\n"
        << "Lx=" << format_double(f.grid.Lx) << "\nLy=" << format_double(f.grid.Ly) << "\n"
        << "x0=" << format_double(f.grid.x0) << "\ny0=" << format_double(f.grid.y0) << "\n"
        << "meta=" << meta_string(f.meta) << "\n";
    if (f.meta.kind == Background::Kind::Kink && !f.meta.curve.empty()) {
        ShiftCurve c;
        c.v = f.meta.curve;
        write_curve_csv(stem + ".alpha.csv", f.grid, c);
        hdr << "meta_curve=" << stem + ".alpha.csv" << "\n";
    }
}

Field2D read_field(const std::string& path) {
    const std::string stem = stem_of(path);
    auto kv = read_kv(stem + ".hdr");
    if (kv["format"] != "KPF1") throw PreconditionError(path + ": not a KPF1 field");
    Grid2D g;
    g.nx = std::stoi(kv.at("nx"));
    g.ny = std::stoi(kv.at("ny"));
    g.Lx = std::stod(kv.at("Lx"));
    g.Ly = std::stod(kv.at("Ly"));
    g.x0 = std::stod(kv.at("x0"));
    g.y0 = std::stod(kv.at("y0"));
    Field2D f(g);

    std::ifstream bin(path, std::ios::binary);
    if (!bin) throw PreconditionError("cannot open " + path);
    bin.read(reinterpret_cast<char*>(f.v.data()), std::streamsize(f.v.size() * sizeof(double)));
    if (std::size_t(bin.gcount()) != f.v.size() * sizeof(double))
        throw PreconditionError(path + ": truncated KPF1 payload");

    const std::string meta = kv.count("meta") ? kv["meta"] : "none";
    if (meta == "none") {
        f.meta = Background::none();
    } else if (meta == "multikink") {
        f.meta = Background::multikink();
    } else if (meta.rfind("constant:", 0) == 0) {
        f.meta = Background::constant(std::stod(meta.substr(9)));
    } else if (meta.rfind("kink:", 0) == 0) {
        f.meta = Background::kink(std::stod(meta.substr(5)));
        if (kv.count("meta_curve")) f.meta.curve = read_curve_csv(kv["meta_curve"]).v;
    } else {
        throw PreconditionError(path + ": unknown meta tag " + meta);
    }
    for (double x : f.v)
        if (!std::isfinite(x)) throw PreconditionError(path + ": non-finite sample");
    return f;
}

void write_curve_csv(const std::string& path, const Grid2D& g, const ShiftCurve& c) {
    std::ofstream out(path);
    if (!out) throw PreconditionError("cannot write " + path);
    for (int j = 0; j < c.size(); ++j)
        out << format_double(g.y(j)) << "," << format_double(c[j]) << "\n";
}

ShiftCurve read_curve_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw PreconditionError("cannot open " + path);
    ShiftCurve c;
    std::string line;
    while (std::getline(in, line)) {
        auto comma = line.find(',');
        if (comma == std::string::npos) continue;
        c.v.push_back(std::stod(line.substr(comma + 1)));
    }
    return c;
}

void write_manifest(const std::string& path,
                    const std::vector<std::pair<std::string, std::string>>& entries) {
    std::ofstream out(path);
    if (!out) throw PreconditionError("cannot write " + path);
    for (const auto& [k, v] : entries) out << k << "=" << v << "\n";
}

} // namespace kp2::io
