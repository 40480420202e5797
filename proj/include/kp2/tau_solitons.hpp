#pragma once

#include <string>
#include <vector>

#include "kp2/types.hpp"

// Exact multisolitons from Wronskian tau functions: the N=1 path uses
// log-sum-exp over the phases, the N>1 path evaluates the rescaled Wronskian
// by LU per point with analytic first/second log-derivatives.

namespace kp2::tausol {

struct TauSpec {
    int M = 0, N = 0;
    std::vector<std::vector<double>> A;   // N x M
    std::vector<double> lambdas;          // strictly increasing, length M
    std::vector<double> theta0;           // length M
};

struct Validation {
    bool valid = false;
    bool rank_ok = false;
    bool minors_ok = false;
    std::string label;                    // "(M-N,N)"
    std::vector<int> offending_columns;   // first negative minor, if any
    double min_minor = 0;
};

Validation validate_spec(const TauSpec& spec);

/// u(x, y) = -2 dx^2 log tau at time t, sampled on the grid.
Field2D u_from_tau(const TauSpec& spec, double t, const Grid2D& g);

/// Pointwise evaluation (used by oracles and peak probes).
double u_from_tau_at(const TauSpec& spec, double t, double x, double y);

/// Text format: key=value lines (M, N, lambda, theta0, t optional) and the
/// rows of A after a line "A=".
TauSpec parse_tau_spec(const std::string& path);
void write_tau_spec(const std::string& path, const TauSpec& spec);

} // namespace kp2::tausol
