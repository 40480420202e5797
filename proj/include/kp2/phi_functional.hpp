#pragma once

#include "kp2/types.hpp"

// The codimension-1 functional Phi of the soliton-addition range: solve the
// linear parabolic equation psi_y - psi_xx + 2 tanh psi_x = -h psi with
// psi -> 1 below the support of h, then evaluate Phi by both of its formulas.

namespace kp2::phi {

struct PhiResult {
    double value = 0;        // -1/2 integral sech^2 h psi
    double value_alt = 0;    // lim 1/2 integral sech^2 psi dx - 1, read at the top row
    double consistency_gap = 0;
    Field2D psi;
    double psi_min = 0;
};

struct PhiOptions {
    int substeps = 0;            // 0 = choose from the transport CFL dy <= dx/2
    double edge_tol = 1e-2;      // relative x-edge contamination guard on psi-1
    double gap_tol = 1e-4;       // accepted |value - value_alt|
    double input_edge_tol = 1e-6;// x-decay tolerance on h itself
};

/// Marches psi - 1 from the bottom row (= 0). h must decay at all edges.
Field2D solve_psi(const Field2D& h, const PhiOptions& opts = {});

PhiResult phi(const Field2D& h, const PhiOptions& opts = {});

/// DPhi(0) . z = -1/2 integral sech^2(x) z dx dy.
double phi_linear(const Field2D& z);

} // namespace kp2::phi
