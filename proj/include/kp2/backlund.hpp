#pragma once

#include <vector>

#include "kp2/miura_solver.hpp"
#include "kp2/types.hpp"

// Cole-Hopf superposition of elementary Miura solutions, the modulated-kink
// decomposition, the c <-> gamma_0 parameter maps, and the soliton /
// multisoliton addition maps.

namespace kp2::backlund {

struct ElementaryPair {
    Field2D u;
    Field2D vt_plus, vt_minus;    // decaying parts of v in L^3 +- 1
    Field2D Vt_plus, Vt_minus;    // normalized primitives
    miura::ElementaryReport report_plus, report_minus;
};

struct MultiSpec {
    std::vector<double> lambdas;   // strictly increasing
    std::vector<double> cs;        // same length
};

struct Superposition {
    Field2D v;         // sum zeta_j v^(j)
    Field2D vx;        // dx v via the softmax weights (no finite differences)
    Field2D log_psi;   // log of the Cole-Hopf superposition, up to a constant
};

ElementaryPair elementary_pair(const Field2D& u, const miura::SolveOptions& opts = {});

/// Log-sum-exp superposition of elementary solutions with phases
/// E_j = Vt_j + lambda_j x + lambda_j^2 y + c_j.
Superposition superpose(const Field2D& u, const std::vector<double>& lambdas,
                        const std::vector<Field2D>& vts, const std::vector<Field2D>& Vts,
                        const std::vector<double>& cs);

/// The two-kink case lambda = (-1, 1), c = (c, -c) built from a pair.
Superposition superpose_pair(const ElementaryPair& pair, double c);

/// Per-row shift alpha(y) solving integral (v - G_alpha) dx = 0 and the
/// zero-mean remainder omega = v - G_alpha.
std::pair<Field2D, ShiftCurve> modulated_decompose(const Field2D& v, const ElementaryPair& pair);

enum class ParamDirection { CToGamma0, Gamma0ToC };

double param_map(ParamDirection dir, const ElementaryPair& pair, double value);

struct BacklundOutput {
    Field2D u_bar;
    Field2D v;
    ShiftCurve alpha;
    Field2D omega;
    double c = 0;
    double gamma0 = 0;
    ElementaryPair pair;
};

BacklundOutput soliton_add(const Field2D& u, double gamma0, const miura::SolveOptions& opts = {});
/// Same, reusing an already-solved pair (the expensive part).
BacklundOutput soliton_add_with_pair(const ElementaryPair& pair, double gamma0);

/// u_bar = u - 2 dx V^lambda(u, c): the (M-1,1)-multisoliton addition map.
Field2D multisoliton_add(const Field2D& u, const MultiSpec& spec,
                         const miura::SolveOptions& opts = {});

} // namespace kp2::backlund
