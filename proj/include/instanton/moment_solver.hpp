#pragma once

#include "instanton/adhm_core.hpp"

#include <array>
#include <vector>

namespace instanton {

struct SolveOptions {
    double tol = 1e-12;
    int max_iters = 50000;
    double initial_step = 1e-2;
    double armijo_c = 1e-4;
    double backtrack = 0.5;

    void validate() const;
};

struct SolveReport {
    int iterations = 0;
    double final_residual = 0.0;
    bool converged = false;
    bool degenerate = false;          // converged, but failed the nondegeneracy scan
    double min_singular_value = 0.0;  // from the scan, when converged
    std::vector<double> trajectory_residuals;  // decimated
};

struct ObjectiveGradient {
    double value = 0.0;
    AdhmData grad;  // real gradient packed as complex: d/dRe + i d/dIm
};

/// f = |mu_C|^2 + |mu_R|^2 and its gradient with respect to the real and
/// imaginary parts of every entry.
ObjectiveGradient objective_and_gradient(const AdhmData& data);

struct SolveResult {
    AdhmData data;
    SolveReport report;
};

/// Gradient descent with Armijo backtracking on f. The residual reported is
/// sqrt(f); iteration stops once it is <= tol. Non-convergence is reported,
/// not thrown.
SolveResult solve(const AdhmData& seed_data, const SolveOptions& opts = {});

/// Four skew-adjoint n x n matrices S0..S3.
struct AbstractQuadruple {
    CMatrix s0;
    CMatrix s1;
    CMatrix s2;
    CMatrix s3;

    double norm() const;
};

/// [S0, S_i] + [S_j, S_k] for (i, j, k) cyclic in (1, 2, 3).
std::array<CMatrix, 3> abstract_residual(const AbstractQuadruple& q);

struct ComplexPair {
    CMatrix d1;  // S0 + i S1
    CMatrix d2;  // S2 + i S3
    double equivalence_defect = 0.0;
};

/// Rewrites the quadruple as (D1, D2) and measures how well [D1, D2] and
/// [D1, D1^†] + [D2, D2^†] reproduce abstract_residual:
///   E1 = -(i/2)([D1, D1^†] + [D2, D2^†]),  [D1, D2] = E2 + i E3.
ComplexPair to_complex_pair(const AbstractQuadruple& q);

}  // namespace instanton
