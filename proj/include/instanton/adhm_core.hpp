#pragma once

#include "instanton/types.hpp"

#include <cstdint>

namespace instanton {

/// ADHM data (alpha1, alpha2, P, Q) for charge k and gauge rank r.
///
/// lambda_x is assembled in 2x3 block form (block rows of height k, block
/// columns of widths k, k, r):
///
///     [ alpha1^† + conj(z1) I,  alpha2^† + conj(z2) I,  Q^† ]
///     [ -(alpha2 + z2 I),       alpha1 + z1 I,          P   ]
///
/// and the moment maps are
///
///     mu_C = [alpha1, alpha2] + P Q
///     mu_R = [alpha1, alpha1^†] + [alpha2, alpha2^†] + P P^† - Q^† Q.
///
/// With this placement lambda_x lambda_x^† has off-diagonal block mu_C^† and
/// diagonal-block difference -mu_R, so the quaternionic reality condition is
/// equivalent to mu_C = mu_R = 0.
struct AdhmData {
    int k = 0;
    int r = 0;
    CMatrix alpha1;  // k x k
    CMatrix alpha2;  // k x k
    CMatrix p;       // k x r
    CMatrix q;       // r x k

    static AdhmData zeros(int k, int r);

    /// Throws InvalidInput naming the first offending field.
    void validate_shape() const;

    /// Frobenius norm of the whole quadruple.
    double norm() const;

    AdhmData operator+(const AdhmData& other) const;
    AdhmData operator-(const AdhmData& other) const;
    AdhmData operator*(double s) const;

    friend bool operator==(const AdhmData& a, const AdhmData& b);
};

struct MomentMaps {
    CMatrix mu_c;
    CMatrix mu_r;
    double residual_norm = 0.0;
};

MomentMaps moment_maps(const AdhmData& data);

/// The four constant blocks L0..L3 (2k x (2k+r)).
CMatrix lambda_linear_part(int k, int r, int mu);

/// The constant block M (lambda at the origin).
CMatrix lambda_constant_part(const AdhmData& data);

struct LambdaMatrix {
    CMatrix value;  // 2k x (2k+r)
    Point4 point;
};

LambdaMatrix assemble_lambda(const AdhmData& data, const Point4& x);

/// max(|rho12|, |rho21|, |rho11 - rho22|) / max(1, |rho|) for rho = lambda lambda^†.
double reality_defect(const AdhmData& data, const Point4& x);

struct ScanConfig {
    double extent = -1.0;       // half-width R of [-R, R]^4; <= 0 selects the default
    int points_per_axis = 9;
    int refine_rounds = 3;
    int refine_starts = 4;      // best grid cells to refine from
};

struct ScanResult {
    double min_sigma = 0.0;
    Point4 argmin;
    double grid_spacing = 0.0;
};

/// Default half-width 4 (1 + max |entry|).
double default_scan_extent(const AdhmData& data);

/// Heuristic minimum over R^4 of the smallest singular value of lambda_x:
/// a coarse grid scan followed by shrinking-step coordinate descent from the
/// best grid cells. A positive result is evidence of nondegeneracy, not a proof.
ScanResult nondegeneracy_scan(const AdhmData& data, const ScanConfig& cfg = {});

/// alpha_i -> u alpha_i u^†, P -> u P w^†, Q -> w Q u^†.
AdhmData gauge_act(const AdhmData& data, const CMatrix& u, const CMatrix& w);

/// The k = 1, r = 2 solution of scale `scale` centered at `center`.
AdhmData bpst_data(const Point4& center, double scale);

/// Complex Gaussian entries (unit variance) times `spread`; deterministic in seed.
AdhmData random_adhm_data(std::uint64_t seed, int k, int r, double spread);

/// Haar-distributed unitary of size n, deterministic in seed.
CMatrix random_unitary(std::uint64_t seed, int n);

/// Mean of the instanton positions read off tr(alpha_i) / k.
Point4 data_centroid(const AdhmData& data);

enum class Verdict { valid, constraint_violation, degenerate };

const char* to_string(Verdict v);

struct Tolerances {
    double constraint = 1e-10;  // relative to max(1, |data|^2)
    double degeneracy = 1e-8;   // on the smallest singular value
};

struct ValidationReport {
    double complex_residual = 0.0;
    double real_residual = 0.0;
    double reality_defect_max = 0.0;
    double min_singular_value = 0.0;
    Point4 argmin_point;
    Verdict verdict = Verdict::valid;
};

ValidationReport validate(const AdhmData& data, const Tolerances& tol = {},
                          const ScanConfig& scan = {}, std::uint64_t seed = 0);

}  // namespace instanton
