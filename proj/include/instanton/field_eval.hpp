#pragma once

#include "instanton/adhm_core.hpp"

#include <array>

namespace instanton {

inline constexpr double kDegeneracyTol = 1e-8;

/// Orthonormal basis of ker lambda_x, (2k+r) x r.
struct KernelFrame {
    CMatrix v;
    Point4 point;
};

/// Index pairs of the six independent curvature components, in storage order.
inline constexpr std::array<std::array<int, 2>, 6> kCurvaturePairs{
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

/// Storage slot of the pair (mu, nu), mu < nu.
int curvature_slot(int mu, int nu);

struct CurvatureSample {
    std::array<CMatrix, 6> f;  // F_{mu nu} for mu < nu, anti-hermitian r x r
    Point4 point;
    KernelFrame frame;

    /// F_{mu nu} for any ordered pair; F_{nu mu} = -F_{mu nu}, F_{mu mu} = 0.
    CMatrix component(int mu, int nu) const;

    /// Root-sum-square of the six Frobenius norms.
    double norm() const;
};

/// Coefficients of F on the self-dual / anti-self-dual 2-form bases, with
/// dx0 ^ dx1 ^ dx2 ^ dx3 positive:
///   F+_i = (F_{0i} + F_{jk}) / 2,  F-_i = (F_{0i} - F_{jk}) / 2,  (ijk) cyclic.
struct SdSplit {
    std::array<CMatrix, 3> f_plus;
    std::array<CMatrix, 3> f_minus;
    double norm_plus = 0.0;
    double norm_minus = 0.0;

    /// Inverse change of basis back to the six F_{mu nu}.
    std::array<CMatrix, 6> reconstruct() const;
};

/// lambda_x lambda_x^†, hermitian by construction.
CMatrix rho(const AdhmData& data, const Point4& x);

/// Deterministic orthonormal kernel basis: column-pivoted QR of lambda_x^†,
/// each column rotated so its first significant entry is real positive.
/// Throws DegenerateError if the smallest singular value of lambda_x is at or
/// below `degeneracy_tol`.
KernelFrame kernel_frame(const AdhmData& data, const Point4& x, double degeneracy_tol = kDegeneracyTol);

/// v * U where U is the unitary maximizing the overlap with v_ref, so that
/// v_ref^† (v U) is hermitian positive definite.
KernelFrame align_frame(const KernelFrame& v, const KernelFrame& v_ref);

/// Closed-form curvature F_{mu nu} = v^† (L_mu^† rho^-1 L_nu - L_nu^† rho^-1 L_mu) v.
CurvatureSample curvature(const AdhmData& data, const Point4& x);

/// Connection A_mu = v^† d_mu v by central differences of frames aligned to
/// `gauge_ref`. Without a reference the frame at x is used, which gives the
/// polar gauge centered at x (A(x) vanishes up to O(h^2) there).
std::array<CMatrix, 4> connection_fd(const AdhmData& data, const Point4& x, double h = 1e-4);
std::array<CMatrix, 4> connection_fd(const AdhmData& data, const Point4& x, double h,
                                     const KernelFrame& gauge_ref);

/// Curvature assembled from connection_fd by F = dA - dA + [A, A], with every
/// frame aligned to the frame at x. Used as an independent check of curvature().
std::array<CMatrix, 6> curvature_fd(const AdhmData& data, const Point4& x, double h = 1e-4);

SdSplit sd_asd_split(const CurvatureSample& sample);
SdSplit sd_asd_split(const std::array<CMatrix, 6>& f);

/// |F+| / max(|F|, 1e-300).
double asd_residual(const AdhmData& data, const Point4& x);

}  // namespace instanton
