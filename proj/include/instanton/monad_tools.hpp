#pragma once

#include "instanton/adhm_core.hpp"

#include <array>
#include <utility>

namespace instanton {

/// Monad U -> V -> W over CP^3 with a(Z) = sum A_i Z_i, b(Z) = sum B_i Z_i.
struct MonadData {
    int dim_u = 0;
    int dim_v = 0;
    int dim_w = 0;
    std::array<CMatrix, 4> a;  // dim_v x dim_u
    std::array<CMatrix, 4> b;  // dim_w x dim_v

    static MonadData zeros(int dim_u, int dim_v, int dim_w);
    void validate_shape() const;
    double norm() const;

    CMatrix a_at(const CVector& z) const;
    CMatrix b_at(const CVector& z) const;
};

/// Homogeneous coordinates scaled so the first entry of largest modulus is 1.
class TwistorPoint {
public:
    explicit TwistorPoint(const CVector& z);
    const CVector& z() const { return z_; }

private:
    CVector z_;
};

/// The two points of the real line of x with (Z3, Z4) = (1, 0) and (0, 1) under
/// (Z1, Z2)^T = X(x) (Z3, Z4)^T, X(x) = [[z1, -conj(z2)], [z2, conj(z1)]].
std::pair<TwistorPoint, TwistorPoint> real_line_points(const Point4& x);

/// max over i <= j of |B_j A_i + B_i A_j|.
double monad_residual(const MonadData& m);

struct LineTriviality {
    bool trivial = false;
    double condition_number = 0.0;  // of b_q a_p; infinite when singular
    bool symmetric_agrees = true;   // verdict of b_p a_q matches
};

/// Invertibility of b_q a_p with tolerance 1e-8 |b_q| |a_p| on its smallest
/// singular value; b_p a_q is checked for the same verdict.
LineTriviality line_triviality(const MonadData& m, const TwistorPoint& p, const TwistorPoint& q);

/// Orthonormal basis of Ker b_p ∩ Ker b_q, of dimension dim_v - 2 dim_w.
CMatrix fiber_basis(const MonadData& m, const TwistorPoint& p, const TwistorPoint& q);

/// Homogenization of lambda_x along the real lines:
///   A1 = [I; 0; 0], A2 = [0; I; 0], A3 = [alpha1; alpha2; Q], A4 = [-alpha2^†; alpha1^†; P^†]
///   B1 = [0, I, 0], B2 = [-I, 0, 0], B3 = [-alpha2, alpha1, P], B4 = [-alpha1^†, -alpha2^†, -Q^†]
/// so that b at the two real-line points of x gives the two block rows of lambda_x
/// (up to sign) and the monad equations reduce to mu_C = mu_R = 0.
MonadData monad_from_adhm(const AdhmData& data, const Tolerances& tol = {});

/// A_i -> g_v A_i g_u^-1, B_i -> g_w B_i g_v^-1.
MonadData monad_basis_change(const MonadData& m, const CMatrix& g_u, const CMatrix& g_v, const CMatrix& g_w);

}  // namespace instanton
