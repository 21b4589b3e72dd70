#include "instanton/monad_tools.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace instanton {

MonadData MonadData::zeros(int dim_u, int dim_v, int dim_w)
{
    MonadData m;
    m.dim_u = dim_u;
    m.dim_v = dim_v;
    m.dim_w = dim_w;
    for (auto& x : m.a) x = CMatrix::Zero(dim_v, dim_u);
    for (auto& x : m.b) x = CMatrix::Zero(dim_w, dim_v);
    return m;
}

void MonadData::validate_shape() const
{
    if (dim_u < 1 || dim_v < 1 || dim_w < 1) throw InvalidInput("field 'dims' must be positive integers");
    for (int i = 0; i < 4; ++i) {
        const CMatrix& ai = a[static_cast<std::size_t>(i)];
        const CMatrix& bi = b[static_cast<std::size_t>(i)];
        if (ai.rows() != dim_v || ai.cols() != dim_u)
            throw InvalidInput("field 'a[" + std::to_string(i) + "]' must be dim_v x dim_u");
        if (bi.rows() != dim_w || bi.cols() != dim_v)
            throw InvalidInput("field 'b[" + std::to_string(i) + "]' must be dim_w x dim_v");
        if (!all_finite(ai) || !all_finite(bi))
            throw InvalidInput("monad matrix " + std::to_string(i) + " has non-finite entries");
    }
}

double MonadData::norm() const
{
    double s = 0.0;
    for (const auto& x : a) s += x.squaredNorm();
    for (const auto& x : b) s += x.squaredNorm();
    return std::sqrt(s);
}

CMatrix MonadData::a_at(const CVector& z) const
{
    CMatrix out = CMatrix::Zero(dim_v, dim_u);
    for (int i = 0; i < 4; ++i) out += z(i) * a[static_cast<std::size_t>(i)];
    return out;
}

CMatrix MonadData::b_at(const CVector& z) const
{
    CMatrix out = CMatrix::Zero(dim_w, dim_v);
    for (int i = 0; i < 4; ++i) out += z(i) * b[static_cast<std::size_t>(i)];
    return out;
}

TwistorPoint::TwistorPoint(const CVector& z)
{
    if (z.size() != 4) throw InvalidInput("twistor points need 4 homogeneous coordinates");
    Eigen::Index arg = 0;
    for (Eigen::Index i = 1; i < 4; ++i)
        if (std::abs(z(i)) > std::abs(z(arg))) arg = i;
    if (!(std::abs(z(arg)) > 0.0) || !std::isfinite(std::abs(z(arg))))
        throw InvalidInput("twistor point must be finite and nonzero");
    z_ = z / z(arg);
}

std::pair<TwistorPoint, TwistorPoint> real_line_points(const Point4& x)
{
    const cplx z1 = x.z1();
    const cplx z2 = x.z2();
    CVector p(4), q(4);
    p << z1, z2, 1.0, 0.0;
    q << -std::conj(z2), std::conj(z1), 0.0, 1.0;
    return {TwistorPoint(p), TwistorPoint(q)};
}

double monad_residual(const MonadData& m)
{
    m.validate_shape();
    double worst = 0.0;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = i; j < 4; ++j)
            worst = std::max(worst, (m.b[j] * m.a[i] + m.b[i] * m.a[j]).norm());
    return worst;
}

namespace {

void require_distinct(const TwistorPoint& p, const TwistorPoint& q)
{
    // Both are normalized, so proportional points have rank-1 stacking.
    Eigen::Matrix<cplx, 4, 2> pq;
    pq.col(0) = p.z();
    pq.col(1) = q.z();
    Eigen::JacobiSVD<Eigen::Matrix<cplx, 4, 2>> svd(pq);
    if (svd.singularValues()(1) <= 1e-12 * svd.singularValues()(0))
        throw InvalidInput("twistor points p and q are proportional");
}

struct Verdict2 {
    bool trivial;
    double cond;
};

Verdict2 invertibility(const CMatrix& b, const CMatrix& a)
{
    const CMatrix ba = b * a;
    if (ba.rows() != ba.cols()) return {false, std::numeric_limits<double>::infinity()};
    Eigen::JacobiSVD<CMatrix> svd(ba);
    const auto& s = svd.singularValues();
    const double smin = s(s.size() - 1);
    const double smax = s(0);
    const bool trivial = smin > 1e-8 * b.norm() * a.norm();
    const double cond = smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
    return {trivial, cond};
}

}  // namespace

LineTriviality line_triviality(const MonadData& m, const TwistorPoint& p, const TwistorPoint& q)
{
    m.validate_shape();
    require_distinct(p, q);
    const Verdict2 pq = invertibility(m.b_at(q.z()), m.a_at(p.z()));
    const Verdict2 qp = invertibility(m.b_at(p.z()), m.a_at(q.z()));
    return {pq.trivial, pq.cond, pq.trivial == qp.trivial};
}

CMatrix fiber_basis(const MonadData& m, const TwistorPoint& p, const TwistorPoint& q)
{
    if (!line_triviality(m, p, q).trivial)
        throw InvalidInput("the monad is not trivial on the line through p and q");
    CMatrix stacked(2 * m.dim_w, m.dim_v);
    stacked.topRows(m.dim_w) = m.b_at(p.z());
    stacked.bottomRows(m.dim_w) = m.b_at(q.z());
    const Eigen::Index fiber_dim = m.dim_v - 2 * m.dim_w;
    if (fiber_dim < 1) throw InvalidInput("monad dimensions leave no fiber (dim_v <= 2 dim_w)");
    Eigen::JacobiSVD<CMatrix> svd(stacked, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    if (!(s(s.size() - 1) > 1e-8 * s(0)))
        throw InvalidInput("Ker b_p ∩ Ker b_q has dimension larger than dim_v - 2 dim_w");
    return svd.matrixV().rightCols(fiber_dim);
}

MonadData monad_from_adhm(const AdhmData& d, const Tolerances& tol)
{
    const ValidationReport rep = validate(d, tol);
    if (rep.verdict != Verdict::valid)
        throw InvalidInput(std::string("ADHM data is not valid (") + to_string(rep.verdict) + ")");

    const int k = d.k;
    const int r = d.r;
    MonadData m = MonadData::zeros(k, 2 * k + r, k);
    const auto id = CMatrix::Identity(k, k);

    m.a[0].topRows(k) = id;
    m.a[1].middleRows(k, k) = id;
    m.a[2].topRows(k) = d.alpha1;
    m.a[2].middleRows(k, k) = d.alpha2;
    m.a[2].bottomRows(r) = d.q;
    m.a[3].topRows(k) = -d.alpha2.adjoint();
    m.a[3].middleRows(k, k) = d.alpha1.adjoint();
    m.a[3].bottomRows(r) = d.p.adjoint();

    m.b[0].middleCols(k, k) = id;
    m.b[1].leftCols(k) = -id;
    m.b[2].leftCols(k) = -d.alpha2;
    m.b[2].middleCols(k, k) = d.alpha1;
    m.b[2].rightCols(r) = d.p;
    m.b[3].leftCols(k) = -d.alpha1.adjoint();
    m.b[3].middleCols(k, k) = -d.alpha2.adjoint();
    m.b[3].rightCols(r) = -d.q.adjoint();
    return m;
}

MonadData monad_basis_change(const MonadData& m, const CMatrix& g_u, const CMatrix& g_v, const CMatrix& g_w)
{
    m.validate_shape();
    if (g_u.rows() != m.dim_u || g_v.rows() != m.dim_v || g_w.rows() != m.dim_w)
        throw InvalidInput("basis change sizes do not match monad dimensions");
    const CMatrix gu_inv = g_u.inverse();
    const CMatrix gv_inv = g_v.inverse();
    MonadData out = m;
    for (std::size_t i = 0; i < 4; ++i) {
        out.a[i] = g_v * m.a[i] * gu_inv;
        out.b[i] = g_w * m.b[i] * gv_inv;
    }
    return out;
}

}  // namespace instanton
