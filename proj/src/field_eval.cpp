#include "instanton/field_eval.hpp"

#include <cmath>

namespace instanton {

int curvature_slot(int mu, int nu)
{
    for (int s = 0; s < 6; ++s)
        if (kCurvaturePairs[s][0] == mu && kCurvaturePairs[s][1] == nu) return s;
    throw InvalidInput("curvature index pair must satisfy 0 <= mu < nu <= 3");
}

CMatrix CurvatureSample::component(int mu, int nu) const
{
    if (mu == nu) return CMatrix::Zero(f[0].rows(), f[0].cols());
    if (mu < nu) return f[curvature_slot(mu, nu)];
    return -f[curvature_slot(nu, mu)];
}

double CurvatureSample::norm() const
{
    double s = 0.0;
    for (const auto& m : f) s += m.squaredNorm();
    return std::sqrt(s);
}

CMatrix rho(const AdhmData& data, const Point4& x)
{
    const CMatrix lam = assemble_lambda(data, x).value;
    return hermitian_part(lam * lam.adjoint());
}

KernelFrame kernel_frame(const AdhmData& data, const Point4& x, double degeneracy_tol)
{
    const CMatrix lam = assemble_lambda(data, x).value;
    const double sigma = min_singular_value(lam);
    if (!(sigma > degeneracy_tol))
        throw DegenerateError("lambda_x is not surjective at " + to_string(x) +
                                  " (min singular value " + std::to_string(sigma) + ")",
                              sigma);

    const Eigen::Index n = lam.cols();
    const Eigen::Index rank = lam.rows();
    Eigen::ColPivHouseholderQR<CMatrix> qr(lam.adjoint());
    const CMatrix qfull = qr.householderQ() * CMatrix::Identity(n, n);
    CMatrix v = qfull.rightCols(n - rank);

    // Column phase convention: first entry with modulus above 1e-8 times the
    // column maximum is made real positive.
    for (Eigen::Index j = 0; j < v.cols(); ++j) {
        const double cmax = v.col(j).cwiseAbs().maxCoeff();
        for (Eigen::Index i = 0; i < n; ++i) {
            const double a = std::abs(v(i, j));
            if (a > 1e-8 * cmax) {
                v.col(j) *= std::conj(v(i, j)) / a;
                v(i, j) = a;
                break;
            }
        }
    }
    return {std::move(v), x};
}

KernelFrame align_frame(const KernelFrame& v, const KernelFrame& v_ref)
{
    if (v.v.rows() != v_ref.v.rows() || v.v.cols() != v_ref.v.cols())
        throw InvalidInput("frames to align have different shapes");
    const CMatrix overlap = v_ref.v.adjoint() * v.v;
    Eigen::JacobiSVD<CMatrix> svd(overlap, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    if (s.size() == 0 || s(s.size() - 1) < 1e-8)
        throw AlignmentError("frames at " + to_string(v.point) + " and " + to_string(v_ref.point) +
                             " are nearly orthogonal");
    // overlap = W S Z^†; U = Z W^† makes v_ref^† v U = W S W^†.
    const CMatrix u = svd.matrixV() * svd.matrixU().adjoint();
    return {v.v * u, v.point};
}

CurvatureSample curvature(const AdhmData& data, const Point4& x)
{
    KernelFrame frame = kernel_frame(data, x);
    const CMatrix rh = rho(data, x);
    Eigen::LLT<CMatrix> llt(rh);
    if (llt.info() != Eigen::Success)
        throw DegenerateError("rho is not positive definite at " + to_string(x), 0.0);

    // L_mu v and rho^-1 L_mu v for each direction.
    std::array<CMatrix, 4> lv;
    std::array<CMatrix, 4> rinv_lv;
    for (int mu = 0; mu < 4; ++mu) {
        lv[mu] = lambda_linear_part(data.k, data.r, mu) * frame.v;
        rinv_lv[mu] = llt.solve(lv[mu]);
    }

    CurvatureSample out;
    out.point = x;
    for (int s = 0; s < 6; ++s) {
        const int mu = kCurvaturePairs[s][0];
        const int nu = kCurvaturePairs[s][1];
        const CMatrix raw = lv[mu].adjoint() * rinv_lv[nu] - lv[nu].adjoint() * rinv_lv[mu];
        out.f[s] = antihermitian_part(raw);
    }
    out.frame = std::move(frame);
    return out;
}

std::array<CMatrix, 4> connection_fd(const AdhmData& data, const Point4& x, double h,
                                     const KernelFrame& gauge_ref)
{
    if (!(h > 0.0)) throw InvalidInput("finite-difference step must be positive");
    auto frame_at = [&](const Point4& y) { return align_frame(kernel_frame(data, y), gauge_ref).v; };
    const CMatrix v = frame_at(x);
    std::array<CMatrix, 4> a;
    for (int mu = 0; mu < 4; ++mu) {
        const CMatrix dv = (frame_at(x.shifted(mu, h)) - frame_at(x.shifted(mu, -h))) / (2.0 * h);
        a[mu] = v.adjoint() * dv;
    }
    return a;
}

std::array<CMatrix, 4> connection_fd(const AdhmData& data, const Point4& x, double h)
{
    return connection_fd(data, x, h, kernel_frame(data, x));
}

std::array<CMatrix, 6> curvature_fd(const AdhmData& data, const Point4& x, double h)
{
    const KernelFrame ref = kernel_frame(data, x);
    const auto a0 = connection_fd(data, x, h, ref);
    std::array<std::array<CMatrix, 4>, 4> a_plus;
    std::array<std::array<CMatrix, 4>, 4> a_minus;
    for (int mu = 0; mu < 4; ++mu) {
        a_plus[mu] = connection_fd(data, x.shifted(mu, h), h, ref);
        a_minus[mu] = connection_fd(data, x.shifted(mu, -h), h, ref);
    }
    std::array<CMatrix, 6> f;
    for (int s = 0; s < 6; ++s) {
        const int mu = kCurvaturePairs[s][0];
        const int nu = kCurvaturePairs[s][1];
        const CMatrix d_mu_a_nu = (a_plus[mu][nu] - a_minus[mu][nu]) / (2.0 * h);
        const CMatrix d_nu_a_mu = (a_plus[nu][mu] - a_minus[nu][mu]) / (2.0 * h);
        f[s] = d_mu_a_nu - d_nu_a_mu + commutator(a0[mu], a0[nu]);
    }
    return f;
}

SdSplit sd_asd_split(const std::array<CMatrix, 6>& f)
{
    // (i, j, k) cyclic: F_{jk} for i = 1, 2, 3 is F23, F31 = -F13, F12.
    const std::array<CMatrix, 3> f0i{f[0], f[1], f[2]};
    const std::array<CMatrix, 3> fjk{f[5], -f[4], f[3]};
    SdSplit out;
    double np = 0.0;
    double nm = 0.0;
    for (int i = 0; i < 3; ++i) {
        out.f_plus[i] = (f0i[i] + fjk[i]) * 0.5;
        out.f_minus[i] = (f0i[i] - fjk[i]) * 0.5;
        np += out.f_plus[i].squaredNorm();
        nm += out.f_minus[i].squaredNorm();
    }
    out.norm_plus = std::sqrt(np);
    out.norm_minus = std::sqrt(nm);
    return out;
}

SdSplit sd_asd_split(const CurvatureSample& sample) { return sd_asd_split(sample.f); }

std::array<CMatrix, 6> SdSplit::reconstruct() const
{
    std::array<CMatrix, 6> f;
    f[0] = f_plus[0] + f_minus[0];   // F01
    f[1] = f_plus[1] + f_minus[1];   // F02
    f[2] = f_plus[2] + f_minus[2];   // F03
    f[5] = f_plus[0] - f_minus[0];   // F23
    f[4] = -(f_plus[1] - f_minus[1]);  // F13 = -F31
    f[3] = f_plus[2] - f_minus[2];   // F12
    return f;
}

double asd_residual(const AdhmData& data, const Point4& x)
{
    const CurvatureSample c = curvature(data, x);
    return sd_asd_split(c).norm_plus / std::max(c.norm(), 1e-300);
}

}  // namespace instanton
