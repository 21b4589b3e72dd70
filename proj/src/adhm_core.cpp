#include "instanton/adhm_core.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

namespace instanton {

namespace {

void check_shape(const CMatrix& m, Eigen::Index rows, Eigen::Index cols, const char* field)
{
    if (m.rows() != rows || m.cols() != cols) {
        throw InvalidInput(std::string("field '") + field + "' has shape " +
                           std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                           ", expected " + std::to_string(rows) + "x" + std::to_string(cols));
    }
    if (!all_finite(m)) throw InvalidInput(std::string("field '") + field + "' has non-finite entries");
}

bool is_unitary(const CMatrix& u, double tol)
{
    if (u.rows() != u.cols()) return false;
    return (u.adjoint() * u - CMatrix::Identity(u.rows(), u.cols())).norm() <= tol;
}

}  // namespace

AdhmData AdhmData::zeros(int k, int r)
{
    return {k, r, CMatrix::Zero(k, k), CMatrix::Zero(k, k), CMatrix::Zero(k, r), CMatrix::Zero(r, k)};
}

void AdhmData::validate_shape() const
{
    if (k < 1) throw InvalidInput("field 'k' must be a positive integer");
    if (r < 1) throw InvalidInput("field 'r' must be a positive integer");
    check_shape(alpha1, k, k, "alpha1");
    check_shape(alpha2, k, k, "alpha2");
    check_shape(p, k, r, "p");
    check_shape(q, r, k, "q");
}

double AdhmData::norm() const
{
    return std::sqrt(alpha1.squaredNorm() + alpha2.squaredNorm() + p.squaredNorm() + q.squaredNorm());
}

AdhmData AdhmData::operator+(const AdhmData& o) const
{
    if (k != o.k || r != o.r) throw InvalidInput("cannot add ADHM data of different (k, r)");
    return {k, r, alpha1 + o.alpha1, alpha2 + o.alpha2, p + o.p, q + o.q};
}

AdhmData AdhmData::operator-(const AdhmData& o) const { return *this + o * -1.0; }

AdhmData AdhmData::operator*(double s) const { return {k, r, alpha1 * s, alpha2 * s, p * s, q * s}; }

bool operator==(const AdhmData& a, const AdhmData& b)
{
    return a.k == b.k && a.r == b.r && a.alpha1 == b.alpha1 && a.alpha2 == b.alpha2 && a.p == b.p &&
           a.q == b.q;
}

MomentMaps moment_maps(const AdhmData& d)
{
    d.validate_shape();
    MomentMaps m;
    m.mu_c = commutator(d.alpha1, d.alpha2) + d.p * d.q;
    CMatrix mu_r = commutator(d.alpha1, d.alpha1.adjoint()) + commutator(d.alpha2, d.alpha2.adjoint()) +
                   d.p * d.p.adjoint() - d.q.adjoint() * d.q;
    m.mu_r = hermitian_part(mu_r);
    m.residual_norm = std::sqrt(m.mu_c.squaredNorm() + m.mu_r.squaredNorm());
    return m;
}

CMatrix lambda_linear_part(int k, int r, int mu)
{
    const cplx i{0.0, 1.0};
    CMatrix l = CMatrix::Zero(2 * k, 2 * k + r);
    const auto id = CMatrix::Identity(k, k);
    switch (mu) {
    case 0:
        l.block(0, 0, k, k) = id;
        l.block(k, k, k, k) = id;
        break;
    case 1:
        l.block(0, 0, k, k) = -i * id;
        l.block(k, k, k, k) = i * id;
        break;
    case 2:
        l.block(0, k, k, k) = id;
        l.block(k, 0, k, k) = -id;
        break;
    case 3:
        l.block(0, k, k, k) = -i * id;
        l.block(k, 0, k, k) = -i * id;
        break;
    default: throw InvalidInput("coordinate index must be in 0..3");
    }
    return l;
}

CMatrix lambda_constant_part(const AdhmData& d)
{
    d.validate_shape();
    const int k = d.k;
    CMatrix m(2 * k, 2 * k + d.r);
    m.block(0, 0, k, k) = d.alpha1.adjoint();
    m.block(0, k, k, k) = d.alpha2.adjoint();
    m.block(0, 2 * k, k, d.r) = d.q.adjoint();
    m.block(k, 0, k, k) = -d.alpha2;
    m.block(k, k, k, k) = d.alpha1;
    m.block(k, 2 * k, k, d.r) = d.p;
    return m;
}

LambdaMatrix assemble_lambda(const AdhmData& d, const Point4& x)
{
    CMatrix m = lambda_constant_part(d);
    const int k = d.k;
    const cplx z1 = x.z1();
    const cplx z2 = x.z2();
    for (int j = 0; j < k; ++j) {
        m(j, j) += std::conj(z1);
        m(j, k + j) += std::conj(z2);
        m(k + j, j) -= z2;
        m(k + j, k + j) += z1;
    }
    return {std::move(m), x};
}

double reality_defect(const AdhmData& d, const Point4& x)
{
    const CMatrix lam = assemble_lambda(d, x).value;
    const CMatrix rho = lam * lam.adjoint();
    const int k = d.k;
    const double off = std::max(rho.block(0, k, k, k).norm(), rho.block(k, 0, k, k).norm());
    const double diag = (rho.block(0, 0, k, k) - rho.block(k, k, k, k)).norm();
    return std::max(off, diag) / std::max(1.0, rho.norm());
}

double default_scan_extent(const AdhmData& d)
{
    double m = 0.0;
    for (const CMatrix* mat : {&d.alpha1, &d.alpha2, &d.p, &d.q})
        if (mat->size() > 0) m = std::max(m, mat->cwiseAbs().maxCoeff());
    return 4.0 * (1.0 + m);
}

ScanResult nondegeneracy_scan(const AdhmData& d, const ScanConfig& cfg)
{
    d.validate_shape();
    const double extent = cfg.extent > 0.0 ? cfg.extent : default_scan_extent(d);
    const int n = std::max(cfg.points_per_axis, 2);
    const double spacing = 2.0 * extent / (n - 1);
    auto sigma = [&](const Point4& x) { return min_singular_value(assemble_lambda(d, x).value); };

    struct Cell {
        double sigma;
        Point4 x;
    };
    std::vector<Cell> cells;
    cells.reserve(static_cast<std::size_t>(n) * n * n * n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                for (int e = 0; e < n; ++e) {
                    const Point4 x{-extent + a * spacing, -extent + b * spacing, -extent + c * spacing,
                                   -extent + e * spacing};
                    cells.push_back({sigma(x), x});
                }
    const auto starts = std::min<std::size_t>(std::max(cfg.refine_starts, 1), cells.size());
    std::partial_sort(cells.begin(), cells.begin() + static_cast<std::ptrdiff_t>(starts), cells.end(),
                      [](const Cell& l, const Cell& r) { return l.sigma < r.sigma; });

    Cell best = cells.front();
    for (std::size_t s = 0; s < starts; ++s) {
        Cell cur = cells[s];
        double step = spacing / 2.0;
        for (int round = 0; round < cfg.refine_rounds; ++round) {
            // Pattern search at this step length until no coordinate move improves.
            for (int sweep = 0; sweep < 64; ++sweep) {
                bool improved = false;
                for (int mu = 0; mu < 4; ++mu) {
                    for (double dir : {1.0, -1.0}) {
                        const Point4 y = cur.x.shifted(mu, dir * step);
                        const double sy = sigma(y);
                        if (sy < cur.sigma) {
                            cur = {sy, y};
                            improved = true;
                        }
                    }
                }
                if (!improved) break;
            }
            step /= 4.0;
        }
        if (cur.sigma < best.sigma) best = cur;
    }
    return {best.sigma, best.x, spacing};
}

AdhmData gauge_act(const AdhmData& d, const CMatrix& u, const CMatrix& w)
{
    d.validate_shape();
    if (u.rows() != d.k || !is_unitary(u, 1e-12)) throw InvalidInput("u must be a k x k unitary matrix");
    if (w.rows() != d.r || !is_unitary(w, 1e-12)) throw InvalidInput("w must be an r x r unitary matrix");
    return {d.k,
            d.r,
            u * d.alpha1 * u.adjoint(),
            u * d.alpha2 * u.adjoint(),
            u * d.p * w.adjoint(),
            w * d.q * u.adjoint()};
}

AdhmData bpst_data(const Point4& center, double scale)
{
    if (!(scale > 0.0) || !std::isfinite(scale)) throw InvalidInput("scale must be positive");
    if (!center.finite()) throw InvalidInput("center must be finite");
    AdhmData d = AdhmData::zeros(1, 2);
    // lambda_x depends on x only through alpha_i + z_i(x), so alpha_i = -z_i(c)
    // puts the instanton at c.
    d.alpha1(0, 0) = cplx(0.0) - center.z1();  // 0 - z avoids negative zeros
    d.alpha2(0, 0) = cplx(0.0) - center.z2();
    d.p(0, 0) = scale;
    d.q(1, 0) = scale;
    return d;
}

AdhmData random_adhm_data(std::uint64_t seed, int k, int r, double spread)
{
    if (k < 1 || r < 1) throw InvalidInput("k and r must be positive");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
    auto fill = [&](CMatrix& m) {
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            for (Eigen::Index i = 0; i < m.rows(); ++i) {
                const double re = normal(rng);
                const double im = normal(rng);
                m(i, j) = cplx(re, im) * spread;
            }
    };
    AdhmData d = AdhmData::zeros(k, r);
    fill(d.alpha1);
    fill(d.alpha2);
    fill(d.p);
    fill(d.q);
    return d;
}

CMatrix random_unitary(std::uint64_t seed, int n)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    CMatrix g(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < n; ++i) {
            const double re = normal(rng);
            const double im = normal(rng);
            g(i, j) = {re, im};
        }
    Eigen::HouseholderQR<CMatrix> qr(g);
    CMatrix q = qr.householderQ();
    const CMatrix rr = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < n; ++j) {
        const double a = std::abs(rr(j, j));
        if (a > 0.0) q.col(j) *= rr(j, j) / a;
    }
    return q;
}

Point4 data_centroid(const AdhmData& d)
{
    d.validate_shape();
    const cplx c1 = -d.alpha1.trace() / static_cast<double>(d.k);
    const cplx c2 = -d.alpha2.trace() / static_cast<double>(d.k);
    return {c1.real(), c1.imag(), c2.real(), c2.imag()};
}

const char* to_string(Verdict v)
{
    switch (v) {
    case Verdict::valid: return "valid";
    case Verdict::constraint_violation: return "constraint_violation";
    case Verdict::degenerate: return "degenerate";
    }
    return "unknown";
}

ValidationReport validate(const AdhmData& d, const Tolerances& tol, const ScanConfig& scan,
                          std::uint64_t seed)
{
    const MomentMaps mm = moment_maps(d);
    ValidationReport rep;
    rep.complex_residual = mm.mu_c.norm();
    rep.real_residual = mm.mu_r.norm();

    const double extent = scan.extent > 0.0 ? scan.extent : default_scan_extent(d);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(-extent, extent);
    rep.reality_defect_max = reality_defect(d, {});
    for (int s = 0; s < 100; ++s) {
        const Point4 x{unif(rng), unif(rng), unif(rng), unif(rng)};
        rep.reality_defect_max = std::max(rep.reality_defect_max, reality_defect(d, x));
    }

    const ScanResult sr = nondegeneracy_scan(d, scan);
    rep.min_singular_value = sr.min_sigma;
    rep.argmin_point = sr.argmin;

    const double scale = std::max(1.0, d.norm() * d.norm());
    if (rep.complex_residual > tol.constraint * scale || rep.real_residual > tol.constraint * scale)
        rep.verdict = Verdict::constraint_violation;
    else if (rep.min_singular_value <= tol.degeneracy)
        rep.verdict = Verdict::degenerate;
    else
        rep.verdict = Verdict::valid;
    return rep;
}

}  // namespace instanton
