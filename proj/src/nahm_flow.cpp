#include "instanton/nahm_flow.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace instanton {

namespace {

void check_state(const NahmState& st)
{
    const Eigen::Index n = st.t[0].rows();
    for (int i = 0; i < 3; ++i) {
        const CMatrix& m = st.t[static_cast<std::size_t>(i)];
        if (m.rows() != n || m.cols() != n)
            throw InvalidInput("Nahm matrices must be square and of equal size");
        if ((m + m.adjoint()).norm() > 1e-10 * std::max(1.0, m.norm()))
            throw InvalidInput("T" + std::to_string(i + 1) + " is not anti-hermitian");
    }
}

std::array<CMatrix, 3> rhs_unchecked(const std::array<CMatrix, 3>& t)
{
    return {-commutator(t[1], t[2]), -commutator(t[2], t[0]), -commutator(t[0], t[1])};
}

std::array<CMatrix, 3> axpy(const std::array<CMatrix, 3>& t, double a, const std::array<CMatrix, 3>& k)
{
    return {t[0] + a * k[0], t[1] + a * k[1], t[2] + a * k[2]};
}

}  // namespace

double NahmState::norm() const
{
    return std::sqrt(t[0].squaredNorm() + t[1].squaredNorm() + t[2].squaredNorm());
}

std::array<CMatrix, 3> nahm_rhs(const NahmState& state)
{
    check_state(state);
    return rhs_unchecked(state.t);
}

Trajectory integrate(const NahmState& initial, double s_end, double h)
{
    check_state(initial);
    if (!(h > 0.0)) throw InvalidInput("step must be positive");
    if (!(s_end > initial.s)) throw InvalidInput("s_end must exceed the initial parameter");

    const double span = s_end - initial.s;
    const auto steps = static_cast<long>(std::ceil(span / h - 1e-9));
    Trajectory traj;
    traj.step = span / static_cast<double>(steps);
    traj.states.reserve(static_cast<std::size_t>(steps) + 1);
    traj.states.push_back(initial);

    const double dt = traj.step;
    std::array<CMatrix, 3> t = initial.t;
    for (long n = 1; n <= steps; ++n) {
        const auto k1 = rhs_unchecked(t);
        const auto k2 = rhs_unchecked(axpy(t, dt / 2, k1));
        const auto k3 = rhs_unchecked(axpy(t, dt / 2, k2));
        const auto k4 = rhs_unchecked(axpy(t, dt, k3));
        double corr2 = 0.0;
        double norm2 = 0.0;
        for (std::size_t i = 0; i < 3; ++i) {
            const CMatrix next = t[i] + (dt / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            t[i] = antihermitian_part(next);
            corr2 += (next - t[i]).squaredNorm();
            norm2 += t[i].squaredNorm();
        }
        const double s = initial.s + static_cast<double>(n) * dt;
        if (!std::isfinite(norm2) || std::sqrt(norm2) > kPoleThreshold) {
            throw PoleError("Nahm flow blew up near s = " + std::to_string(s) + " (last good s = " +
                                std::to_string(traj.states.back().s) + ")",
                            traj.states.back().s);
        }
        traj.max_correction = std::max(traj.max_correction, std::sqrt(corr2));
        traj.states.push_back({s, t});
    }
    return traj;
}

Eigen::Matrix3d minimal_rotation_to_axis(const Eigen::Vector3d& direction)
{
    const double len = direction.norm();
    if (!(len > 0.0)) throw InvalidInput("direction must be nonzero");
    const Eigen::Vector3d d = direction / len;
    // Quaternion::FromTwoVectors picks the rotation about d x e1, which is the
    // minimal one; for d = -e1 it picks a deterministic half-turn.
    const Eigen::Quaterniond rot = Eigen::Quaterniond::FromTwoVectors(d, Eigen::Vector3d::UnitX());
    return rot.toRotationMatrix();
}

CVector rotated_spectrum(const NahmState& state, const Eigen::Vector3d& direction)
{
    const Eigen::Matrix3d r = minimal_rotation_to_axis(direction);
    std::array<CMatrix, 3> tr;
    for (int a = 0; a < 3; ++a) {
        tr[static_cast<std::size_t>(a)] = r(a, 0) * state.t[0] + r(a, 1) * state.t[1] + r(a, 2) * state.t[2];
    }
    const CMatrix m = tr[1] + cplx(0.0, 1.0) * tr[2];
    Eigen::ComplexEigenSolver<CMatrix> es(m, false);
    return es.eigenvalues();
}

double matched_spectral_distance(const CVector& a, const CVector& b)
{
    if (a.size() != b.size()) throw InvalidInput("spectra must have equal size");
    struct Pair {
        double dist;
        Eigen::Index i;
        Eigen::Index j;
    };
    std::vector<Pair> pairs;
    for (Eigen::Index i = 0; i < a.size(); ++i)
        for (Eigen::Index j = 0; j < b.size(); ++j) pairs.push_back({std::abs(a(i) - b(j)), i, j});
    std::sort(pairs.begin(), pairs.end(), [](const Pair& l, const Pair& r) {
        if (l.dist != r.dist) return l.dist < r.dist;
        if (l.i != r.i) return l.i < r.i;
        return l.j < r.j;
    });
    std::vector<bool> used_a(static_cast<std::size_t>(a.size()), false);
    std::vector<bool> used_b(static_cast<std::size_t>(b.size()), false);
    double worst = 0.0;
    for (const Pair& p : pairs) {
        if (used_a[static_cast<std::size_t>(p.i)] || used_b[static_cast<std::size_t>(p.j)]) continue;
        used_a[static_cast<std::size_t>(p.i)] = true;
        used_b[static_cast<std::size_t>(p.j)] = true;
        worst = std::max(worst, p.dist);
    }
    return worst;
}

CVector merge_clusters(const CVector& ev, double tol)
{
    const Eigen::Index n = ev.size();
    // Single-linkage clusters via union-find.
    std::vector<Eigen::Index> parent(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) parent[static_cast<std::size_t>(i)] = i;
    auto find = [&](Eigen::Index i) {
        while (parent[static_cast<std::size_t>(i)] != i) i = parent[static_cast<std::size_t>(i)];
        return i;
    };
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j)
            if (std::abs(ev(i) - ev(j)) <= tol) parent[static_cast<std::size_t>(find(j))] = find(i);

    CVector out(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::Index root = find(i);
        cplx sum = 0.0;
        int count = 0;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (find(j) == root) {
                sum += ev(j);
                ++count;
            }
        }
        out(i) = sum / static_cast<double>(count);
    }
    return out;
}

double spectral_drift(const Trajectory& traj, const Eigen::Vector3d& direction)
{
    if (traj.states.empty()) throw InvalidInput("trajectory is empty");
    auto spectrum = [&](const NahmState& st) {
        return merge_clusters(rotated_spectrum(st, direction), kClusterTol * std::max(1.0, st.norm()));
    };
    const CVector ref = spectrum(traj.states.front());
    double drift = 0.0;
    for (const NahmState& st : traj.states)
        drift = std::max(drift, matched_spectral_distance(ref, spectrum(st)));
    return drift;
}

std::array<CMatrix, 3> su2_generators()
{
    const cplx i{0.0, 1.0};
    CMatrix s1(2, 2), s2(2, 2), s3(2, 2);
    s1 << 0, 1, 1, 0;
    s2 << 0, -i, i, 0;
    s3 << 1, 0, 0, -1;
    return {-0.5 * i * s1, -0.5 * i * s2, -0.5 * i * s3};
}

NahmState pole_solution(double s, double s0)
{
    const auto e = su2_generators();
    const double f = 1.0 / (s - s0);
    return {s, {f * e[0], f * e[1], f * e[2]}};
}

NahmState random_nahm_state(std::uint64_t seed, int n, double spread)
{
    if (n < 1) throw InvalidInput("matrix size must be positive");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
    NahmState st;
    for (auto& m : st.t) {
        CMatrix g(n, n);
        for (Eigen::Index j = 0; j < n; ++j)
            for (Eigen::Index i = 0; i < n; ++i) {
                const double re = normal(rng);
                const double im = normal(rng);
                g(i, j) = cplx(re, im) * spread;
            }
        m = antihermitian_part(g);
    }
    return st;
}

}  // namespace instanton
