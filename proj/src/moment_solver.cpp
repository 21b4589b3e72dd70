#include "instanton/moment_solver.hpp"

#include <cmath>

namespace instanton {

namespace {

double inner(const AdhmData& a, const AdhmData& b)
{
    auto re = [](const CMatrix& x, const CMatrix& y) { return (x.adjoint() * y).trace().real(); };
    return re(a.alpha1, b.alpha1) + re(a.alpha2, b.alpha2) + re(a.p, b.p) + re(a.q, b.q);
}

double objective(const AdhmData& d)
{
    const MomentMaps m = moment_maps(d);
    return m.mu_c.squaredNorm() + m.mu_r.squaredNorm();
}

void check_antihermitian(const CMatrix& s, const char* name, Eigen::Index n)
{
    if (s.rows() != n || s.cols() != n)
        throw InvalidInput(std::string(name) + " must be square and match the other matrices");
    if ((s + s.adjoint()).norm() > 1e-12 * std::max(1.0, s.norm()))
        throw InvalidInput(std::string(name) + " is not anti-hermitian");
}

void check_quadruple(const AbstractQuadruple& q)
{
    const Eigen::Index n = q.s0.rows();
    check_antihermitian(q.s0, "s0", n);
    check_antihermitian(q.s1, "s1", n);
    check_antihermitian(q.s2, "s2", n);
    check_antihermitian(q.s3, "s3", n);
}

}  // namespace

void SolveOptions::validate() const
{
    if (!(tol > 0.0)) throw InvalidInput("tol must be positive");
    if (max_iters < 0) throw InvalidInput("max_iters must be non-negative");
    if (!(initial_step > 0.0)) throw InvalidInput("initial_step must be positive");
    if (!(armijo_c > 0.0 && armijo_c < 1.0)) throw InvalidInput("armijo_c must lie in (0, 1)");
    if (!(backtrack > 0.0 && backtrack < 1.0)) throw InvalidInput("backtrack must lie in (0, 1)");
}

ObjectiveGradient objective_and_gradient(const AdhmData& d)
{
    const MomentMaps m = moment_maps(d);
    const CMatrix& c = m.mu_c;
    const CMatrix& h = m.mu_r;

    ObjectiveGradient out;
    out.value = c.squaredNorm() + h.squaredNorm();
    out.grad = AdhmData::zeros(d.k, d.r);
    // From |mu_C|^2 = Re tr(mu_C^† mu_C).
    out.grad.alpha1 = 2.0 * commutator(c, d.alpha2.adjoint());
    out.grad.alpha2 = 2.0 * commutator(d.alpha1.adjoint(), c);
    out.grad.p = 2.0 * c * d.q.adjoint();
    out.grad.q = 2.0 * d.p.adjoint() * c;
    // From |mu_R|^2 = tr(mu_R^2), mu_R hermitian.
    out.grad.alpha1 += 4.0 * commutator(h, d.alpha1);
    out.grad.alpha2 += 4.0 * commutator(h, d.alpha2);
    out.grad.p += 4.0 * h * d.p;
    out.grad.q -= 4.0 * d.q * h;
    return out;
}

SolveResult solve(const AdhmData& seed_data, const SolveOptions& opts)
{
    seed_data.validate_shape();
    opts.validate();

    SolveResult res{seed_data, {}};
    SolveReport& rep = res.report;
    ObjectiveGradient og = objective_and_gradient(res.data);
    double step = opts.initial_step;
    const int decimate = 100;
    rep.trajectory_residuals.push_back(std::sqrt(og.value));

    int it = 0;
    while (std::sqrt(og.value) > opts.tol && it < opts.max_iters) {
        const double gnorm2 = inner(og.grad, og.grad);
        if (gnorm2 == 0.0) break;  // stationary point that is not a solution
        bool accepted = false;
        // Backtrack until the Armijo condition holds or the step underflows.
        while (step > 1e-300) {
            const AdhmData trial = res.data - og.grad * step;
            const double ft = objective(trial);
            if (ft <= og.value - opts.armijo_c * step * gnorm2) {
                res.data = trial;
                accepted = true;
                break;
            }
            step *= opts.backtrack;
        }
        if (!accepted) break;
        ++it;
        og = objective_and_gradient(res.data);
        if (it % decimate == 0) rep.trajectory_residuals.push_back(std::sqrt(og.value));
        // Let the step grow again so one bad region does not pin it small.
        step /= opts.backtrack;
    }

    rep.iterations = it;
    rep.final_residual = std::sqrt(og.value);
    if (rep.trajectory_residuals.back() != rep.final_residual)
        rep.trajectory_residuals.push_back(rep.final_residual);
    rep.converged = rep.final_residual <= opts.tol;
    if (rep.converged) {
        const ScanResult scan = nondegeneracy_scan(res.data);
        rep.min_singular_value = scan.min_sigma;
        rep.degenerate = !(scan.min_sigma > Tolerances{}.degeneracy);
    }
    return res;
}

double AbstractQuadruple::norm() const
{
    return std::sqrt(s0.squaredNorm() + s1.squaredNorm() + s2.squaredNorm() + s3.squaredNorm());
}

std::array<CMatrix, 3> abstract_residual(const AbstractQuadruple& q)
{
    check_quadruple(q);
    return {commutator(q.s0, q.s1) + commutator(q.s2, q.s3),
            commutator(q.s0, q.s2) + commutator(q.s3, q.s1),
            commutator(q.s0, q.s3) + commutator(q.s1, q.s2)};
}

ComplexPair to_complex_pair(const AbstractQuadruple& q)
{
    const auto e = abstract_residual(q);
    const cplx i{0.0, 1.0};
    ComplexPair out;
    out.d1 = q.s0 + i * q.s1;
    out.d2 = q.s2 + i * q.s3;
    const CMatrix real_eq = commutator(out.d1, out.d1.adjoint()) + commutator(out.d2, out.d2.adjoint());
    const CMatrix complex_eq = commutator(out.d1, out.d2);
    const CMatrix e1 = -0.5 * i * real_eq;
    const CMatrix e2 = 0.5 * (complex_eq - complex_eq.adjoint());
    const CMatrix e3 = -0.5 * i * (complex_eq + complex_eq.adjoint());
    out.equivalence_defect =
        std::sqrt((e1 - e[0]).squaredNorm() + (e2 - e[1]).squaredNorm() + (e3 - e[2]).squaredNorm());
    return out;
}

}  // namespace instanton
