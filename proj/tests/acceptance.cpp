// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include "support.hpp"

#include "instanton/adhm_core.hpp"
#include "instanton/field_eval.hpp"
#include "instanton/monad_tools.hpp"
#include "instanton/moment_solver.hpp"
#include "instanton/nahm_flow.hpp"
#include "instanton/observables.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

using namespace instanton;
using testing_support::random_points;
using testing_support::rel_diff;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

class Notes {
public:
    void check(bool ok, const std::string& what)
    {
        if (!ok) {
            pass_ = false;
            failures_ << (failures_.tellp() > 0 ? "; " : "") << what;
        }
    }
    void note(const std::string& name, double value)
    {
        char buf[96];
        std::snprintf(buf, sizeof buf, "%s%s=%.6g", notes_.tellp() > 0 ? ", " : "", name.c_str(), value);
        notes_ << buf;
    }
    Outcome outcome() const
    {
        return {pass_, pass_ ? notes_.str() : "FAILED: " + failures_.str() + " | " + notes_.str()};
    }

private:
    bool pass_ = true;
    std::ostringstream notes_;
    std::ostringstream failures_;
};

double fd_gradient_error(const AdhmData& d, double h)
{
    const ObjectiveGradient g = objective_and_gradient(d);
    double worst = 0.0;
    for (CMatrix AdhmData::*field : {&AdhmData::alpha1, &AdhmData::alpha2, &AdhmData::p, &AdhmData::q}) {
        const CMatrix& gm = g.grad.*field;
        for (Eigen::Index j = 0; j < gm.cols(); ++j) {
            for (Eigen::Index i = 0; i < gm.rows(); ++i) {
                for (const cplx dir : {cplx(1, 0), cplx(0, 1)}) {
                    AdhmData plus = d, minus = d;
                    (plus.*field)(i, j) += h * dir;
                    (minus.*field)(i, j) -= h * dir;
                    const double fd =
                        (objective_and_gradient(plus).value - objective_and_gradient(minus).value) / (2 * h);
                    const double an = dir == cplx(1, 0) ? gm(i, j).real() : gm(i, j).imag();
                    worst = std::max(worst, std::abs(fd - an) / std::max(1.0, std::abs(an)));
                }
            }
        }
    }
    return worst;
}

double max_reality_defect(const AdhmData& d, std::uint64_t seed, int count)
{
    double worst = 0.0;
    for (const Point4& x : random_points(seed, count, 3.0)) worst = std::max(worst, reality_defect(d, x));
    return worst;
}

double max_asd_residual(const AdhmData& d, std::uint64_t seed, int count)
{
    double worst = 0.0;
    for (const Point4& x : random_points(seed, count, 3.0)) worst = std::max(worst, asd_residual(d, x));
    return worst;
}

std::vector<Eigen::Vector3d> random_directions(std::uint64_t seed, int count)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n(0.0, 1.0);
    std::vector<Eigen::Vector3d> out;
    for (int i = 0; i < count; ++i) out.push_back(Eigen::Vector3d(n(rng), n(rng), n(rng)).normalized());
    return out;
}

CMatrix random_anti_hermitian(std::mt19937_64& rng, int n)
{
    std::normal_distribution<double> g(0.0, 1.0);
    CMatrix m(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < n; ++i) {
            const double re = g(rng);
            const double im = g(rng);
            m(i, j) = {re, im};
        }
    return antihermitian_part(m);
}

// ---------------------------------------------------------------------------

Outcome adhm_constraint()
{
    Notes n;
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> center(-5.0, 5.0), scale(0.1, 3.0);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        const Point4 c{center(rng), center(rng), center(rng), center(rng)};
        worst = std::max(worst, moment_maps(bpst_data(c, scale(rng))).residual_norm);
    }
    n.check(worst <= 1e-14, "BPST residual above 1e-14");
    n.note("max_bpst_residual", worst);

    // Linear response: residual(delta) / delta is constant for small delta.
    double spread = 0.0;
    for (std::uint64_t s = 0; s < 5; ++s) {
        const AdhmData base = bpst_data({center(rng), center(rng), center(rng), center(rng)}, scale(rng));
        AdhmData dir = random_adhm_data(50 + s, 1, 2, 1.0);
        dir = dir * (1.0 / dir.norm());
        std::vector<double> ratios;
        for (double delta = 1e-2; delta >= 1e-7; delta /= 10)
            ratios.push_back(moment_maps(base + dir * delta).residual_norm / delta);
        const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
        n.check(*lo > 0.0, "zero response to a perturbation");
        spread = std::max(spread, *hi / *lo);
    }
    n.check(spread <= 1.1, "residual not linear in perturbation size");
    n.note("ratio_spread", spread);
    return n.outcome();
}

Outcome reality_iff_constraints()
{
    Notes n;
    std::vector<AdhmData> solved;
    for (std::uint64_t s = 1; s <= 5; ++s) solved.push_back(solve(testing_support::noisy_bpst(s, 0.1)).data);
    for (std::uint64_t s = 7; s <= 11; ++s) solved.push_back(solve(random_adhm_data(s, 2, 2, 1.0)).data);

    double worst_solved = 0.0, least_perturbed = 1e300;
    for (std::size_t i = 0; i < solved.size(); ++i) {
        const AdhmData& d = solved[i];
        const bool small = moment_maps(d).residual_norm <= 1e-12 * d.norm();
        const double defect = max_reality_defect(d, 100 + i, 100);
        n.check(small, "a solved dataset has residual above 1e-12 |data|");
        n.check(defect <= 1e-10, "a solved dataset has reality defect above 1e-10");
        worst_solved = std::max(worst_solved, defect);

        const AdhmData p = d + random_adhm_data(200 + i, d.k, d.r, 1e-4);
        const double pdefect = max_reality_defect(p, 300 + i, 100);
        n.check(moment_maps(p).residual_norm > 1e-12 * p.norm(), "perturbation did not break the constraints");
        n.check(pdefect > 1e-10, "a perturbed dataset passes the reality check");
        least_perturbed = std::min(least_perturbed, pdefect);
    }
    n.note("max_defect_solved", worst_solved);
    n.note("min_defect_perturbed", least_perturbed);
    return n.outcome();
}

Outcome anti_self_duality()
{
    Notes n;
    const double bpst = max_asd_residual(bpst_data({}, 1.0), 3, 1000);
    const double k2 = max_asd_residual(testing_support::solved_k2(), 4, 1000);
    n.check(bpst <= 1e-10, "BPST asd residual above 1e-10");
    n.check(k2 <= 1e-10, "k=2 asd residual above 1e-10");
    n.note("bpst", bpst);
    n.note("k2", k2);
    return n.outcome();
}

Outcome curvature_vs_fd()
{
    Notes n;
    const AdhmData b = bpst_data({}, 1.0);
    double worst = 0.0;
    for (const Point4& x : random_points(5, 100, 3.0)) {
        const CurvatureSample s = curvature(b, x);
        const auto fd = curvature_fd(b, x, 1e-4);
        double diff = 0.0;
        for (int i = 0; i < 6; ++i) diff += (fd[i] - s.f[i]).squaredNorm();
        worst = std::max(worst, std::sqrt(diff) / s.norm());
    }
    n.check(worst <= 1e-5, "relative error above 1e-5");
    n.note("max_rel_error", worst);
    return n.outcome();
}

Outcome charge_quantization()
{
    Notes n;
    const IntegrationResult one = integrate(bpst_data({}, 1.0));
    const IntegrationResult two = integrate(testing_support::solved_k2());
    n.check(std::abs(one.total_charge - 1.0) <= 1e-3, "BPST charge not within 1e-3 of 1");
    n.check(std::abs(two.total_charge - 2.0) <= 1e-2, "k=2 charge not within 1e-2 of 2");
    double worst = 0.0;
    for (const AdhmData& d : {bpst_data({}, 1.0), testing_support::solved_k2()}) {
        for (const Point4& x : random_points(6, 100, 3.0)) {
            const DensitySample s = densities(d, x);
            worst = std::max(worst, rel_diff(s.energy_density, s.charge_density));
        }
    }
    n.check(worst <= 1e-10, "energy and charge densities differ");
    n.note("Q_bpst", one.total_charge);
    n.note("Q_k2", two.total_charge);
    n.note("max_density_rel_diff", worst);
    return n.outcome();
}

Outcome solver()
{
    Notes n;
    double worst_res = 0.0, worst_defect = 0.0, worst_asd = 0.0;
    int max_iters = 0;
    for (std::uint64_t s = 1; s <= 5; ++s) {
        const SolveResult r = solve(testing_support::noisy_bpst(s, 0.1));
        n.check(r.report.converged && r.report.final_residual <= 1e-12 && r.report.iterations <= 50000,
                "seed " + std::to_string(s) + " did not converge");
        n.check(!r.report.degenerate, "seed " + std::to_string(s) + " converged to a degenerate minimum");
        worst_res = std::max(worst_res, r.report.final_residual);
        max_iters = std::max(max_iters, r.report.iterations);
        worst_defect = std::max(worst_defect, max_reality_defect(r.data, 10 + s, 100));
        worst_asd = std::max(worst_asd, max_asd_residual(r.data, 20 + s, 1000));
    }
    n.check(worst_defect <= 1e-10, "solver output fails the reality check");
    n.check(worst_asd <= 1e-10, "solver output fails the ASD check");

    double worst_grad = 0.0;
    int instance = 0;
    for (const auto& kr : {std::pair{1, 2}, std::pair{2, 2}, std::pair{3, 2}})
        for (int i = 0; i < 7 && instance < 20; ++i, ++instance)
            worst_grad = std::max(worst_grad, fd_gradient_error(random_adhm_data(500 + instance, kr.first, kr.second, 1.0), 1e-6));
    n.check(worst_grad <= 1e-6, "gradient differs from finite differences");
    n.note("max_residual", worst_res);
    n.note("max_iterations", max_iters);
    n.note("max_defect", worst_defect);
    n.note("max_asd", worst_asd);
    n.note("max_grad_rel_error", worst_grad);
    return n.outcome();
}

double pole_error(double h)
{
    const Trajectory traj = integrate(pole_solution(1.0, 0.0), 2.0, h);
    double worst = 0.0;
    for (const NahmState& st : traj.states) {
        const NahmState exact = pole_solution(st.s, 0.0);
        for (int i = 0; i < 3; ++i) worst = std::max(worst, (st.t[i] - exact.t[i]).norm());
    }
    return worst;
}

Outcome nahm()
{
    Notes n;
    const double err = pole_error(1e-3);
    n.check(err <= 1e-8, "pole solution error above 1e-8");

    const Trajectory traj = integrate(random_nahm_state(5, 3), 0.5, 1e-3);
    double drift = 0.0;
    for (const Eigen::Vector3d& d : random_directions(17, 20)) drift = std::max(drift, spectral_drift(traj, d));
    n.check(drift <= 1e-8, "spectral drift above 1e-8");

    // h = 1e-3 is at round-off for this solution; the order is measured at coarser steps.
    const double ratio = pole_error(0.1) / pole_error(0.05);
    n.check(std::abs(ratio - 16.0) <= 0.15 * 16.0, "halving h does not give ~16x");
    n.note("pole_error", err);
    n.note("max_drift", drift);
    n.note("halving_ratio", ratio);
    return n.outcome();
}

Outcome monad_contract()
{
    Notes n;
    double worst_res = 0.0, worst_proj = 0.0;
    for (const AdhmData& d : {bpst_data({}, 1.0), testing_support::solved_k2()}) {
        const MonadData m = monad_from_adhm(d);
        const double res = monad_residual(m);
        n.check(res <= 1e-12 * d.norm(), "monad residual above 1e-12 |data|");
        n.check(m.dim_u == d.k && m.dim_v == 2 * d.k + d.r && m.dim_w == d.k, "wrong monad dimensions");
        worst_res = std::max(worst_res, res);
        for (const Point4& x : random_points(30, 50, 3.0)) {
            const auto [p, q] = real_line_points(x);
            const LineTriviality t = line_triviality(m, p, q);
            n.check(t.trivial && t.symmetric_agrees, "non-trivial real line at " + to_string(x));
            if (!t.trivial) continue;
            const CMatrix fiber = fiber_basis(m, p, q);
            n.check(fiber.cols() == d.r, "fiber dimension differs from r");
            worst_proj = std::max(worst_proj, projector_distance(fiber, kernel_frame(d, x).v));
        }
    }
    n.check(worst_proj <= 1e-10, "fiber differs from ker lambda");
    n.note("max_residual", worst_res);
    n.note("max_projector_distance", worst_proj);
    return n.outcome();
}

Outcome gauge_invariance()
{
    Notes n;
    double worst = 0.0;
    auto same = [&](double a, double b, const std::string& what) {
        const double r = rel_diff(a, b);
        worst = std::max(worst, r);
        n.check(r <= 1e-10, what + " not gauge invariant");
    };

    // Residuals: on generic data, where they are O(1).
    for (std::uint64_t s = 0; s < 5; ++s) {
        const AdhmData d = random_adhm_data(60 + s, 2, 2, 1.0);
        const AdhmData g = gauge_act(d, random_unitary(70 + s, 2), random_unitary(80 + s, 2));
        same(moment_maps(d).residual_norm, moment_maps(g).residual_norm, "moment-map residual");
        same(objective_and_gradient(d).value, objective_and_gradient(g).value, "objective");
        for (const Point4& x : random_points(90 + s, 10, 3.0)) {
            same(reality_defect(d, x), reality_defect(g, x), "reality defect");
            same(asd_residual(d, x), asd_residual(g, x), "asd residual");
        }
    }

    // Densities and total charge: on solutions.
    const AdhmData d = testing_support::solved_k2();
    const AdhmData g = gauge_act(d, random_unitary(1, 2), random_unitary(2, 2));
    for (const Point4& x : random_points(7, 100, 3.0)) {
        const DensitySample a = densities(d, x), b = densities(g, x);
        same(a.energy_density, b.energy_density, "energy density");
        same(a.charge_density, b.charge_density, "charge density");
    }
    QuadratureConfig cfg;
    cfg.radial_scale = default_radial_scale(d);
    cfg.origin = data_centroid(d);
    const IntegrationResult qa = integrate(d, cfg), qb = integrate(g, cfg);
    same(qa.total_charge, qb.total_charge, "total charge");
    same(qa.total_energy, qb.total_energy, "total energy");

    const AdhmData b = bpst_data({0.5, -0.5, 1, 0}, 1.5);
    CMatrix phase(1, 1);
    phase(0, 0) = std::polar(1.0, 0.9);
    const AdhmData bg = gauge_act(b, phase, random_unitary(3, 2));
    for (const Point4& x : random_points(8, 50, 3.0)) same(densities(b, x).energy_density, densities(bg, x).energy_density, "BPST density");
    n.note("max_rel_change", worst);
    return n.outcome();
}

Outcome abstract_equations()
{
    Notes n;
    std::mt19937_64 rng(10);
    double worst = 0.0, oracle = 0.0;
    for (int i = 0; i < 50; ++i) {
        const int size = 1 + i % 6;
        const AbstractQuadruple q{random_anti_hermitian(rng, size), random_anti_hermitian(rng, size),
                                  random_anti_hermitian(rng, size), random_anti_hermitian(rng, size)};
        const ComplexPair c = to_complex_pair(q);
        worst = std::max(worst, c.equivalence_defect / q.norm());

        // Independent expansion: with D1 = S0 + i S1, D2 = S2 + i S3,
        //   [D1, D2] = E2 + i E3 and [D1, D1^†] + [D2, D2^†] = 2i E1.
        const auto e = abstract_residual(q);
        const CMatrix e1 = commutator(q.s0, q.s1) + commutator(q.s2, q.s3);
        const CMatrix e2 = commutator(q.s0, q.s2) + commutator(q.s3, q.s1);
        const CMatrix e3 = commutator(q.s0, q.s3) + commutator(q.s1, q.s2);
        const CMatrix d1 = q.s0 + cplx(0, 1) * q.s1, d2 = q.s2 + cplx(0, 1) * q.s3;
        double dev = (e[0] - e1).norm() + (e[1] - e2).norm() + (e[2] - e3).norm();
        dev += (commutator(d1, d2) - (e2 + cplx(0, 1) * e3)).norm();
        dev += (commutator(d1, d1.adjoint()) + commutator(d2, d2.adjoint()) - cplx(0, 2) * e1).norm();
        oracle = std::max(oracle, dev / q.norm());
    }
    n.check(worst <= 1e-12, "equivalence defect above 1e-12 |q|");
    n.check(oracle <= 1e-12, "independent expansion disagrees");
    n.note("max_defect_over_norm", worst);
    n.note("max_oracle_dev_over_norm", oracle);
    return n.outcome();
}

struct Criterion {
    const char* name;
    double budget_seconds;
    std::function<Outcome()> run;
};

}  // namespace

int main()
{
    // The shared k=2 dataset is solved once up front so no criterion is charged for it.
    const auto t0 = std::chrono::steady_clock::now();
    (void)testing_support::solved_k2();
    const double setup = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("setup: solved k=2 dataset in %.2f s\n", setup);

    const Criterion criteria[] = {
        {"ADHM constraint", 1.0, adhm_constraint},
        {"reality invariant <=> constraints", 5.0, reality_iff_constraints},
        {"anti-self-duality", 10.0, anti_self_duality},
        {"curvature vs finite differences", 10.0, curvature_vs_fd},
        {"charge quantization", 60.0, charge_quantization},
        {"solver", 120.0, solver},
        {"Nahm flow", 30.0, nahm},
        {"monad contract", 30.0, monad_contract},
        {"gauge invariance", 30.0, gauge_invariance},
        {"abstract equations", 1.0, abstract_equations},
    };

    int failed = 0;
    int index = 0;
    for (const Criterion& c : criteria) {
        ++index;
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("FAILED: exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (secs > c.budget_seconds) {
            o.pass = false;
            o.detail += " | over time budget";
        }
        std::printf("[%s] %2d %-34s %7.2f s / %5.0f s  %s\n", o.pass ? "PASS" : "FAIL", index, c.name, secs,
                    c.budget_seconds, o.detail.c_str());
        std::fflush(stdout);
        failed += o.pass ? 0 : 1;
    }
    std::printf("%d/%d criteria passed\n", index - failed, index);
    return failed == 0 ? 0 : 1;
}
