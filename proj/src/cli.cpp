#include "instanton/cli.hpp"

#include "instanton/adhm_core.hpp"
#include "instanton/field_eval.hpp"
#include "instanton/json_io.hpp"
#include "instanton/monad_tools.hpp"
#include "instanton/moment_solver.hpp"
#include "instanton/nahm_flow.hpp"
#include "instanton/observables.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

namespace instanton::cli {

namespace {

using io::json;

class UsageError : public Error {
public:
    using Error::Error;
};

struct Shared {
    std::string input;
    std::string output;
    std::uint64_t seed = 0;
    bool json = false;
};

void add_shared(CLI::App* cmd, Shared& s)
{
    cmd->add_option("--input", s.input, "Input JSON file");
    cmd->add_option("--output", s.output, "Output file");
    cmd->add_option("--seed", s.seed, "Seed for every random choice");
    cmd->add_flag("--json", s.json, "Machine-readable report on standard output");
}

// Input problems are usage errors; numerical problems found later are not.
AdhmData load_adhm(const std::string& path)
{
    if (path.empty()) throw UsageError("--input is required");
    try {
        return io::adhm_from_json(io::parse(io::read_file(path), path));
    } catch (const InvalidInput& e) {
        throw UsageError(e.what());
    }
}

json load_json(const std::string& path)
{
    if (path.empty()) throw UsageError("--input is required");
    try {
        return io::parse(io::read_file(path), path);
    } catch (const InvalidInput& e) {
        throw UsageError(e.what());
    }
}

void emit(const Shared& s, std::ostream& out, const json& report, const std::string& text)
{
    if (s.json)
        out << report.dump(2) << "\n";
    else
        out << text;
}

std::string fmt(double v)
{
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

Point4 parse_point(const std::string& spec)
{
    std::array<double, 4> v{};
    std::istringstream is(spec);
    std::string tok;
    int n = 0;
    while (std::getline(is, tok, ',')) {
        if (n >= 4) throw UsageError("point '" + spec + "' must have 4 comma-separated coordinates");
        try {
            std::size_t used = 0;
            v[static_cast<std::size_t>(n)] = std::stod(tok, &used);
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw UsageError("bad coordinate '" + tok + "' in '" + spec + "'");
        }
        ++n;
    }
    if (n != 4) throw UsageError("point '" + spec + "' must have 4 comma-separated coordinates");
    return {v[0], v[1], v[2], v[3]};
}

// ---------------------------------------------------------------- validate

int run_validate(const Shared& s, std::ostream& out)
{
    const AdhmData d = load_adhm(s.input);
    const ValidationReport rep = validate(d, {}, {}, s.seed);
    std::ostringstream text;
    text << "verdict: " << to_string(rep.verdict) << "\n"
         << "complex_residual: " << fmt(rep.complex_residual) << "\n"
         << "real_residual: " << fmt(rep.real_residual) << "\n"
         << "reality_defect_max: " << fmt(rep.reality_defect_max) << "\n"
         << "min_singular_value: " << fmt(rep.min_singular_value) << " at " << to_string(rep.argmin_point)
         << "\n";
    emit(s, out, io::report_to_json(rep), text.str());
    return rep.verdict == Verdict::valid ? kSuccess : kVerdictInvalid;
}

// ---------------------------------------------------------------- solve

struct SolveArgs {
    int k = 1;
    int r = 2;
    double noise = 0.1;
    SolveOptions opts;
};

int run_solve(const Shared& s, const SolveArgs& a, std::ostream& out)
{
    AdhmData seed_data;
    if (!s.input.empty()) {
        seed_data = load_adhm(s.input);
    } else {
        if (a.k < 1 || a.r < 1) throw UsageError("--k and --r must be positive");
        seed_data = (a.k == 1 && a.r == 2) ? bpst_data({}, 1.0) : AdhmData::zeros(a.k, a.r);
        seed_data = seed_data + random_adhm_data(s.seed, a.k, a.r, a.noise);
    }
    try {
        a.opts.validate();
    } catch (const InvalidInput& e) {
        throw UsageError(e.what());
    }
    const SolveResult res = solve(seed_data, a.opts);
    if (!s.output.empty()) io::write_file(s.output, io::adhm_to_json(res.data).dump(2) + "\n");

    std::ostringstream text;
    text << "converged: " << (res.report.converged ? "true" : "false") << "\n"
         << "iterations: " << res.report.iterations << "\n"
         << "final_residual: " << fmt(res.report.final_residual) << "\n";
    if (res.report.converged)
        text << "min_singular_value: " << fmt(res.report.min_singular_value)
             << (res.report.degenerate ? " (degenerate minimum)" : "") << "\n";
    emit(s, out, io::report_to_json(res.report), text.str());
    return res.report.converged && !res.report.degenerate ? kSuccess : kVerdictInvalid;
}

// ---------------------------------------------------------------- field

struct Grid {
    double lo;
    double hi;
    double step;
    int count;
};

Grid parse_grid(const std::string& spec)
{
    std::array<double, 3> v{};
    std::istringstream is(spec);
    std::string tok;
    int n = 0;
    while (std::getline(is, tok, ':')) {
        if (n >= 3) throw UsageError("grid '" + spec + "' must be lo:hi:step");
        try {
            std::size_t used = 0;
            v[static_cast<std::size_t>(n)] = std::stod(tok, &used);
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw UsageError("bad number '" + tok + "' in grid '" + spec + "'");
        }
        ++n;
    }
    if (n != 3) throw UsageError("grid '" + spec + "' must be lo:hi:step");
    if (!(v[2] > 0.0)) throw UsageError("grid step must be positive");
    if (v[0] > v[1]) throw UsageError("empty grid: lo > hi");
    const int count = static_cast<int>(std::floor((v[1] - v[0]) / v[2] + 1e-9)) + 1;
    return {v[0], v[1], v[2], count};
}

// Returns the fixed value per coordinate, NaN for the two free ones.
std::array<double, 4> parse_plane(const std::string& spec)
{
    std::array<double, 4> fixed{};
    fixed.fill(std::numeric_limits<double>::quiet_NaN());
    std::istringstream is(spec);
    std::string tok;
    int n = 0;
    while (std::getline(is, tok, ',')) {
        const auto eq = tok.find('=');
        if (tok.size() < 4 || tok[0] != 'x' || eq != 2 || tok[1] < '0' || tok[1] > '3')
            throw UsageError("plane entries must look like x2=0, got '" + tok + "'");
        const int mu = tok[1] - '0';
        if (!std::isnan(fixed[static_cast<std::size_t>(mu)]))
            throw UsageError("coordinate x" + std::to_string(mu) + " fixed twice");
        try {
            std::size_t used = 0;
            const std::string val = tok.substr(3);
            fixed[static_cast<std::size_t>(mu)] = std::stod(val, &used);
            if (used != val.size()) throw std::invalid_argument(val);
        } catch (const std::exception&) {
            throw UsageError("bad value in plane entry '" + tok + "'");
        }
        ++n;
    }
    if (n != 2) throw UsageError("plane must fix exactly two coordinates, e.g. x2=0,x3=0");
    return fixed;
}

struct FieldArgs {
    std::string grid = "-3:3:0.5";
    std::string plane = "x2=0,x3=0";
};

int run_field(const Shared& s, const FieldArgs& a, std::ostream& out)
{
    const Grid g = parse_grid(a.grid);
    const auto fixed = parse_plane(a.plane);
    const AdhmData d = load_adhm(s.input);
    std::array<int, 2> free_axes{};
    int nf = 0;
    for (int mu = 0; mu < 4; ++mu)
        if (std::isnan(fixed[static_cast<std::size_t>(mu)])) free_axes[static_cast<std::size_t>(nf++)] = mu;

    std::ostringstream csv;
    csv << std::setprecision(17);
    csv << "x0,x1,x2,x3,energy,charge\n";
    double peak = -1.0;
    Point4 peak_at;
    for (int i = 0; i < g.count; ++i) {
        for (int j = 0; j < g.count; ++j) {
            Eigen::Vector4d x;
            for (int mu = 0; mu < 4; ++mu) x[mu] = fixed[static_cast<std::size_t>(mu)];
            x[free_axes[0]] = g.lo + i * g.step;
            x[free_axes[1]] = g.lo + j * g.step;
            const DensitySample ds = densities(d, Point4::from_array(x));
            csv << x[0] << "," << x[1] << "," << x[2] << "," << x[3] << "," << ds.energy_density << ","
                << ds.charge_density << "\n";
            if (ds.energy_density > peak) {
                peak = ds.energy_density;
                peak_at = ds.point;
            }
        }
    }
    if (!s.output.empty())
        io::write_file(s.output, csv.str());
    else if (!s.json)
        out << csv.str();

    const json report{{"schema", io::kSchemaVersion},
                      {"rows", g.count * g.count},
                      {"peak_energy_density", peak},
                      {"peak_point", io::point_to_json(peak_at)}};
    if (s.json) out << report.dump(2) << "\n";
    return kSuccess;
}

// ---------------------------------------------------------------- charge

int run_charge(const Shared& s, QuadratureConfig cfg, std::ostream& out)
{
    const AdhmData d = load_adhm(s.input);
    cfg.seed = s.seed;
    try {
        cfg.validate();
    } catch (const InvalidInput& e) {
        throw UsageError(e.what());
    }
    const IntegrationResult res = integrate(d, cfg);
    const json report = io::report_to_json(res, d.k);
    if (!s.output.empty()) io::write_file(s.output, report.dump(2) + "\n");
    std::ostringstream text;
    text << "total_charge: " << fmt(res.total_charge) << " (k = " << d.k << ")\n"
         << "total_energy / 8pi^2: " << fmt(res.total_energy) << "\n"
         << "error_estimate: " << fmt(res.error_estimate) << "\n"
         << "nodes: " << res.nodes << "\n";
    emit(s, out, report, text.str());
    return kSuccess;
}

// ---------------------------------------------------------------- nahm

struct NahmArgs {
    int n = 3;
    bool pole_test = false;
    double s_end = 0.5;
    double h = 1e-3;
    int directions = 20;
    double tolerance = 1e-8;
};

std::vector<Eigen::Vector3d> random_directions(std::uint64_t seed, int count)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<Eigen::Vector3d> dirs;
    while (static_cast<int>(dirs.size()) < count) {
        Eigen::Vector3d v{normal(rng), normal(rng), normal(rng)};
        if (v.norm() > 1e-6) dirs.push_back(v.normalized());
    }
    return dirs;
}

int run_nahm(const Shared& s, const NahmArgs& a, std::ostream& out)
{
    if (!(a.h > 0.0)) throw UsageError("--step must be positive");
    if (a.directions < 1) throw UsageError("--directions must be positive");
    NahmState initial;
    double s_end = a.s_end;
    if (a.pole_test) {
        if (a.n != 2) throw UsageError("--pole-test uses the 2x2 su(2) solution; pass --n 2");
        initial = pole_solution(1.0, 0.0);
        s_end = 2.0;
    } else {
        if (a.n < 1) throw UsageError("--n must be positive");
        initial = random_nahm_state(s.seed, a.n);
        initial.s = 0.0;
    }
    const Trajectory traj = integrate(initial, s_end, a.h);

    double drift = spectral_drift(traj, Eigen::Vector3d::UnitX());
    for (const auto& dir : random_directions(s.seed + 1, a.directions))
        drift = std::max(drift, spectral_drift(traj, dir));

    json report{{"schema", io::kSchemaVersion},
                {"n", static_cast<int>(initial.t[0].rows())},
                {"steps", traj.states.size() - 1},
                {"step", traj.step},
                {"max_spectral_drift", drift},
                {"max_antihermitian_correction", traj.max_correction}};
    std::ostringstream text;
    text << "steps: " << traj.states.size() - 1 << " (h = " << fmt(traj.step) << ")\n"
         << "max_spectral_drift: " << fmt(drift) << "\n";
    bool ok = drift <= a.tolerance;
    if (a.pole_test) {
        double dev = 0.0;
        for (const NahmState& st : traj.states) {
            const NahmState exact = pole_solution(st.s, 0.0);
            for (std::size_t i = 0; i < 3; ++i) dev = std::max(dev, (st.t[i] - exact.t[i]).cwiseAbs().maxCoeff());
        }
        report["analytic_deviation"] = dev;
        text << "analytic_deviation: " << fmt(dev) << "\n";
        ok = ok && dev <= a.tolerance;
    }
    report["within_tolerance"] = ok;
    if (!s.output.empty()) io::write_file(s.output, io::trajectory_to_json(traj, Eigen::Vector3d::UnitX()).dump() + "\n");
    emit(s, out, report, text.str());
    return ok ? kSuccess : kVerdictInvalid;
}

// ---------------------------------------------------------------- monad

struct MonadArgs {
    int lines = 50;
};

int run_monad(const Shared& s, const MonadArgs& a, std::ostream& out)
{
    if (a.lines < 1) throw UsageError("--lines must be positive");
    const json in = load_json(s.input);
    const bool from_adhm = !in.contains("dims");
    AdhmData d;
    MonadData m;
    try {
        if (from_adhm)
            d = io::adhm_from_json(in);
        else
            m = io::monad_from_json(in);
    } catch (const InvalidInput& e) {
        throw UsageError(e.what());
    }
    if (from_adhm) m = monad_from_adhm(d);

    const double residual = monad_residual(m);
    std::mt19937_64 rng(s.seed);
    std::uniform_real_distribution<double> unif(-3.0, 3.0);
    int trivial = 0;
    int symmetric = 0;
    int fiber_ok = 0;
    double worst_projector = 0.0;
    const int expected_fiber = m.dim_v - 2 * m.dim_w;
    for (int l = 0; l < a.lines; ++l) {
        const Point4 x{unif(rng), unif(rng), unif(rng), unif(rng)};
        const auto [p, q] = real_line_points(x);
        const LineTriviality lt = line_triviality(m, p, q);
        trivial += lt.trivial ? 1 : 0;
        symmetric += lt.symmetric_agrees ? 1 : 0;
        if (!lt.trivial) continue;
        const CMatrix fiber = fiber_basis(m, p, q);
        fiber_ok += fiber.cols() == expected_fiber ? 1 : 0;
        if (from_adhm)
            worst_projector = std::max(worst_projector, projector_distance(fiber, kernel_frame(d, x).v));
    }

    const double scale = from_adhm ? std::max(1.0, d.norm()) : std::max(1.0, m.norm());
    const bool ok = residual <= 1e-12 * scale && trivial == a.lines && symmetric == a.lines &&
                    fiber_ok == a.lines && worst_projector <= 1e-10;
    json report{{"schema", io::kSchemaVersion},
                {"dims", {m.dim_u, m.dim_v, m.dim_w}},
                {"monad_residual", residual},
                {"lines", a.lines},
                {"trivial_lines", trivial},
                {"symmetric_verdicts", symmetric},
                {"fiber_dimension_ok", fiber_ok}};
    if (from_adhm) report["max_projector_distance"] = worst_projector;
    if (!s.output.empty()) io::write_file(s.output, io::monad_to_json(m).dump(2) + "\n");
    std::ostringstream text;
    text << "monad_residual: " << fmt(residual) << "\n"
         << "trivial lines: " << trivial << "/" << a.lines << "\n"
         << "fiber dimension " << expected_fiber << " on " << fiber_ok << "/" << a.lines << " lines\n";
    if (from_adhm) text << "max projector distance to ker lambda: " << fmt(worst_projector) << "\n";
    emit(s, out, report, text.str());
    return ok ? kSuccess : kVerdictInvalid;
}

// ---------------------------------------------------------------- catalog

struct CatalogArgs {
    std::string center = "0,0,0,0";
    double scale = 1.0;
};

int run_catalog(const Shared& s, const CatalogArgs& a, std::ostream& out)
{
    AdhmData d;
    try {
        d = bpst_data(parse_point(a.center), a.scale);
    } catch (const InvalidInput& e) {
        throw UsageError(e.what());
    }
    const std::string text = io::adhm_to_json(d).dump(2) + "\n";
    if (!s.output.empty())
        io::write_file(s.output, text);
    else
        out << text;
    return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"ADHM instanton construction and checks"};
    app.set_version_flag("--version", std::string("instanton ") + kVersion);
    app.require_subcommand(1);

    Shared shared;
    SolveArgs solve_args;
    FieldArgs field_args;
    QuadratureConfig quad;
    NahmArgs nahm_args;
    MonadArgs monad_args;
    CatalogArgs catalog_args;

    auto* validate_cmd = app.add_subcommand("validate", "Check moment maps, reality and nondegeneracy");
    add_shared(validate_cmd, shared);

    auto* solve_cmd = app.add_subcommand("solve", "Minimize the moment-map residual from a seed");
    add_shared(solve_cmd, shared);
    solve_cmd->add_option("--k", solve_args.k, "Charge (without --input)");
    solve_cmd->add_option("--r", solve_args.r, "Gauge rank (without --input)");
    solve_cmd->add_option("--noise", solve_args.noise, "Gaussian perturbation added to the seed");
    solve_cmd->add_option("--tol", solve_args.opts.tol, "Residual tolerance");
    solve_cmd->add_option("--max-iters", solve_args.opts.max_iters, "Iteration limit");

    auto* field_cmd = app.add_subcommand("field", "Energy and charge densities on a 2D slice (CSV)");
    field_cmd->add_option("--input", shared.input, "Input JSON file");
    field_cmd->add_option("--output,--out", shared.output, "CSV output file");
    field_cmd->add_option("--seed", shared.seed, "Seed (unused, accepted for uniformity)");
    field_cmd->add_flag("--json", shared.json, "Machine-readable summary on standard output");
    field_cmd->add_option("--grid", field_args.grid, "lo:hi:step for both free coordinates");
    field_cmd->add_option("--plane", field_args.plane, "Two fixed coordinates, e.g. x2=0,x3=0");

    auto* charge_cmd = app.add_subcommand("charge", "Integrate topological charge and energy");
    add_shared(charge_cmd, shared);
    charge_cmd->add_option("--radial-nodes", quad.radial_nodes, "Gauss-Legendre radial nodes");
    charge_cmd->add_option("--sphere-samples", quad.sphere_samples, "Points on S^3");
    charge_cmd->add_option("--radial-scale", quad.radial_scale, "Radial map scale (default from data)");

    auto* nahm_cmd = app.add_subcommand("nahm", "Integrate Nahm's equations and measure spectral drift");
    add_shared(nahm_cmd, shared);
    nahm_cmd->add_option("--n", nahm_args.n, "Matrix size");
    nahm_cmd->add_flag("--pole-test", nahm_args.pole_test, "Check against the exact pole solution");
    nahm_cmd->add_option("--s-end", nahm_args.s_end, "End of the flow interval (random data)");
    nahm_cmd->add_option("--step", nahm_args.h, "RK4 step");
    nahm_cmd->add_option("--directions", nahm_args.directions, "Random complex structures to test");
    nahm_cmd->add_option("--tolerance", nahm_args.tolerance, "Pass threshold for drift and deviation");

    auto* monad_cmd = app.add_subcommand("monad", "Build or check a monad and its real-line fibers");
    add_shared(monad_cmd, shared);
    monad_cmd->add_option("--lines", monad_args.lines, "Random real lines to check");

    auto* catalog_cmd = app.add_subcommand("catalog", "Emit a BPST fixture");
    add_shared(catalog_cmd, shared);
    catalog_cmd->add_option("--center", catalog_args.center, "x0,x1,x2,x3");
    catalog_cmd->add_option("--scale", catalog_args.scale, "Instanton scale");

    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::CallForVersion&) {
        out << app.version() << "\n";
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kUsageError;
    }

    try {
        if (validate_cmd->parsed()) return run_validate(shared, out);
        if (solve_cmd->parsed()) return run_solve(shared, solve_args, out);
        if (field_cmd->parsed()) return run_field(shared, field_args, out);
        if (charge_cmd->parsed()) return run_charge(shared, quad, out);
        if (nahm_cmd->parsed()) return run_nahm(shared, nahm_args, out);
        if (monad_cmd->parsed()) return run_monad(shared, monad_args, out);
        if (catalog_cmd->parsed()) return run_catalog(shared, catalog_args, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kUsageError;
    } catch (const InvalidInput& e) {
        err << "error: " << e.what() << "\n";
        return kVerdictInvalid;
    } catch (const Error& e) {
        err << "numerical failure: " << e.what() << "\n";
        return kNumericalFailure;
    }
    err << "error: no command given\n";
    return kUsageError;
}

}  // namespace instanton::cli
