#include "doctest.h"

#include "instanton/cli.hpp"
#include "instanton/json_io.hpp"

#include <fstream>
#include <sstream>

using namespace instanton;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome run_cli(std::vector<std::string> args)
{
    args.insert(args.begin(), "instanton");
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string fixture(const std::string& name) { return std::string(FIXTURE_DIR) + "/" + name; }
std::string scratch(const std::string& name) { return std::string(SCRATCH_DIR) + "/" + name; }

std::string slurp(const std::string& path)
{
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("validate exit codes")
{
    CHECK(run_cli({"validate", "--input", fixture("bpst.json")}).code == 0);
    const Outcome bad = run_cli({"validate", "--input", fixture("perturbed.json"), "--json"});
    CHECK(bad.code == 1);
    CHECK(io::parse(bad.out, "stdout")["verdict"] == "constraint_violation");
    CHECK(run_cli({"validate", "--input", fixture("truncated.json")}).code == 2);
    CHECK(run_cli({"validate"}).code == 2);
    CHECK(run_cli({"validate", "--input", fixture("bpst.json"), "--bogus"}).code == 2);
    CHECK(run_cli({}).code == 2);
    CHECK(run_cli({"frobnicate"}).code == 2);
}

TEST_CASE("help and version")
{
    const Outcome v = run_cli({"--version"});
    CHECK(v.code == 0);
    CHECK(v.out.find(cli::kVersion) != std::string::npos);
    CHECK(run_cli({"--help"}).code == 0);
}

TEST_CASE("catalog emits valid data")
{
    const std::string path = scratch("catalog.json");
    CHECK(run_cli({"catalog", "--center", "1,2,3,4", "--scale", "2", "--output", path}).code == 0);
    CHECK(run_cli({"validate", "--input", path}).code == 0);
    CHECK(run_cli({"catalog", "--center", "1,2,3"}).code == 2);
    CHECK(run_cli({"catalog", "--scale", "0"}).code == 2);
}

TEST_CASE("solve writes data that validates")
{
    const std::string path = scratch("solved.json");
    const Outcome o = run_cli({"solve", "--k", "1", "--r", "2", "--seed", "3", "--noise", "0.1", "--output", path, "--json"});
    CHECK(o.code == 0);
    const auto report = io::parse(o.out, "stdout");
    CHECK(report["schema"] == 1);
    CHECK(report["converged"] == true);
    CHECK(report["final_residual"].get<double>() <= 1e-12);
    CHECK(run_cli({"validate", "--input", path}).code == 0);
    CHECK(run_cli({"solve", "--max-iters", "2", "--seed", "3"}).code == 1);
    CHECK(run_cli({"solve", "--tol", "-1"}).code == 2);
}

TEST_CASE("field grid")
{
    const std::string a = scratch("field_a.csv"), b = scratch("field_b.csv");
    const std::vector<std::string> args{"field", "--input", fixture("bpst.json"), "--plane", "x2=0,x3=0",
                                        "--grid", "-3:3:0.5", "--out"};
    auto with = [&](const std::string& path) {
        auto v = args;
        v.push_back(path);
        return v;
    };
    REQUIRE(run_cli(with(a)).code == 0);
    REQUIRE(run_cli(with(b)).code == 0);
    const std::string csv = slurp(a);
    CHECK(csv == slurp(b));

    std::istringstream rows(csv);
    std::string line;
    std::getline(rows, line);
    CHECK(line == "x0,x1,x2,x3,energy,charge");
    int count = 0;
    double peak = -1.0;
    double peak_r = -1.0;
    while (std::getline(rows, line)) {
        ++count;
        std::istringstream cells(line);
        std::string cell;
        std::vector<double> v;
        while (std::getline(cells, cell, ',')) v.push_back(std::stod(cell));
        REQUIRE(v.size() == 6);
        if (v[4] > peak) {
            peak = v[4];
            peak_r = std::hypot(v[0], v[1]);
        }
    }
    CHECK(count == 169);
    CHECK(peak_r == 0.0);

    CHECK(run_cli({"field", "--input", fixture("bpst.json"), "--grid", "3:-3:0.5"}).code == 2);
    CHECK(run_cli({"field", "--input", fixture("bpst.json"), "--plane", "x2=0"}).code == 2);
}

TEST_CASE("field on degenerate data names the point")
{
    const std::string path = scratch("collapsed.json");
    auto j = io::parse(slurp(fixture("bpst.json")), "fixture");
    j["p"] = io::matrix_to_json(CMatrix::Zero(1, 2));
    j["q"] = io::matrix_to_json(CMatrix::Zero(2, 1));
    io::write_file(path, j.dump());
    const Outcome o = run_cli({"field", "--input", path, "--grid", "-1:1:1", "--out", scratch("collapsed.csv")});
    CHECK(o.code == 3);
    CHECK(o.err.find("(0, 0, 0, 0)") != std::string::npos);
}

TEST_CASE("charge on the BPST fixture")
{
    const Outcome o = run_cli({"charge", "--input", fixture("bpst.json"), "--json"});
    CHECK(o.code == 0);
    const auto report = io::parse(o.out, "stdout");
    CHECK(std::abs(report["total_charge"].get<double>() - 1.0) <= 1e-3);
    CHECK(report["k"] == 1);
    CHECK(run_cli({"charge", "--input", fixture("bpst.json"), "--sphere-samples", "0"}).code == 2);
}

TEST_CASE("nahm reports")
{
    const Outcome pole = run_cli({"nahm", "--n", "2", "--pole-test", "--json"});
    CHECK(pole.code == 0);
    const auto report = io::parse(pole.out, "stdout");
    CHECK(report["max_spectral_drift"].get<double>() <= 1e-8);
    CHECK(report["analytic_deviation"].get<double>() <= 1e-8);

    const Outcome random = run_cli({"nahm", "--n", "3", "--seed", "5", "--json"});
    CHECK(random.code == 0);
    CHECK(run_cli({"nahm", "--n", "3", "--seed", "5", "--json"}).out == random.out);
    CHECK(run_cli({"nahm", "--pole-test"}).code == 2);
    CHECK(run_cli({"nahm", "--step", "0"}).code == 2);
}

TEST_CASE("monad check from ADHM and monad input")
{
    const std::string path = scratch("monad.json");
    const Outcome o = run_cli({"monad", "--input", fixture("bpst.json"), "--output", path, "--json"});
    CHECK(o.code == 0);
    const auto report = io::parse(o.out, "stdout");
    CHECK(report["trivial_lines"] == 50);
    CHECK(report["max_projector_distance"].get<double>() <= 1e-10);
    CHECK(run_cli({"monad", "--input", path}).code == 0);
}

TEST_CASE("identical invocations are byte-identical")
{
    const std::vector<std::string> args{"validate", "--input", fixture("perturbed.json"), "--seed", "4", "--json"};
    CHECK(run_cli(args).out == run_cli(args).out);
    const std::vector<std::string> solve{"solve", "--k", "2", "--r", "2", "--seed", "1", "--noise", "1", "--json"};
    CHECK(run_cli(solve).out == run_cli(solve).out);
}
