#pragma once

#include "instanton/adhm_core.hpp"
#include "instanton/monad_tools.hpp"
#include "instanton/moment_solver.hpp"
#include "instanton/nahm_flow.hpp"
#include "instanton/observables.hpp"

#include <json.hpp>

#include <string>

namespace instanton::io {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

/// Complex numbers are [re, im]; matrices are row-major nested arrays.
json matrix_to_json(const CMatrix& m);

/// Throws InvalidInput naming `field` on malformed input.
CMatrix matrix_from_json(const json& j, const std::string& field);

/// {"k", "r", "alpha1", "alpha2", "p", "q"}
json adhm_to_json(const AdhmData& d);
AdhmData adhm_from_json(const json& j);

/// {"dims": [u, v, w], "a": [4 matrices], "b": [4 matrices]}
json monad_to_json(const MonadData& m);
MonadData monad_from_json(const json& j);

json point_to_json(const Point4& x);

json report_to_json(const ValidationReport& rep);
json report_to_json(const SolveReport& rep);
json report_to_json(const IntegrationResult& res, int k);

/// {"s": [...], "spectra": [[[re, im], ...], ...]} for the given direction.
json trajectory_to_json(const Trajectory& traj, const Eigen::Vector3d& direction);

/// Parse text, mapping parser failures to InvalidInput.
json parse(const std::string& text, const std::string& source);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

}  // namespace instanton::io
