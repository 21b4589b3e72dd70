#include "instanton/json_io.hpp"

#include <fstream>
#include <sstream>

namespace instanton::io {

namespace {

double number_at(const json& j, const std::string& field)
{
    if (!j.is_number()) throw InvalidInput("field '" + field + "' must contain numbers");
    return j.get<double>();
}

int int_field(const json& j, const char* name)
{
    if (!j.contains(name)) throw InvalidInput(std::string("missing field '") + name + "'");
    const json& v = j.at(name);
    if (!v.is_number_integer()) throw InvalidInput(std::string("field '") + name + "' must be an integer");
    return v.get<int>();
}

const json& required(const json& j, const char* name)
{
    if (!j.contains(name)) throw InvalidInput(std::string("missing field '") + name + "'");
    return j.at(name);
}

}  // namespace

json matrix_to_json(const CMatrix& m)
{
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
        rows.push_back(std::move(row));
    }
    return rows;
}

CMatrix matrix_from_json(const json& j, const std::string& field)
{
    if (!j.is_array()) throw InvalidInput("field '" + field + "' must be an array of rows");
    const auto rows = static_cast<Eigen::Index>(j.size());
    Eigen::Index cols = -1;
    for (const json& row : j) {
        if (!row.is_array()) throw InvalidInput("field '" + field + "' must be an array of rows");
        if (cols < 0) cols = static_cast<Eigen::Index>(row.size());
        if (static_cast<Eigen::Index>(row.size()) != cols)
            throw InvalidInput("field '" + field + "' has ragged rows");
    }
    CMatrix m(rows, std::max<Eigen::Index>(cols, 0));
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            const json& e = j[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)];
            if (!e.is_array() || e.size() != 2)
                throw InvalidInput("field '" + field + "' entries must be [re, im] pairs");
            m(i, c) = {number_at(e[0], field), number_at(e[1], field)};
        }
    }
    return m;
}

json adhm_to_json(const AdhmData& d)
{
    return json{{"k", d.k},
                {"r", d.r},
                {"alpha1", matrix_to_json(d.alpha1)},
                {"alpha2", matrix_to_json(d.alpha2)},
                {"p", matrix_to_json(d.p)},
                {"q", matrix_to_json(d.q)}};
}

AdhmData adhm_from_json(const json& j)
{
    if (!j.is_object()) throw InvalidInput("ADHM data must be a JSON object");
    AdhmData d;
    d.k = int_field(j, "k");
    d.r = int_field(j, "r");
    d.alpha1 = matrix_from_json(required(j, "alpha1"), "alpha1");
    d.alpha2 = matrix_from_json(required(j, "alpha2"), "alpha2");
    d.p = matrix_from_json(required(j, "p"), "p");
    d.q = matrix_from_json(required(j, "q"), "q");
    d.validate_shape();
    return d;
}

json monad_to_json(const MonadData& m)
{
    json a = json::array();
    json b = json::array();
    for (const auto& x : m.a) a.push_back(matrix_to_json(x));
    for (const auto& x : m.b) b.push_back(matrix_to_json(x));
    return json{{"dims", {m.dim_u, m.dim_v, m.dim_w}}, {"a", a}, {"b", b}};
}

MonadData monad_from_json(const json& j)
{
    if (!j.is_object()) throw InvalidInput("monad data must be a JSON object");
    const json& dims = required(j, "dims");
    if (!dims.is_array() || dims.size() != 3) throw InvalidInput("field 'dims' must be [u, v, w]");
    for (const json& e : dims)
        if (!e.is_number_integer()) throw InvalidInput("field 'dims' must contain integers");
    MonadData m = MonadData::zeros(dims[0].get<int>(), dims[1].get<int>(), dims[2].get<int>());
    for (const char* name : {"a", "b"}) {
        const json& arr = required(j, name);
        if (!arr.is_array() || arr.size() != 4)
            throw InvalidInput(std::string("field '") + name + "' must hold 4 matrices");
        for (std::size_t i = 0; i < 4; ++i) {
            const std::string field = std::string(name) + "[" + std::to_string(i) + "]";
            (name[0] == 'a' ? m.a[i] : m.b[i]) = matrix_from_json(arr[i], field);
        }
    }
    m.validate_shape();
    return m;
}

json point_to_json(const Point4& x) { return json::array({x.x0, x.x1, x.x2, x.x3}); }

json report_to_json(const ValidationReport& rep)
{
    return json{{"schema", kSchemaVersion},
                {"complex_residual", rep.complex_residual},
                {"real_residual", rep.real_residual},
                {"reality_defect_max", rep.reality_defect_max},
                {"min_singular_value", rep.min_singular_value},
                {"argmin_point", point_to_json(rep.argmin_point)},
                {"verdict", to_string(rep.verdict)}};
}

json report_to_json(const SolveReport& rep)
{
    return json{{"schema", kSchemaVersion},
                {"iterations", rep.iterations},
                {"final_residual", rep.final_residual},
                {"converged", rep.converged},
                {"degenerate", rep.degenerate},
                {"min_singular_value", rep.min_singular_value},
                {"trajectory_residuals", rep.trajectory_residuals}};
}

json report_to_json(const IntegrationResult& res, int k)
{
    return json{{"schema", kSchemaVersion},
                {"k", k},
                {"total_charge", res.total_charge},
                {"total_energy_8pi2", res.total_energy},
                {"raw_energy", res.raw_energy},
                {"error_estimate", res.error_estimate},
                {"nodes", res.nodes},
                {"radial_scale", res.radial_scale},
                {"origin", point_to_json(res.origin)}};
}

json trajectory_to_json(const Trajectory& traj, const Eigen::Vector3d& direction)
{
    json s = json::array();
    json spectra = json::array();
    for (const NahmState& st : traj.states) {
        s.push_back(st.s);
        const CVector ev = rotated_spectrum(st, direction);
        json row = json::array();
        for (Eigen::Index i = 0; i < ev.size(); ++i) row.push_back({ev(i).real(), ev(i).imag()});
        spectra.push_back(std::move(row));
    }
    return json{{"s", s}, {"spectra", spectra}};
}

json parse(const std::string& text, const std::string& source)
{
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw InvalidInput("malformed JSON in " + source + ": " + e.what());
    }
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInput("cannot read '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& contents)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path + "'");
    out << contents;
}

}  // namespace instanton::io
