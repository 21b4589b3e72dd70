#include "instanton/types.hpp"

#include <cmath>
#include <sstream>

namespace instanton {

bool Point4::finite() const
{
    return std::isfinite(x0) && std::isfinite(x1) && std::isfinite(x2) && std::isfinite(x3);
}

std::string to_string(const Point4& x)
{
    std::ostringstream os;
    os.precision(17);
    os << "(" << x.x0 << ", " << x.x1 << ", " << x.x2 << ", " << x.x3 << ")";
    return os.str();
}

bool all_finite(const CMatrix& m)
{
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
    return true;
}

double min_singular_value(const CMatrix& m)
{
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<CMatrix> svd(m);
    return svd.singularValues()(svd.singularValues().size() - 1);
}

double projector_distance(const CMatrix& a, const CMatrix& b)
{
    return (a * a.adjoint() - b * b.adjoint()).norm();
}

}  // namespace instanton
