#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace instanton {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr double kPi = 3.14159265358979323846;

// Error hierarchy. Everything thrown by the library derives from Error.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidInput : public Error {
public:
    using Error::Error;
};

// lambda_x (or a derived factorization) is not surjective at `where`.
class DegenerateError : public Error {
public:
    DegenerateError(const std::string& what, double min_sigma)
        : Error(what), min_sigma_(min_sigma) {}
    double min_sigma() const noexcept { return min_sigma_; }

private:
    double min_sigma_;
};

class AlignmentError : public Error {
public:
    using Error::Error;
};

/// A point of R^4 with the complex structure z1 = x0 + i x1, z2 = x2 + i x3.
struct Point4 {
    double x0 = 0.0;
    double x1 = 0.0;
    double x2 = 0.0;
    double x3 = 0.0;

    static Point4 from_array(const Eigen::Vector4d& v) { return {v[0], v[1], v[2], v[3]}; }
    Eigen::Vector4d to_array() const { return {x0, x1, x2, x3}; }

    double operator[](int mu) const
    {
        switch (mu) {
        case 0: return x0;
        case 1: return x1;
        case 2: return x2;
        default: return x3;
        }
    }

    cplx z1() const { return {x0, x1}; }
    cplx z2() const { return {x2, x3}; }
    double norm_sq() const { return x0 * x0 + x1 * x1 + x2 * x2 + x3 * x3; }
    bool finite() const;

    Point4 shifted(int mu, double h) const
    {
        Eigen::Vector4d v = to_array();
        v[mu] += h;
        return from_array(v);
    }

    friend Point4 operator+(const Point4& a, const Point4& b)
    {
        return {a.x0 + b.x0, a.x1 + b.x1, a.x2 + b.x2, a.x3 + b.x3};
    }
    friend Point4 operator-(const Point4& a, const Point4& b)
    {
        return {a.x0 - b.x0, a.x1 - b.x1, a.x2 - b.x2, a.x3 - b.x3};
    }
    friend bool operator==(const Point4&, const Point4&) = default;
};

std::string to_string(const Point4& x);

// Small helpers shared across modules.
inline CMatrix commutator(const CMatrix& a, const CMatrix& b) { return a * b - b * a; }

inline CMatrix hermitian_part(const CMatrix& m) { return (m + m.adjoint()) * 0.5; }

inline CMatrix antihermitian_part(const CMatrix& m) { return (m - m.adjoint()) * 0.5; }

bool all_finite(const CMatrix& m);

/// Smallest singular value; zero for matrices with a zero dimension.
double min_singular_value(const CMatrix& m);

/// Frobenius distance between orthogonal projectors onto span(a) and span(b),
/// both given with orthonormal columns.
double projector_distance(const CMatrix& a, const CMatrix& b);

}  // namespace instanton
