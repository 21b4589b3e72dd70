#pragma once

#include "instanton/field_eval.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace instanton {

/// Normalization: with F anti-hermitian,
///   energy_density = -(1/8 pi^2) sum_{mu<nu} tr(F_{mu nu}^2)
///   charge_density = (1/4 pi^2) [tr(F01 F23) + tr(F02 F31) + tr(F03 F12)]
/// so that the BPST instanton integrates to charge +1 and both densities agree
/// pointwise for anti-self-dual fields.
struct DensitySample {
    Point4 point;
    double energy_density = 0.0;
    double charge_density = 0.0;
};

DensitySample densities(const AdhmData& data, const Point4& x);
DensitySample densities(const CurvatureSample& sample);

struct QuadratureConfig {
    int radial_nodes = 128;
    double radial_scale = -1.0;      // <= 0 selects 1 + mean |alpha entries|
    int sphere_samples = 4096;
    std::uint64_t seed = 0;
    std::optional<Point4> origin;    // default: centroid of the instanton positions

    void validate() const;
};

double default_radial_scale(const AdhmData& data);

struct IntegrationResult {
    double total_energy = 0.0;       // integral of energy_density, ~ k
    double total_charge = 0.0;       // ~ k
    double raw_energy = 0.0;         // integral of |F|^2 = 8 pi^2 total_energy
    double error_estimate = 0.0;     // half the spread between the two angular sub-rules
    std::size_t nodes = 0;
    double radial_scale = 0.0;
    Point4 origin;
};

/// Spherical factorization around `origin`: radial Gauss-Legendre nodes under
/// r = scale t / (1 - t), times the weighted mean over sphere_points, times the
/// area 2 pi^2.
IntegrationResult integrate(const AdhmData& data, const QuadratureConfig& cfg = {});

/// Gauss-Legendre nodes and weights on [0, 1].
void gauss_legendre_unit(int n, std::vector<double>& nodes, std::vector<double>& weights);

struct SpherePoint {
    Eigen::Vector4d x;
    double weight = 1.0;  // weights average to 1 over the set
    int half = 0;         // which of two interleaved sub-rules the point belongs to
};

/// Nodes per Hopf angle for a requested total: the even integer nearest cbrt(count).
int sphere_axis_nodes(int count);

/// Product rule on S^3 in Hopf coordinates with sphere_axis_nodes(count)^3
/// points; the weighted mean approximates the uniform average. The seed
/// offsets the periodic grids. Points with half = 0 and half = 1 each form a
/// coarser rule on their own, used for the error estimate.
std::vector<SpherePoint> sphere_points(int count, std::uint64_t seed);

/// Sum by recursive halving; order-fixed so results are reproducible.
double pairwise_sum(const double* values, std::size_t n);

}  // namespace instanton
