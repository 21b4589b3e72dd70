#pragma once

#include "instanton/types.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace instanton {

struct NahmState {
    double s = 0.0;
    std::array<CMatrix, 3> t;  // anti-hermitian n x n

    double norm() const;
};

struct Trajectory {
    std::vector<NahmState> states;
    double step = 0.0;
    double max_correction = 0.0;  // largest per-step anti-hermitian projection applied
};

/// Raised when the state norm exceeds the blow-up threshold during integration.
class PoleError : public Error {
public:
    PoleError(const std::string& what, double last_good_s) : Error(what), last_good_s_(last_good_s) {}
    double last_good_s() const noexcept { return last_good_s_; }

private:
    double last_good_s_;
};

inline constexpr double kPoleThreshold = 1e12;

/// dT_i/ds = -[T_j, T_k] for (i, j, k) cyclic.
std::array<CMatrix, 3> nahm_rhs(const NahmState& state);

/// Classical RK4 with uniform step (h shrunk so it divides the interval),
/// re-projecting onto anti-hermitian matrices after every step.
Trajectory integrate(const NahmState& initial, double s_end, double h);

/// The SO(3) rotation taking `direction` to the first axis by the smallest angle.
Eigen::Matrix3d minimal_rotation_to_axis(const Eigen::Vector3d& direction);

/// Eigenvalues of T2' + i T3' where T' is the triple rotated by
/// minimal_rotation_to_axis(direction).
CVector rotated_spectrum(const NahmState& state, const Eigen::Vector3d& direction);

/// Eigenvalues closer than this (times max(1, |state|)) are treated as one
/// cluster. Computed eigenvalues of a defective cluster of size m scatter by
/// about (eps |A|)^(1/m), so only the cluster mean is meaningful.
inline constexpr double kClusterTol = 1e-6;

/// Replaces every eigenvalue by the mean of its single-linkage cluster.
CVector merge_clusters(const CVector& eigenvalues, double tol);

/// Largest displacement of the spectrum of T2' + i T3' along the trajectory,
/// against the first state. Eigenvalues are merged with merge_clusters, then
/// matched greedily by nearest neighbor (ties broken lexicographically).
double spectral_drift(const Trajectory& traj, const Eigen::Vector3d& direction);

/// Greedy nearest-neighbor matching distance between two spectra of equal size.
double matched_spectral_distance(const CVector& a, const CVector& b);

/// e_i = -i sigma_i / 2, satisfying [e_j, e_k] = e_i.
std::array<CMatrix, 3> su2_generators();

/// T_i(s) = e_i / (s - s0); an exact solution with a pole at s0.
NahmState pole_solution(double s, double s0);

/// Random anti-hermitian triple with standard complex Gaussian entries times spread.
NahmState random_nahm_state(std::uint64_t seed, int n, double spread = 1.0);

}  // namespace instanton
