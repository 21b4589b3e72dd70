#pragma once

#include "instanton/adhm_core.hpp"
#include "instanton/moment_solver.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace testing_support {

using namespace instanton;

/// Uniform points in the box [-half, half]^4, deterministic in seed.
inline std::vector<Point4> random_points(std::uint64_t seed, int count, double half)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-half, half);
    std::vector<Point4> pts;
    pts.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        const double a = u(rng), b = u(rng), c = u(rng), d = u(rng);
        pts.push_back({a, b, c, d});
    }
    return pts;
}

/// The k = 2, r = 2 dataset obtained by solving from random_adhm_data(7, 2, 2, 1).
inline const AdhmData& solved_k2()
{
    static const AdhmData data = [] {
        const SolveResult res = solve(random_adhm_data(7, 2, 2, 1.0));
        return res.data;
    }();
    return data;
}

/// BPST at the origin with unit scale plus Gaussian noise of the given spread.
inline AdhmData noisy_bpst(std::uint64_t seed, double noise)
{
    return bpst_data({}, 1.0) + random_adhm_data(seed, 1, 2, noise);
}

inline double rel_diff(double a, double b)
{
    return std::abs(a - b) / std::max({1e-300, std::abs(a), std::abs(b)});
}

}  // namespace testing_support
