#include "instanton/observables.hpp"

#include <cmath>
#include <random>

namespace instanton {

DensitySample densities(const CurvatureSample& c)
{
    double sum_sq = 0.0;
    for (const auto& f : c.f) sum_sq += (f * f).trace().real();
    const cplx pairing = (c.f[0] * c.f[5]).trace()             // F01 F23
                         - (c.f[1] * c.f[4]).trace()           // F02 F31 = -F02 F13
                         + (c.f[2] * c.f[3]).trace();          // F03 F12
    DensitySample out;
    out.point = c.point;
    out.energy_density = -sum_sq / (8.0 * kPi * kPi);
    out.charge_density = pairing.real() / (4.0 * kPi * kPi);
    return out;
}

DensitySample densities(const AdhmData& data, const Point4& x) { return densities(curvature(data, x)); }

void QuadratureConfig::validate() const
{
    if (radial_nodes < 1) throw InvalidInput("radial_nodes must be positive");
    if (sphere_samples < 4) throw InvalidInput("sphere_samples must be at least 4");
    if (origin && !origin->finite()) throw InvalidInput("quadrature origin must be finite");
}

double default_radial_scale(const AdhmData& data)
{
    data.validate_shape();
    const double n = 2.0 * data.k * data.k;
    return 1.0 + (data.alpha1.cwiseAbs().sum() + data.alpha2.cwiseAbs().sum()) / n;
}

void gauss_legendre_unit(int n, std::vector<double>& nodes, std::vector<double>& weights)
{
    nodes.assign(static_cast<std::size_t>(n), 0.0);
    weights.assign(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0;
            double p1 = x;
            for (int j = 2; j <= n; ++j) {
                const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            // p1 = P_n(x), p0 = P_{n-1}(x)
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        // Map [-1, 1] to [0, 1], ascending.
        nodes[static_cast<std::size_t>(i)] = 0.5 * (1.0 - x);
        nodes[static_cast<std::size_t>(n - 1 - i)] = 0.5 * (1.0 + x);
        weights[static_cast<std::size_t>(i)] = 0.5 * w;
        weights[static_cast<std::size_t>(n - 1 - i)] = 0.5 * w;
    }
}

int sphere_axis_nodes(int count)
{
    const int n = 2 * static_cast<int>(std::lround(std::cbrt(static_cast<double>(count)) / 2.0));
    return std::max(n, 2);
}

std::vector<SpherePoint> sphere_points(int count, std::uint64_t seed)
{
    // Hopf coordinates (cos eta cos xi1, cos eta sin xi1, sin eta cos xi2, sin eta sin xi2):
    // Gauss-Legendre in eta on [0, pi/2] with the measure factor sin(2 eta),
    // periodic trapezoid in xi1 and xi2 with a seeded phase offset.
    const int n = sphere_axis_nodes(count);
    std::vector<double> gt;
    std::vector<double> gw;
    gauss_legendre_unit(n, gt, gw);

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double off1 = unif(rng);
    const double off2 = unif(rng);

    std::vector<SpherePoint> pts;
    pts.reserve(static_cast<std::size_t>(n) * n * n);
    const double per_cell = static_cast<double>(n) * n * n;
    for (int a = 0; a < n; ++a) {
        const double eta = 0.5 * kPi * gt[static_cast<std::size_t>(a)];
        const double w = 0.5 * kPi * gw[static_cast<std::size_t>(a)] * std::sin(2.0 * eta) * per_cell /
                         (static_cast<double>(n) * n);
        for (int b = 0; b < n; ++b) {
            const double xi1 = 2.0 * kPi * (b + off1) / n;
            for (int c = 0; c < n; ++c) {
                const double xi2 = 2.0 * kPi * (c + off2) / n;
                pts.push_back({{std::cos(eta) * std::cos(xi1), std::cos(eta) * std::sin(xi1),
                                std::sin(eta) * std::cos(xi2), std::sin(eta) * std::sin(xi2)},
                               w,
                               b % 2});
            }
        }
    }
    return pts;
}

double pairwise_sum(const double* v, std::size_t n)
{
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += v[i];
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(v, half) + pairwise_sum(v + half, n - half);
}

IntegrationResult integrate(const AdhmData& data, const QuadratureConfig& cfg)
{
    data.validate_shape();
    cfg.validate();
    const double scale = cfg.radial_scale > 0.0 ? cfg.radial_scale : default_radial_scale(data);
    const Point4 origin = cfg.origin.value_or(data_centroid(data));

    std::vector<double> t;
    std::vector<double> wt;
    gauss_legendre_unit(cfg.radial_nodes, t, wt);
    const auto dirs = sphere_points(cfg.sphere_samples, cfg.seed);

    // Per radial node: angular means over the two halves (even / odd xi1 index).
    std::vector<double> energy_radial[2];
    std::vector<double> charge_radial[2];
    for (int h = 0; h < 2; ++h) {
        energy_radial[h].assign(t.size(), 0.0);
        charge_radial[h].assign(t.size(), 0.0);
    }
    std::vector<double> e_buf[2];
    std::vector<double> c_buf[2];

    const Eigen::Vector4d o = origin.to_array();
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double r = scale * t[i] / (1.0 - t[i]);
        for (int h = 0; h < 2; ++h) {
            e_buf[h].clear();
            c_buf[h].clear();
        }
        for (const SpherePoint& sp : dirs) {
            const DensitySample ds = densities(data, Point4::from_array(o + r * sp.x));
            e_buf[sp.half].push_back(sp.weight * ds.energy_density);
            c_buf[sp.half].push_back(sp.weight * ds.charge_density);
        }
        for (int h = 0; h < 2; ++h) {
            const double count = static_cast<double>(e_buf[h].size());
            energy_radial[h][i] = pairwise_sum(e_buf[h].data(), e_buf[h].size()) / count;
            charge_radial[h][i] = pairwise_sum(c_buf[h].data(), c_buf[h].size()) / count;
        }
    }

    // Jacobian: 2 pi^2 r^3 dr, dr = scale / (1 - t)^2 dt.
    auto radial = [&](const std::vector<double>& mean) {
        std::vector<double> terms(t.size());
        for (std::size_t i = 0; i < t.size(); ++i) {
            const double one_minus = 1.0 - t[i];
            const double r = scale * t[i] / one_minus;
            terms[i] = wt[i] * 2.0 * kPi * kPi * r * r * r * scale / (one_minus * one_minus) * mean[i];
        }
        return pairwise_sum(terms.data(), terms.size());
    };

    const double e0 = radial(energy_radial[0]);
    const double e1 = radial(energy_radial[1]);
    const double q0 = radial(charge_radial[0]);
    const double q1 = radial(charge_radial[1]);

    IntegrationResult res;
    res.total_energy = 0.5 * (e0 + e1);
    res.total_charge = 0.5 * (q0 + q1);
    res.raw_energy = 8.0 * kPi * kPi * res.total_energy;
    res.error_estimate = std::max(0.5 * std::abs(q0 - q1), 1e-12 * std::max(1.0, std::abs(res.total_charge)));
    res.nodes = t.size() * dirs.size();
    res.radial_scale = scale;
    res.origin = origin;
    return res;
}

}  // namespace instanton
