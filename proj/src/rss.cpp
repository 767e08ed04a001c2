#include "rfcal/rss.hpp"

#include <algorithm>
#include <cmath>

#include "rfcal/acquisition.hpp"

namespace rfcal {

namespace {

Subregion make_subregion(const DesignPoint& pa, const DesignPoint& pb, std::size_t a, std::size_t b, double volume)
{
    return {pa.cwiseMin(pb), pa.cwiseMax(pb), volume, a, b};
}

template <typename Score>
std::optional<Subregion> smallest_pair(std::span<const DesignPoint> design, double theta_floor, Score score)
{
    std::optional<Subregion> best;
    for (std::size_t a = 0; a < design.size(); ++a) {
        for (std::size_t b = a + 1; b < design.size(); ++b) {
            const std::optional<double> weight = score(a, b);
            if (!weight) continue;
            const double volume = pair_extent(design[a], design[b], theta_floor) * *weight;
            if (!best || volume < best->volume) best = make_subregion(design[a], design[b], a, b, volume);
        }
    }
    return best;
}

}  // namespace

double pair_extent(const DesignPoint& a, const DesignPoint& b, double theta_floor)
{
    if (a.size() != b.size()) throw DimensionError("rss: points differ in dimension");
    double extent = 1.0;
    for (Eigen::Index l = 0; l < a.size(); ++l) extent *= std::max(std::abs(a[l] - b[l]), theta_floor);
    return extent;
}

std::optional<Subregion> rss_deterministic(std::span<const DesignPoint> design, std::span<const double> signed_values,
                                           double theta_floor)
{
    if (design.size() != signed_values.size()) throw DimensionError("rss_deterministic: size mismatch");
    return smallest_pair(design, theta_floor, [&](std::size_t a, std::size_t b) -> std::optional<double> {
        if (!(signed_values[a] * signed_values[b] < 0.0)) return std::nullopt;
        return std::abs(signed_values[a] - signed_values[b]);
    });
}

double sign_change_prob(const Posterior& a, const Posterior& b)
{
    const double pa = normal_cdf(-a.mean / std::max(a.std(), kStdFloor));
    const double pb = normal_cdf(-b.mean / std::max(b.std(), kStdFloor));
    return std::clamp(pa + pb - 2.0 * pa * pb, 0.0, 1.0);
}

std::optional<Subregion> rss_stochastic(std::span<const DesignPoint> design, std::span<const Posterior> posteriors,
                                        double alpha, double theta_floor)
{
    if (design.size() != posteriors.size()) throw DimensionError("rss_stochastic: size mismatch");
    return smallest_pair(design, theta_floor, [&](std::size_t a, std::size_t b) -> std::optional<double> {
        const double p = sign_change_prob(posteriors[a], posteriors[b]);
        if (!(p >= alpha)) return std::nullopt;
        return 1.0 - p;
    });
}

}  // namespace rfcal
