#pragma once

#include <optional>
#include <span>

#include "rfcal/core.hpp"
#include "rfcal/metamodel.hpp"

namespace rfcal {

/// Hyperrectangle spanned by design pair (a, b), a < b, with its score.
struct Subregion {
    Vector lo;
    Vector hi;
    double volume = 0.0;
    std::size_t a = 0;
    std::size_t b = 0;
};

/// Product over axes of max(|theta_a - theta_b|, floor).
double pair_extent(const DesignPoint& a, const DesignPoint& b, double theta_floor);

/// Sign-guided reduction on observed signed values: among pairs with
/// f_a * f_b < 0, the one minimizing extent * |f_a - f_b|. Ties keep the
/// lexicographically first pair. Empty if no pair changes sign.
std::optional<Subregion> rss_deterministic(std::span<const DesignPoint> design, std::span<const double> signed_values,
                                           double theta_floor = 1e-8);

/// Probability that two independent normals N(mu_a, s_a^2), N(mu_b, s_b^2)
/// have opposite signs. Standard deviations are floored at kStdFloor.
double sign_change_prob(const Posterior& a, const Posterior& b);

/// Probabilistic reduction: among pairs with sign_change_prob >= alpha, the
/// one minimizing extent * (1 - P).
std::optional<Subregion> rss_stochastic(std::span<const DesignPoint> design, std::span<const Posterior> posteriors,
                                        double alpha = 0.95, double theta_floor = 1e-8);

}  // namespace rfcal
