#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rfcal/acquisition.hpp"

namespace rfcal {

/// Study of root-finding versus standard acquisitions at theta* = 0 on the
/// rootless quadratic theta^2 + eps over [-1, 1].
struct RootlessConfig {
    double eps = 0.1;
    std::vector<int> design_sizes{3, 5, 7, 9, 11, 13, 15, 17, 19, 21};
    int seeds = 100;
    std::uint64_t seed = 0;
    int reps_per_point = 10;
    double noise_sd = 0.01;
    double kappa = 1.0;
    SurrogateMode surrogate = SurrogateMode::Stochastic;
    /// Compare against the small-eps limit forms (2 PI - 1 and
    /// 2 EI - 2 sigma phi(0)). Defaults to eps < 1.
    std::optional<bool> small_regime;

    bool use_small_regime() const { return small_regime.value_or(eps < 1.0); }
};

struct RootlessCase {
    int design_size = 0;
    int seed_index = 0;
    double lcb_diff = 0.0;
    double pi_diff = 0.0;
    double ei_diff = 0.0;
    /// Fitted predictive mean positive on a 201-point grid over [-1, 1].
    bool mean_positive = false;
    Posterior at_optimum;
};

struct RootlessSummary {
    int design_size = 0;
    double lcb_diff = 0.0;
    double pi_diff = 0.0;
    double ei_diff = 0.0;
    int positive_mean_seeds = 0;
};

struct RootlessResult {
    std::vector<RootlessCase> cases;       // sorted by (design_size order, seed_index)
    std::vector<RootlessSummary> summary;  // one per design size, averaged over seeds
};

/// Evaluates a single (design size, seed) case.
RootlessCase rootless_case(const RootlessConfig& config, int design_size, int seed_index);

RootlessResult rootless_study(const RootlessConfig& config);

}  // namespace rfcal
