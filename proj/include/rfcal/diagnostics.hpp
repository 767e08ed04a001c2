#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>

#include "rfcal/acquisition.hpp"
#include "rfcal/core.hpp"
#include "rfcal/simulators.hpp"

namespace rfcal {

/// Mean over samples of the within-sample variance of residual components
/// (1/m_y normalizer).
double spatial_variability(std::span<const ResidualSample> samples);

/// Unbiased sample variance of aggregate_signed across samples.
double aggregate_variance(std::span<const ResidualSample> samples);

/// Sample version of mean|R|^2/m_y >= mean S^2 >= (mean S)^2.
struct GapReport {
    double spatial_variability = 0.0;
    std::optional<double> aggregate_variance;  // needs >= 2 samples
    double mean_squared_norm = 0.0;
    double mean_squared_aggregate = 0.0;
    double squared_mean_aggregate = 0.0;
    bool ordered = true;
};

/// Computes the chain and flags (without throwing) any violation beyond
/// `slack`.
GapReport chain_check(std::span<const ResidualSample> samples, double slack = 1e-10);

/// Draws `reps` replications of `model` at theta and reports the chain.
GapReport diagnose_point(const SimulationModel& model, const DesignPoint& theta, int reps, const RngStream& rng);

/// The six acquisitions in a fixed order: LCB, PI, EI, RF-LCB, RF-PI, RF-EI.
std::array<AcqKind, 6> all_acquisitions(double kappa = 1.0);

struct GradientReport {
    int cases = 0;
    std::array<double, 6> max_deviation{};  // order of all_acquisitions()

    double worst() const;
};

/// Compares analytical acquisition gradients with central differences on
/// random designs (3-8 points, 1-3 dimensions) and random queries with
/// posterior std >= 0.05 and |mean| >= 1e-3; draws whose kriging weights
/// exceed 1e3 in magnitude are redrawn. `corrupt` perturbs the
/// analytical gradients, for negative controls.
GradientReport validate_gradients(int cases, std::uint64_t seed, double step = 1e-5, bool corrupt = false);

}  // namespace rfcal
