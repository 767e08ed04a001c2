#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "rfcal/core.hpp"

namespace rfcal {

/// A stochastic computer model seen through its residuals against observed
/// data: draw(theta) returns one replication r_(j)(theta).
class SimulationModel {
public:
    virtual ~SimulationModel() = default;

    virtual std::string name() const = 0;
    virtual const ParameterBox& box() const = 0;
    virtual std::size_t output_dim() const = 0;
    virtual ResidualSample draw(const DesignPoint& theta, RngStream& rng) const = 0;
};

/// Builds a model for one macro replication. Problems with observed data
/// generate it from `observation_stream`.
using ModelFactory = std::function<std::unique_ptr<SimulationModel>(RngStream& observation_stream)>;

// ---------------------------------------------------------------------------
// Modified Himmelblau, theta in [-3, 3]^2, m_y = 1.

/// log2((t1^2 + t2 - 3)^2 + (t1 + t2^2 - 2)^2) - 1. Returns -infinity where
/// the log argument vanishes.
double himmelblau_signed(const DesignPoint& theta);

class HimmelblauModel : public SimulationModel {
public:
    HimmelblauModel();

    std::string name() const override { return "himmelblau2d"; }
    const ParameterBox& box() const override { return box_; }
    std::size_t output_dim() const override { return 1; }
    /// f(theta) + N(0, |f(theta)|).
    ResidualSample draw(const DesignPoint& theta, RngStream& rng) const override;

private:
    ParameterBox box_;
};

// ---------------------------------------------------------------------------
// M/M/1 queue observed through per-entity sojourn times.

struct Mm1Params {
    double service_rate = 4.0;
    double arrival_real = 6.0;
    int n_entities = 100;
    double box_lo = 2.0;
    double box_hi = 10.0;
};

struct Mm1Observation {
    std::vector<double> sojourn_times;
};

/// Single FIFO server over exactly `n_entities` entities, via the Lindley
/// recursion. Each entity consumes one interarrival and one service draw.
Mm1Observation mm1_observe(double arrival_rate, double service_rate, int n_entities, RngStream& rng);

/// obs - sim, aligned by entity index, for a fresh run at arrival rate theta.
ResidualSample mm1_residual(const DesignPoint& theta, const Mm1Observation& obs, double service_rate, RngStream& rng);

class Mm1Model : public SimulationModel {
public:
    Mm1Model(Mm1Params params, Mm1Observation observation);

    std::string name() const override { return "mm1"; }
    const ParameterBox& box() const override { return box_; }
    std::size_t output_dim() const override { return observation_.sojourn_times.size(); }
    ResidualSample draw(const DesignPoint& theta, RngStream& rng) const override;

    const Mm1Observation& observation() const { return observation_; }

private:
    Mm1Params params_;
    Mm1Observation observation_;
    ParameterBox box_;
};

ModelFactory mm1_factory(Mm1Params params = {});

// ---------------------------------------------------------------------------
// Stochastic SIR with daily cumulative recovered proportions as output.

struct SirParams {
    int population = 100;
    int initial_infected = 10;
    int max_contacts = 2;
    double recovery_prob = 0.7;
    int days = 5;
    double theta_real = 0.65;
};

/// Compartment counts after each day.
struct SirDay {
    int susceptible = 0;
    int infected = 0;
    int recovered = 0;
};

/// Each day: every infected individual contacts up to `max_contacts`
/// distinct members of the start-of-day susceptible pool (without
/// replacement), infecting each independently with probability theta; then
/// each individual infected before that day recovers with probability
/// `recovery_prob`.
std::vector<SirDay> sir_simulate(double infection_prob, const SirParams& params, RngStream& rng);

/// Cumulative recovered proportion after each day.
std::vector<double> sir_recovered_proportions(double infection_prob, const SirParams& params, RngStream& rng);

ResidualSample sir_residual(const DesignPoint& theta, const std::vector<double>& obs_trajectory,
                            const SirParams& params, RngStream& rng);

class SirModel : public SimulationModel {
public:
    SirModel(SirParams params, std::vector<double> observed);

    std::string name() const override { return "sir"; }
    const ParameterBox& box() const override { return box_; }
    std::size_t output_dim() const override { return observed_.size(); }
    ResidualSample draw(const DesignPoint& theta, RngStream& rng) const override;

    const std::vector<double>& observation() const { return observed_; }

private:
    SirParams params_;
    std::vector<double> observed_;
    ParameterBox box_;
};

ModelFactory sir_factory(SirParams params = {});

// ---------------------------------------------------------------------------
// Rootless quadratic theta^2 + eps on [-1, 1], m_y = 1.

struct RootlessParams {
    double eps = 0.1;
    double noise_sd = 0.01;
};

double quadratic_rootless(const DesignPoint& theta, double eps, double noise_sd, RngStream& rng);

class RootlessQuadraticModel : public SimulationModel {
public:
    explicit RootlessQuadraticModel(RootlessParams params);

    std::string name() const override { return "rootless"; }
    const ParameterBox& box() const override { return box_; }
    std::size_t output_dim() const override { return 1; }
    ResidualSample draw(const DesignPoint& theta, RngStream& rng) const override;

private:
    RootlessParams params_;
    ParameterBox box_;
};

ModelFactory himmelblau_factory();
ModelFactory rootless_factory(RootlessParams params = {});

}  // namespace rfcal
