#include "rfcal/simulators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rfcal {

namespace {

enum : std::uint64_t { kObservationKey = 0x0b5e };

void expect_dim(const DesignPoint& theta, std::size_t m, const char* who)
{
    if (static_cast<std::size_t>(theta.size()) != m) throw DimensionError(std::string(who) + ": dimension mismatch");
}

}  // namespace

// ---------------------------------------------------------------------------

double himmelblau_signed(const DesignPoint& theta)
{
    expect_dim(theta, 2, "himmelblau_signed");
    const double t1 = theta[0];
    const double t2 = theta[1];
    const double a = t1 * t1 + t2 - 3.0;
    const double b = t1 + t2 * t2 - 2.0;
    const double arg = a * a + b * b;
    if (arg <= 0.0) return -std::numeric_limits<double>::infinity();
    return std::log2(arg) - 1.0;
}

HimmelblauModel::HimmelblauModel() : box_({-3.0, -3.0}, {3.0, 3.0}) {}

ResidualSample HimmelblauModel::draw(const DesignPoint& theta, RngStream& rng) const
{
    const double f = himmelblau_signed(theta);
    return {{f + std::sqrt(std::abs(f)) * rng.normal()}};
}

ModelFactory himmelblau_factory()
{
    return [](RngStream&) { return std::make_unique<HimmelblauModel>(); };
}

// ---------------------------------------------------------------------------

Mm1Observation mm1_observe(double arrival_rate, double service_rate, int n_entities, RngStream& rng)
{
    if (!(arrival_rate > 0.0) || !(service_rate > 0.0) || n_entities < 1) {
        throw std::invalid_argument("mm1_observe: rates must be positive and n_entities >= 1");
    }
    Mm1Observation obs;
    obs.sojourn_times.resize(static_cast<std::size_t>(n_entities));
    double wait = 0.0;
    double prev_service = 0.0;
    for (int k = 0; k < n_entities; ++k) {
        const double interarrival = rng.exponential(arrival_rate);
        const double service = rng.exponential(service_rate);
        if (k > 0) wait = std::max(0.0, wait + prev_service - interarrival);
        obs.sojourn_times[static_cast<std::size_t>(k)] = wait + service;
        prev_service = service;
    }
    return obs;
}

ResidualSample mm1_residual(const DesignPoint& theta, const Mm1Observation& obs, double service_rate, RngStream& rng)
{
    expect_dim(theta, 1, "mm1_residual");
    const auto n = static_cast<int>(obs.sojourn_times.size());
    const Mm1Observation sim = mm1_observe(theta[0], service_rate, n, rng);
    ResidualSample r;
    r.components.resize(obs.sojourn_times.size());
    for (std::size_t k = 0; k < r.components.size(); ++k) r.components[k] = obs.sojourn_times[k] - sim.sojourn_times[k];
    return r;
}

Mm1Model::Mm1Model(Mm1Params params, Mm1Observation observation)
    : params_(params), observation_(std::move(observation)), box_({params.box_lo}, {params.box_hi})
{
}

ResidualSample Mm1Model::draw(const DesignPoint& theta, RngStream& rng) const
{
    return mm1_residual(theta, observation_, params_.service_rate, rng);
}

ModelFactory mm1_factory(Mm1Params params)
{
    return [params](RngStream& observation_stream) {
        RngStream rng = observation_stream.substream({kObservationKey});
        return std::make_unique<Mm1Model>(
            params, mm1_observe(params.arrival_real, params.service_rate, params.n_entities, rng));
    };
}

// ---------------------------------------------------------------------------

std::vector<SirDay> sir_simulate(double infection_prob, const SirParams& params, RngStream& rng)
{
    if (params.population < 1 || params.initial_infected < 0 || params.initial_infected > params.population) {
        throw std::invalid_argument("sir_simulate: invalid population settings");
    }
    enum Status : unsigned char { S, I, R };
    std::vector<Status> status(static_cast<std::size_t>(params.population), S);
    std::fill_n(status.begin(), params.initial_infected, I);

    std::vector<SirDay> days;
    days.reserve(static_cast<std::size_t>(params.days));
    std::vector<std::size_t> pool;
    std::vector<std::size_t> infected;
    for (int day = 0; day < params.days; ++day) {
        pool.clear();
        infected.clear();
        for (std::size_t i = 0; i < status.size(); ++i) {
            if (status[i] == S) pool.push_back(i);
            if (status[i] == I) infected.push_back(i);
        }

        for (std::size_t k = 0; k < infected.size(); ++k) {
            const std::size_t contacts = std::min<std::size_t>(static_cast<std::size_t>(params.max_contacts), pool.size());
            // Partial Fisher-Yates: the first `contacts` slots become a
            // uniform sample without replacement.
            for (std::size_t c = 0; c < contacts; ++c) {
                const std::size_t pick = c + rng.index(pool.size() - c);
                std::swap(pool[c], pool[pick]);
                const bool infects = rng.bernoulli(infection_prob);
                if (infects && status[pool[c]] == S) status[pool[c]] = I;
            }
        }
        for (std::size_t who : infected) {
            if (rng.bernoulli(params.recovery_prob)) status[who] = R;
        }

        SirDay counts;
        for (Status s : status) {
            if (s == S) ++counts.susceptible;
            else if (s == I) ++counts.infected;
            else ++counts.recovered;
        }
        days.push_back(counts);
    }
    return days;
}

std::vector<double> sir_recovered_proportions(double infection_prob, const SirParams& params, RngStream& rng)
{
    const auto days = sir_simulate(infection_prob, params, rng);
    std::vector<double> out(days.size());
    for (std::size_t d = 0; d < days.size(); ++d) {
        out[d] = static_cast<double>(days[d].recovered) / static_cast<double>(params.population);
    }
    return out;
}

ResidualSample sir_residual(const DesignPoint& theta, const std::vector<double>& obs_trajectory,
                            const SirParams& params, RngStream& rng)
{
    expect_dim(theta, 1, "sir_residual");
    if (obs_trajectory.size() != static_cast<std::size_t>(params.days)) {
        throw DimensionError("sir_residual: observed trajectory length must equal the number of days");
    }
    const auto sim = sir_recovered_proportions(theta[0], params, rng);
    ResidualSample r;
    r.components.resize(sim.size());
    for (std::size_t d = 0; d < sim.size(); ++d) r.components[d] = obs_trajectory[d] - sim[d];
    return r;
}

SirModel::SirModel(SirParams params, std::vector<double> observed)
    : params_(params), observed_(std::move(observed)), box_({0.0}, {1.0})
{
}

ResidualSample SirModel::draw(const DesignPoint& theta, RngStream& rng) const
{
    return sir_residual(theta, observed_, params_, rng);
}

ModelFactory sir_factory(SirParams params)
{
    return [params](RngStream& observation_stream) {
        RngStream rng = observation_stream.substream({kObservationKey});
        return std::make_unique<SirModel>(params, sir_recovered_proportions(params.theta_real, params, rng));
    };
}

// ---------------------------------------------------------------------------

double quadratic_rootless(const DesignPoint& theta, double eps, double noise_sd, RngStream& rng)
{
    expect_dim(theta, 1, "quadratic_rootless");
    return theta[0] * theta[0] + eps + noise_sd * rng.normal();
}

RootlessQuadraticModel::RootlessQuadraticModel(RootlessParams params) : params_(params), box_({-1.0}, {1.0}) {}

ResidualSample RootlessQuadraticModel::draw(const DesignPoint& theta, RngStream& rng) const
{
    return {{quadratic_rootless(theta, params_.eps, params_.noise_sd, rng)}};
}

ModelFactory rootless_factory(RootlessParams params)
{
    return [params](RngStream&) { return std::make_unique<RootlessQuadraticModel>(params); };
}

}  // namespace rfcal
