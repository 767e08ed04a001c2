#include "rfcal/rootless.hpp"

#include <cmath>
#include <stdexcept>

#include "rfcal/engine.hpp"
#include "rfcal/simulators.hpp"

namespace rfcal {

RootlessCase rootless_case(const RootlessConfig& config, int design_size, int seed_index)
{
    if (!(config.eps > 0.0)) throw std::invalid_argument("rootless: eps must be positive");
    if (design_size < 2) throw std::invalid_argument("rootless: design size must be at least 2");

    const RootlessQuadraticModel model({config.eps, config.noise_sd});
    const ParameterBox& box = model.box();
    const RngStream stream = RngStream(config.seed, static_cast<std::uint64_t>(seed_index))
                                 .substream({static_cast<std::uint64_t>(design_size)});

    std::vector<DesignPoint> unit;
    const auto n = static_cast<Eigen::Index>(design_size);
    Vector targets(n), noise(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        DesignPoint theta(1);
        theta[0] = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(design_size - 1);
        const ObservationSummary obs = evaluate_point(model, theta, config.reps_per_point,
                                                      stream.substream({kKeyEvaluate, static_cast<std::uint64_t>(i)}));
        unit.push_back(box.to_unit(theta));
        targets[i] = obs.signed_mean;
        noise[i] = config.surrogate == SurrogateMode::Stochastic ? obs.signed_noise_var : 0.0;
    }
    const GpModel gp = GpModel::fit(std::move(unit), std::move(targets), std::move(noise));

    // Both families score the same signed-discrepancy surrogate; they differ
    // only in their incumbent rule and criterion.
    const Incumbent inc_min = select_incumbent(gp, ObjectiveMode::MIN, config.surrogate);
    const Incumbent inc_root = select_incumbent(gp, ObjectiveMode::ROOT, config.surrogate);
    DesignPoint optimum(1);
    optimum[0] = 0.0;
    const Posterior post = gp.posterior(box.to_unit(optimum));

    RootlessCase out;
    out.design_size = design_size;
    out.seed_index = seed_index;
    out.at_optimum = post;
    out.lcb_diff = std::abs(rf_lcb(post, config.kappa) - lcb(post, config.kappa));
    if (config.use_small_regime()) {
        out.pi_diff = std::abs(rf_pi(post, inc_root) - (2.0 * pi(post, inc_min) - 1.0));
        out.ei_diff = std::abs(rf_ei(post, inc_root) - (2.0 * ei(post, inc_min) - 2.0 * post.std() * normal_pdf(0.0)));
    } else {
        out.pi_diff = std::abs(rf_pi(post, inc_root) - pi(post, inc_min));
        out.ei_diff = std::abs(rf_ei(post, inc_root) - ei(post, inc_min));
    }

    out.mean_positive = true;
    for (int g = 0; g <= 200; ++g) {
        DesignPoint theta(1);
        theta[0] = -1.0 + 2.0 * g / 200.0;
        if (!(gp.posterior(box.to_unit(theta)).mean > 0.0)) {
            out.mean_positive = false;
            break;
        }
    }
    return out;
}

RootlessResult rootless_study(const RootlessConfig& config)
{
    if (config.seeds < 1) throw std::invalid_argument("rootless: seeds must be at least 1");
    RootlessResult result;
    for (int size : config.design_sizes) {
        RootlessSummary s;
        s.design_size = size;
        for (int k = 0; k < config.seeds; ++k) {
            RootlessCase c = rootless_case(config, size, k);
            s.lcb_diff += c.lcb_diff;
            s.pi_diff += c.pi_diff;
            s.ei_diff += c.ei_diff;
            s.positive_mean_seeds += c.mean_positive ? 1 : 0;
            result.cases.push_back(c);
        }
        s.lcb_diff /= config.seeds;
        s.pi_diff /= config.seeds;
        s.ei_diff /= config.seeds;
        result.summary.push_back(s);
    }
    return result;
}

}  // namespace rfcal
