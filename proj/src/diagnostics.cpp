#include "rfcal/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rfcal/metamodel.hpp"

namespace rfcal {

double spatial_variability(std::span<const ResidualSample> samples)
{
    if (samples.empty()) throw DimensionError("spatial_variability: no samples");
    double total = 0.0;
    for (const auto& s : samples) {
        const double mean = aggregate_signed(s);
        double acc = 0.0;
        for (double r : s.components) acc += (r - mean) * (r - mean);
        total += acc / static_cast<double>(s.size());
    }
    return total / static_cast<double>(samples.size());
}

double aggregate_variance(std::span<const ResidualSample> samples)
{
    if (samples.size() < 2) throw DimensionError("aggregate_variance: at least two samples are required");
    double mean = 0.0;
    for (const auto& s : samples) mean += aggregate_signed(s);
    mean /= static_cast<double>(samples.size());
    double ss = 0.0;
    for (const auto& s : samples) {
        const double d = aggregate_signed(s) - mean;
        ss += d * d;
    }
    return ss / static_cast<double>(samples.size() - 1);
}

GapReport chain_check(std::span<const ResidualSample> samples, double slack)
{
    if (samples.empty()) throw DimensionError("chain_check: no samples");
    GapReport report;
    report.spatial_variability = spatial_variability(samples);
    if (samples.size() >= 2) report.aggregate_variance = aggregate_variance(samples);

    double norm2 = 0.0, s2 = 0.0, s1 = 0.0;
    for (const auto& s : samples) {
        const double agg = aggregate_signed(s);
        norm2 += aggregate_squared(s);
        s2 += agg * agg;
        s1 += agg;
    }
    const double n = static_cast<double>(samples.size());
    report.mean_squared_norm = norm2 / n;
    report.mean_squared_aggregate = s2 / n;
    report.squared_mean_aggregate = (s1 / n) * (s1 / n);
    report.ordered = report.mean_squared_norm >= report.mean_squared_aggregate - slack
                     && report.mean_squared_aggregate >= report.squared_mean_aggregate - slack;
    return report;
}

GapReport diagnose_point(const SimulationModel& model, const DesignPoint& theta, int reps, const RngStream& rng)
{
    if (reps < 1) throw std::invalid_argument("diagnose_point: reps must be at least 1");
    std::vector<ResidualSample> samples;
    samples.reserve(static_cast<std::size_t>(reps));
    for (int j = 0; j < reps; ++j) {
        RngStream rep = rng.substream({static_cast<std::uint64_t>(j)});
        samples.push_back(model.draw(theta, rep));
    }
    return chain_check(samples);
}

std::array<AcqKind, 6> all_acquisitions(double kappa)
{
    return {{{AcqFamily::LCB, ObjectiveMode::MIN, kappa},
             {AcqFamily::PI, ObjectiveMode::MIN, kappa},
             {AcqFamily::EI, ObjectiveMode::MIN, kappa},
             {AcqFamily::LCB, ObjectiveMode::ROOT, kappa},
             {AcqFamily::PI, ObjectiveMode::ROOT, kappa},
             {AcqFamily::EI, ObjectiveMode::ROOT, kappa}}};
}

double GradientReport::worst() const
{
    return *std::max_element(max_deviation.begin(), max_deviation.end());
}

GradientReport validate_gradients(int cases, std::uint64_t seed, double step, bool corrupt)
{
    if (cases < 1) throw std::invalid_argument("validate_gradients: cases must be at least 1");
    if (!(step > 0.0)) throw std::invalid_argument("validate_gradients: step must be positive");

    GradientReport report;
    report.cases = cases;
    const auto kinds = all_acquisitions(1.0);
    // Near-singular designs (huge kriging weights) make the differenced
    // posterior roundoff-limited rather than the analytical gradient wrong.
    constexpr double kMaxWeight = 1e3;

    for (int c = 0; c < cases; ++c) {
        RngStream rng(seed, static_cast<std::uint64_t>(c));
        // Ill-conditioned draws, or ones with no usable query, are redrawn.
        std::optional<GpModel> gp;
        DesignPoint theta;
        std::optional<PosteriorGrad> grad;
        Posterior post;
        for (int draw = 0; draw < 1000 && !grad; ++draw) {
            const auto m = static_cast<Eigen::Index>(1 + rng.index(3));
            const auto n = static_cast<Eigen::Index>(3 + rng.index(6));
            std::vector<DesignPoint> design;
            Vector targets(n), noise(n);
            const bool noisy = rng.bernoulli(0.5);
            for (Eigen::Index i = 0; i < n; ++i) {
                DesignPoint p(m);
                for (Eigen::Index k = 0; k < m; ++k) p[k] = rng.uniform();
                design.push_back(p);
                targets[i] = rng.normal();
                noise[i] = noisy ? rng.uniform(0.0, 0.1) : 0.0;
            }
            const double lengthscale = rng.uniform(0.2, 1.0);
            gp.emplace(design, targets, noise, KernelParams{lengthscale, 1e-10});
            if (gp->weights().cwiseAbs().maxCoeff() > kMaxWeight) continue;

            theta.resize(m);
            for (int attempt = 0; attempt < 100; ++attempt) {
                for (Eigen::Index k = 0; k < m; ++k) theta[k] = rng.uniform(-0.25, 1.25);
                std::tie(post, grad) = gp->evaluate(theta);
                if (grad && post.std() >= 0.05 && std::abs(post.mean) >= 1e-3) break;
                grad.reset();
            }
        }
        if (!grad) throw std::runtime_error("validate_gradients: no admissible query point found");
        const Eigen::Index m = theta.size();
        const Incumbent inc_min = select_incumbent(*gp, ObjectiveMode::MIN, SurrogateMode::Deterministic);
        const Incumbent inc_root = select_incumbent(*gp, ObjectiveMode::ROOT, SurrogateMode::Deterministic);

        for (std::size_t a = 0; a < kinds.size(); ++a) {
            const Incumbent& inc = kinds[a].mode == ObjectiveMode::MIN ? inc_min : inc_root;
            Vector analytic = acq_gradient(kinds[a], post, *grad, inc);
            if (corrupt) analytic.array() += 1.0;
            for (Eigen::Index k = 0; k < m; ++k) {
                DesignPoint up = theta, down = theta;
                up[k] += step;
                down[k] -= step;
                const double fd =
                    (acq_value(kinds[a], gp->posterior(up), inc) - acq_value(kinds[a], gp->posterior(down), inc))
                    / (2.0 * step);
                report.max_deviation[a] = std::max(report.max_deviation[a], std::abs(fd - analytic[k]));
            }
        }
    }
    return report;
}

}  // namespace rfcal
