#include "rfcal/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>

#include "rfcal/rss.hpp"

namespace rfcal {

void RunConfig::validate() const
{
    if (p_init < 2) throw std::invalid_argument("p_init must be at least 2");
    if (budget < 0) throw std::invalid_argument("budget must be non-negative");
    if (reps_per_point < 1) throw std::invalid_argument("reps_per_point must be at least 1");
    if (post_reps < 2) throw std::invalid_argument("post_reps must be at least 2");
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must lie in [0, 1]");
    if (!(theta_floor > 0.0)) throw std::invalid_argument("theta_floor must be positive");
    if (family == AcqFamily::LCB && !(kappa > 0.0)) throw std::invalid_argument("kappa must be positive");
    if (use_rss && objective != ObjectiveMode::ROOT) {
        throw std::invalid_argument("search-space reduction requires the root-finding objective");
    }
    if (optimizer.starts < 1 || optimizer.iters < 1) throw std::invalid_argument("optimizer starts/iters must be positive");
}

std::vector<DesignPoint> initial_design(const ParameterBox& box, int p, RngStream& rng)
{
    if (p < 2) throw std::invalid_argument("initial_design: p must be at least 2");
    const auto m = box.dim();
    std::vector<DesignPoint> points(static_cast<std::size_t>(p), DesignPoint(static_cast<Eigen::Index>(m)));
    std::vector<int> strata(static_cast<std::size_t>(p));
    for (std::size_t axis = 0; axis < m; ++axis) {
        std::iota(strata.begin(), strata.end(), 0);
        std::shuffle(strata.begin(), strata.end(), rng.engine());
        for (int i = 0; i < p; ++i) {
            const double u = (strata[static_cast<std::size_t>(i)] + rng.uniform()) / p;
            points[static_cast<std::size_t>(i)][static_cast<Eigen::Index>(axis)] =
                box.lower()[axis] + u * box.width(axis);
        }
    }
    return points;
}

ObservationSummary evaluate_point(const SimulationModel& model, const DesignPoint& theta, int reps,
                                  const RngStream& rng)
{
    if (reps < 1) throw std::invalid_argument("evaluate_point: reps must be at least 1");
    std::vector<ResidualSample> samples;
    samples.reserve(static_cast<std::size_t>(reps));
    for (int j = 0; j < reps; ++j) {
        RngStream rep = rng.substream({static_cast<std::uint64_t>(j)});
        samples.push_back(model.draw(theta, rep));
    }
    return summarize(theta, samples);
}

PostEvaluation post_evaluate(const SimulationModel& model, const DesignPoint& theta, int post_reps,
                             const RngStream& rng)
{
    if (post_reps < 2) throw std::invalid_argument("post_evaluate: post_reps must be at least 2");
    std::vector<double> values(static_cast<std::size_t>(post_reps));
    for (int j = 0; j < post_reps; ++j) {
        RngStream rep = rng.substream({static_cast<std::uint64_t>(j)});
        values[static_cast<std::size_t>(j)] = aggregate_squared(model.draw(theta, rep));
    }
    const double n = static_cast<double>(post_reps);
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / (n - 1.0));
    return {mean, 1.96 * sd / std::sqrt(n)};
}

// ---------------------------------------------------------------------------

CalibrationRun::CalibrationRun(const SimulationModel& model, RunConfig config, RngStream macro_stream)
    : model_(model), config_(std::move(config)), stream_(macro_stream)
{
    config_.validate();
    RngStream design_rng = stream_.substream({kKeyDesign});
    const auto points = initial_design(model_.box(), config_.p_init, design_rng);
    for (const auto& theta : points) {
        const auto index = static_cast<std::uint64_t>(design_.size());
        design_.push_back(
            evaluate_point(model_, theta, config_.reps_per_point, stream_.substream({kKeyEvaluate, index})));
    }
    surrogate_ = fit_surrogate();
    const ParameterBox& box = model_.box();
    const Vector lo = Eigen::Map<const Vector>(box.lower().data(), static_cast<Eigen::Index>(box.dim()));
    const Vector hi = Eigen::Map<const Vector>(box.upper().data(), static_cast<Eigen::Index>(box.dim()));
    record(std::nullopt, std::numeric_limits<double>::quiet_NaN(), lo, hi, false);
}

GpModel CalibrationRun::fit_surrogate() const
{
    const auto n = static_cast<Eigen::Index>(design_.size());
    std::vector<DesignPoint> unit;
    unit.reserve(design_.size());
    Vector targets(n), noise(n);
    const bool root = config_.objective == ObjectiveMode::ROOT;
    const bool stochastic = config_.surrogate == SurrogateMode::Stochastic;
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& obs = design_[static_cast<std::size_t>(i)];
        unit.push_back(model_.box().to_unit(obs.theta));
        targets[i] = root ? obs.signed_mean : obs.squared_mean;
        noise[i] = stochastic ? (root ? obs.signed_noise_var : obs.squared_noise_var) : 0.0;
    }
    return GpModel::fit(std::move(unit), std::move(targets), std::move(noise), config_.lengthscale_bounds);
}

std::pair<ParameterBox, bool> CalibrationRun::active_box() const
{
    const ParameterBox& full = model_.box();
    if (!config_.use_rss) return {full, false};

    std::vector<DesignPoint> thetas;
    thetas.reserve(design_.size());
    for (const auto& obs : design_) thetas.push_back(obs.theta);

    std::optional<Subregion> region;
    if (config_.surrogate == SurrogateMode::Deterministic) {
        std::vector<double> signs;
        signs.reserve(design_.size());
        for (const auto& obs : design_) signs.push_back(obs.signed_mean);
        region = rss_deterministic(thetas, signs, config_.theta_floor);
    } else {
        std::vector<Posterior> posts;
        posts.reserve(design_.size());
        for (const auto& unit : surrogate_->design()) posts.push_back(surrogate_->posterior(unit));
        region = rss_stochastic(thetas, posts, config_.alpha, config_.theta_floor);
    }
    if (!region) return {full, false};

    // Degenerate axes are widened by the distance floor so the box stays
    // valid; the optimizer itself accepts lo == hi.
    std::vector<double> lo(full.dim()), hi(full.dim());
    for (std::size_t i = 0; i < full.dim(); ++i) {
        lo[i] = region->lo[static_cast<Eigen::Index>(i)];
        hi[i] = region->hi[static_cast<Eigen::Index>(i)];
        if (!(lo[i] < hi[i])) {
            lo[i] = std::max(full.lower()[i], lo[i] - 0.5 * config_.theta_floor);
            hi[i] = std::min(full.upper()[i], hi[i] + 0.5 * config_.theta_floor);
        }
    }
    return {ParameterBox(std::move(lo), std::move(hi)), true};
}

void CalibrationRun::step()
{
    if (done()) return;
    const ParameterBox& full = model_.box();
    const auto [box, rss_active] = active_box();
    const Vector lo_unit = full.to_unit(Eigen::Map<const Vector>(box.lower().data(), static_cast<Eigen::Index>(box.dim())));
    const Vector hi_unit = full.to_unit(Eigen::Map<const Vector>(box.upper().data(), static_cast<Eigen::Index>(box.dim())));

    const GpModel& gp = *surrogate_;
    const Incumbent inc = select_incumbent(gp, config_.objective, config_.surrogate);
    const AcqKind kind = config_.acq_kind();
    const Objective objective = [&](const Vector& u) {
        const auto [post, grad] = gp.evaluate(u);
        ObjectiveEval e;
        e.value = acq_value(kind, post, inc);
        if (grad) e.gradient = acq_gradient(kind, post, *grad, inc);
        return e;
    };
    RngStream acq_rng = stream_.substream({kKeyAcquisition, static_cast<std::uint64_t>(iteration_ + 1)});
    const OptimResult best = optimize(objective, lo_unit.cwiseMax(0.0).cwiseMin(1.0), hi_unit.cwiseMax(0.0).cwiseMin(1.0),
                                      kind.maximize() ? Sense::Maximize : Sense::Minimize, config_.optimizer, acq_rng);

    const DesignPoint theta = full.clamp(full.from_unit(best.point));
    const auto index = static_cast<std::uint64_t>(design_.size());
    ObservationSummary obs =
        evaluate_point(model_, theta, config_.reps_per_point, stream_.substream({kKeyEvaluate, index}));
    design_.push_back(obs);
    surrogate_ = fit_surrogate();
    ++iteration_;

    const Vector lo = Eigen::Map<const Vector>(box.lower().data(), static_cast<Eigen::Index>(box.dim()));
    const Vector hi = Eigen::Map<const Vector>(box.upper().data(), static_cast<Eigen::Index>(box.dim()));
    record(std::move(obs), best.value, lo, hi, rss_active);
}

void CalibrationRun::record(std::optional<ObservationSummary> evaluated, double acq_value, const Vector& lo,
                            const Vector& hi, bool rss_active)
{
    const Incumbent rec = select_incumbent(*surrogate_, config_.objective, config_.surrogate);
    TraceRecord r;
    r.iter = iteration_;
    r.evaluated = std::move(evaluated);
    r.lengthscale = surrogate_->params().lengthscale;
    r.acq_value = acq_value;
    r.box_lo = lo;
    r.box_hi = hi;
    r.rss_active = rss_active;
    r.recommended_index = rec.index;
    r.recommended = design_[rec.index].theta;
    const PostEvaluation pe = post_evaluate(model_, r.recommended, config_.post_reps,
                                            stream_.substream({kKeyPostEvaluate, static_cast<std::uint64_t>(iteration_)}));
    r.post_mean = pe.mean;
    r.post_ci_half = pe.ci_half;
    trace_.records.push_back(std::move(r));
    trace_.design = design_;
}

CalibrationTrace CalibrationRun::take_trace() &&
{
    return std::move(trace_);
}

CalibrationTrace run_calibration(const SimulationModel& model, const RunConfig& config, std::uint64_t macro_rep)
{
    CalibrationRun run(model, config, RngStream(config.seed, macro_rep));
    while (!run.done()) run.step();
    return std::move(run).take_trace();
}

CalibrationTrace run_calibration(const ModelFactory& factory, const RunConfig& config, std::uint64_t macro_rep)
{
    RngStream observation = RngStream(config.seed, macro_rep).substream({kKeyObservation});
    const auto model = factory(observation);
    return run_calibration(*model, config, macro_rep);
}

// ---------------------------------------------------------------------------

SweepResult macro_sweep(const std::vector<RunConfig>& methods, int macro_reps, const ModelFactory& factory,
                        int workers, bool keep_traces)
{
    if (macro_reps < 1) throw std::invalid_argument("macro_sweep: macro_reps must be at least 1");
    if (methods.empty()) throw std::invalid_argument("macro_sweep: no methods");
    for (const auto& m : methods) m.validate();

    SweepResult result;
    result.methods = methods;
    const std::size_t total = methods.size() * static_cast<std::size_t>(macro_reps);
    result.runs.resize(total);

    std::atomic<std::size_t> next{0};
    auto work = [&]() {
        for (std::size_t task = next++; task < total; task = next++) {
            SweepRun& run = result.runs[task];
            run.method = task / static_cast<std::size_t>(macro_reps);
            run.macro_rep = task % static_cast<std::size_t>(macro_reps);
            try {
                CalibrationTrace trace = run_calibration(factory, methods[run.method], run.macro_rep);
                for (const auto& r : trace.records) run.post_means.push_back(r.post_mean);
                if (keep_traces) run.trace = std::move(trace);
                run.ok = true;
            } catch (const std::exception& e) {
                run.ok = false;
                run.error = e.what();
            }
        }
    };
    const int n_threads = std::max(1, std::min<int>(workers, static_cast<int>(total)));
    std::vector<std::thread> pool;
    for (int t = 1; t < n_threads; ++t) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();

    for (const auto& run : result.runs) {
        if (!run.ok) ++result.failed;
    }
    for (std::size_t m = 0; m < methods.size(); ++m) {
        for (int it = 0; it <= methods[m].budget; ++it) {
            std::vector<double> vals;
            for (const auto& run : result.runs) {
                if (run.method == m && run.ok) vals.push_back(run.post_means[static_cast<std::size_t>(it)]);
            }
            SweepAggregate agg;
            agg.method = m;
            agg.iter = it;
            agg.count = static_cast<int>(vals.size());
            if (!vals.empty()) {
                const double n = static_cast<double>(vals.size());
                agg.mean = std::accumulate(vals.begin(), vals.end(), 0.0) / n;
                if (vals.size() > 1) {
                    double ss = 0.0;
                    for (double v : vals) ss += (v - agg.mean) * (v - agg.mean);
                    agg.ci_half = 1.96 * std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
                }
            } else {
                agg.mean = std::numeric_limits<double>::quiet_NaN();
                agg.ci_half = std::numeric_limits<double>::quiet_NaN();
            }
            result.aggregate.push_back(agg);
        }
    }
    return result;
}

}  // namespace rfcal
