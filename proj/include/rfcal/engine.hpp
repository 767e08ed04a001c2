#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rfcal/acqopt.hpp"
#include "rfcal/acquisition.hpp"
#include "rfcal/core.hpp"
#include "rfcal/metamodel.hpp"
#include "rfcal/simulators.hpp"

namespace rfcal {

/// One calibration method plus the shared experiment protocol.
struct RunConfig {
    std::string name;
    ObjectiveMode objective = ObjectiveMode::ROOT;
    SurrogateMode surrogate = SurrogateMode::Stochastic;
    AcqFamily family = AcqFamily::EI;
    double kappa = 1.0;
    bool use_rss = false;

    int p_init = 2;
    int budget = 10;
    int reps_per_point = 10;
    double alpha = 0.95;
    double theta_floor = 1e-8;
    int post_reps = 1000;
    std::uint64_t seed = 0;

    OptimizerConfig optimizer;
    LengthscaleBounds lengthscale_bounds;

    AcqKind acq_kind() const { return {family, objective, kappa}; }

    /// Throws std::invalid_argument on an inconsistent configuration.
    void validate() const;
};

/// State after one iteration (iteration 0 is the initial design).
struct TraceRecord {
    int iter = 0;
    /// Point evaluated at this iteration; empty for iteration 0.
    std::optional<ObservationSummary> evaluated;
    double lengthscale = 0.0;
    /// Acquisition value at the chosen point; NaN for iteration 0.
    double acq_value = 0.0;
    /// Search box handed to the acquisition optimizer, model units.
    Vector box_lo;
    Vector box_hi;
    bool rss_active = false;
    std::size_t recommended_index = 0;
    DesignPoint recommended;
    double post_mean = 0.0;
    double post_ci_half = 0.0;
};

struct CalibrationTrace {
    std::vector<TraceRecord> records;
    std::vector<ObservationSummary> design;
};

/// Stream keys below the macro-replication stream.
enum StreamKey : std::uint64_t {
    kKeyObservation = 1,
    kKeyDesign = 2,
    kKeyEvaluate = 3,
    kKeyAcquisition = 4,
    kKeyPostEvaluate = 5,
};

/// Latin hypercube sample: one uniform draw per stratum and axis, strata
/// permuted independently per axis.
std::vector<DesignPoint> initial_design(const ParameterBox& box, int p, RngStream& rng);

/// `reps` replications at theta; replication j draws from rng.substream({j}).
ObservationSummary evaluate_point(const SimulationModel& model, const DesignPoint& theta, int reps,
                                  const RngStream& rng);

struct PostEvaluation {
    double mean = 0.0;
    double ci_half = 0.0;
};

/// Mean of the squared aggregate over `post_reps` fresh replications, with
/// a 95% normal half-width.
PostEvaluation post_evaluate(const SimulationModel& model, const DesignPoint& theta, int post_reps,
                             const RngStream& rng);

/// Sequential calibration state for one run.
class CalibrationRun {
public:
    /// Evaluates the initial design and records iteration 0. `macro_stream`
    /// is the macro-replication stream; every random draw derives from it.
    CalibrationRun(const SimulationModel& model, RunConfig config, RngStream macro_stream);

    /// One sequential evaluation: fit, optional RSS, incumbent, acquisition
    /// search, evaluation, refit, recommendation, post-evaluation.
    void step();

    bool done() const { return iteration_ >= config_.budget; }
    int iteration() const { return iteration_; }
    const std::vector<ObservationSummary>& design() const { return design_; }
    const GpModel& surrogate() const { return *surrogate_; }
    const CalibrationTrace& trace() const { return trace_; }
    CalibrationTrace take_trace() &&;

    /// Active acquisition box in model units, and whether RSS produced it.
    std::pair<ParameterBox, bool> active_box() const;

private:
    GpModel fit_surrogate() const;
    void record(std::optional<ObservationSummary> evaluated, double acq_value, const Vector& lo, const Vector& hi,
                bool rss_active);

    const SimulationModel& model_;
    RunConfig config_;
    RngStream stream_;
    std::vector<ObservationSummary> design_;
    std::optional<GpModel> surrogate_;
    int iteration_ = 0;
    CalibrationTrace trace_;
};

/// Runs `config.budget` iterations on macro replication `macro_rep`,
/// drawing from RngStream(config.seed, macro_rep).
CalibrationTrace run_calibration(const SimulationModel& model, const RunConfig& config, std::uint64_t macro_rep);

/// Builds the problem for `macro_rep` and runs it.
CalibrationTrace run_calibration(const ModelFactory& factory, const RunConfig& config, std::uint64_t macro_rep);

/// Per-run outcome inside a sweep.
struct SweepRun {
    std::size_t method = 0;
    std::uint64_t macro_rep = 0;
    bool ok = false;
    std::string error;
    std::vector<double> post_means;  // budget + 1 entries when ok
    CalibrationTrace trace;
};

struct SweepAggregate {
    std::size_t method = 0;
    int iter = 0;
    double mean = 0.0;
    double ci_half = 0.0;
    int count = 0;
};

struct SweepResult {
    std::vector<RunConfig> methods;
    std::vector<SweepRun> runs;  // sorted by (method, macro_rep)
    std::vector<SweepAggregate> aggregate;
    int failed = 0;
};

/// Runs every method on macro replications 0..macro_reps-1. Methods under
/// one macro index share the seed stream, hence the initial design and the
/// problem's observed data. Failed runs are recorded and excluded from the
/// aggregate. `workers` threads share the work; results do not depend on it.
SweepResult macro_sweep(const std::vector<RunConfig>& methods, int macro_reps, const ModelFactory& factory,
                        int workers = 1, bool keep_traces = false);

}  // namespace rfcal
