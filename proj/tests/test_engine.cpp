#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "rfcal/engine.hpp"

using namespace rfcal;

namespace {

DesignPoint pt(std::initializer_list<double> xs)
{
    DesignPoint p(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs) p[i++] = x;
    return p;
}

class ConstantModel : public SimulationModel {
public:
    explicit ConstantModel(double c) : c_(c), box_({0.0}, {1.0}) {}
    std::string name() const override { return "constant"; }
    const ParameterBox& box() const override { return box_; }
    std::size_t output_dim() const override { return 2; }
    ResidualSample draw(const DesignPoint&, RngStream&) const override { return {{c_, c_}}; }

private:
    double c_;
    ParameterBox box_;
};

// Positive everywhere: theta + 1 with small noise.
class PositiveModel : public SimulationModel {
public:
    PositiveModel() : box_({0.0}, {1.0}) {}
    std::string name() const override { return "positive"; }
    const ParameterBox& box() const override { return box_; }
    std::size_t output_dim() const override { return 1; }
    ResidualSample draw(const DesignPoint& t, RngStream& rng) const override
    {
        return {{t[0] + 1.0 + 0.01 * rng.normal()}};
    }

private:
    ParameterBox box_;
};

RunConfig small_config(ObjectiveMode mode, bool rss, SurrogateMode s = SurrogateMode::Stochastic)
{
    RunConfig c;
    c.name = "t";
    c.objective = mode;
    c.surrogate = s;
    c.use_rss = rss;
    c.budget = 4;
    c.post_reps = 50;
    c.seed = 17;
    return c;
}

}  // namespace

TEST(InitialDesign, StratifiedAndDeterministic)
{
    const ParameterBox unit({0.0}, {1.0});
    RngStream a(1, 0), b(1, 0);
    const auto d = initial_design(unit, 2, a);
    ASSERT_EQ(d.size(), 2u);
    std::vector<double> xs{d[0][0], d[1][0]};
    std::sort(xs.begin(), xs.end());
    EXPECT_LT(xs[0], 0.5);
    EXPECT_GE(xs[1], 0.5);
    const auto d2 = initial_design(unit, 2, b);
    EXPECT_EQ(d[0], d2[0]);
    EXPECT_EQ(d[1], d2[1]);

    const ParameterBox box({-3.0, 2.0}, {3.0, 10.0});
    RngStream c(2, 0);
    const auto e = initial_design(box, 5, c);
    for (std::size_t axis = 0; axis < 2; ++axis) {
        std::vector<double> u;
        for (const auto& p : e) u.push_back(box.to_unit(p)[static_cast<Eigen::Index>(axis)]);
        std::sort(u.begin(), u.end());
        for (int k = 0; k < 5; ++k) {
            EXPECT_GE(u[static_cast<std::size_t>(k)], k / 5.0);
            EXPECT_LT(u[static_cast<std::size_t>(k)], (k + 1) / 5.0);
        }
    }
    EXPECT_THROW(initial_design(box, 1, c), std::invalid_argument);
}

TEST(EvaluatePoint, NoiselessAndSingleRep)
{
    const ConstantModel model(1.5);
    const RngStream rng(1, 1);
    const ObservationSummary o = evaluate_point(model, pt({0.2}), 10, rng);
    EXPECT_EQ(o.signed_mean, 1.5);
    EXPECT_EQ(o.squared_mean, 2.25);
    EXPECT_EQ(o.signed_noise_var, 0.0);
    const HimmelblauModel h;
    const ObservationSummary one = evaluate_point(h, pt({0.0, 0.0}), 1, rng);
    EXPECT_EQ(one.signed_noise_var, 0.0);
    EXPECT_EQ(one.reps, 1);
}

TEST(EvaluatePoint, HimmelblauLawOfLargeNumbers)
{
    const HimmelblauModel h;
    const ObservationSummary o = evaluate_point(h, pt({1.0, 1.0}), 20000, RngStream(3, 0));
    EXPECT_NEAR(o.signed_mean, -1.0, 0.03);
}

TEST(PostEvaluate, ConstantAndScaling)
{
    const ConstantModel model(-2.0);
    const PostEvaluation c = post_evaluate(model, pt({0.5}), 100, RngStream(1, 0));
    EXPECT_EQ(c.mean, 4.0);
    EXPECT_EQ(c.ci_half, 0.0);

    const HimmelblauModel h;
    const PostEvaluation small = post_evaluate(h, pt({0.0, 0.0}), 1000, RngStream(2, 0));
    const PostEvaluation big = post_evaluate(h, pt({0.0, 0.0}), 4000, RngStream(2, 1));
    EXPECT_NEAR(big.ci_half / small.ci_half, 0.5, 0.1);
}

TEST(PostEvaluate, SecondMomentIsMeanSquarePlusNoiseVariance)
{
    // S ~ N(f, |f|), so E[S^2] = f^2 + |f|
    const HimmelblauModel h;
    const DesignPoint theta = pt({1.0, 1.0});
    const double f = himmelblau_signed(theta);
    const PostEvaluation p = post_evaluate(h, theta, 20000, RngStream(4, 0));
    EXPECT_NEAR(p.mean, f * f + std::abs(f), 4 * p.ci_half / 1.96);
}

TEST(RunConfig, Validation)
{
    RunConfig c = small_config(ObjectiveMode::MIN, true);
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c = small_config(ObjectiveMode::ROOT, true);
    EXPECT_NO_THROW(c.validate());
    c.budget = -1;
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c = small_config(ObjectiveMode::ROOT, true);
    c.p_init = 1;
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c = small_config(ObjectiveMode::ROOT, true);
    c.alpha = 1.5;
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c = small_config(ObjectiveMode::ROOT, true);
    c.post_reps = 1;
    EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(CalibrationRun, TraceContract)
{
    const HimmelblauModel h;
    RunConfig c = small_config(ObjectiveMode::ROOT, true);
    c.budget = 10;
    const CalibrationTrace t = run_calibration(h, c, 0);
    ASSERT_EQ(t.records.size(), 11u);
    EXPECT_EQ(t.design.size(), 12u);
    EXPECT_FALSE(t.records[0].evaluated.has_value());
    EXPECT_TRUE(std::isnan(t.records[0].acq_value));
    for (std::size_t i = 0; i < t.records.size(); ++i) {
        const TraceRecord& r = t.records[i];
        EXPECT_EQ(r.iter, static_cast<int>(i));
        ASSERT_LT(r.recommended_index, 2 + i);
        EXPECT_EQ(r.recommended, t.design[r.recommended_index].theta);
        EXPECT_GT(r.lengthscale, 0.0);
        EXPECT_GE(r.post_ci_half, 0.0);
        if (i > 0) {
            ASSERT_TRUE(r.evaluated.has_value());
            EXPECT_EQ(r.evaluated->theta, t.design[1 + i].theta);
            EXPECT_TRUE(h.box().contains(r.evaluated->theta, 1e-12));
            for (Eigen::Index k = 0; k < 2; ++k) {
                EXPECT_GE(r.evaluated->theta[k], r.box_lo[k] - 1e-9);
                EXPECT_LE(r.evaluated->theta[k], r.box_hi[k] + 1e-9);
            }
        }
    }
}

TEST(CalibrationRun, Deterministic)
{
    const HimmelblauModel h;
    const RunConfig c = small_config(ObjectiveMode::ROOT, true);
    const CalibrationTrace a = run_calibration(h, c, 3);
    const CalibrationTrace b = run_calibration(h, c, 3);
    ASSERT_EQ(a.records.size(), b.records.size());
    for (std::size_t i = 0; i < a.design.size(); ++i) EXPECT_EQ(a.design[i].theta, b.design[i].theta);
    EXPECT_EQ(a.records.back().post_mean, b.records.back().post_mean);
    const CalibrationTrace other = run_calibration(h, c, 4);
    EXPECT_NE(a.design[0].theta, other.design[0].theta);
}

TEST(CalibrationRun, RssFallsBackToFullBoxWithoutSignChange)
{
    const PositiveModel model;
    for (auto s : {SurrogateMode::Deterministic, SurrogateMode::Stochastic}) {
        const RunConfig c = small_config(ObjectiveMode::ROOT, true, s);
        const CalibrationTrace t = run_calibration(model, c, 0);
        for (const TraceRecord& r : t.records) {
            EXPECT_FALSE(r.rss_active);
            EXPECT_EQ(r.box_lo[0], 0.0);
            EXPECT_EQ(r.box_hi[0], 1.0);
        }
    }
}

TEST(CalibrationRun, RssShrinksBoxOnSignChange)
{
    const HimmelblauModel h;
    RunConfig c = small_config(ObjectiveMode::ROOT, true, SurrogateMode::Deterministic);
    c.budget = 10;
    int active = 0;
    for (std::uint64_t rep = 0; rep < 5; ++rep) {
        const CalibrationTrace t = run_calibration(h, c, rep);
        for (const TraceRecord& r : t.records) {
            if (!r.rss_active) continue;
            ++active;
            EXPECT_LE((r.box_hi - r.box_lo).prod(), 36.0);
        }
    }
    EXPECT_GT(active, 0);
}

TEST(CalibrationRun, EveryMethodRuns)
{
    const HimmelblauModel h;
    for (auto fam : {AcqFamily::LCB, AcqFamily::PI, AcqFamily::EI}) {
        for (auto mode : {ObjectiveMode::MIN, ObjectiveMode::ROOT}) {
            for (auto s : {SurrogateMode::Deterministic, SurrogateMode::Stochastic}) {
                RunConfig c = small_config(mode, mode == ObjectiveMode::ROOT, s);
                c.family = fam;
                const CalibrationTrace t = run_calibration(h, c, 1);
                EXPECT_EQ(t.records.size(), 5u);
                for (const TraceRecord& r : t.records) EXPECT_TRUE(std::isfinite(r.post_mean));
            }
        }
    }
}

TEST(MacroSweep, PairedDesignsAndAggregate)
{
    RunConfig a = small_config(ObjectiveMode::ROOT, true);
    a.name = "rf";
    RunConfig b = small_config(ObjectiveMode::MIN, false);
    b.name = "min";
    b.family = AcqFamily::PI;
    const SweepResult r = macro_sweep({a, b}, 3, himmelblau_factory(), 1, true);
    ASSERT_EQ(r.runs.size(), 6u);
    EXPECT_EQ(r.failed, 0);
    for (std::uint64_t rep = 0; rep < 3; ++rep) {
        const SweepRun& x = r.runs[rep];
        const SweepRun& y = r.runs[3 + rep];
        EXPECT_EQ(x.method, 0u);
        EXPECT_EQ(y.method, 1u);
        EXPECT_EQ(x.macro_rep, rep);
        for (int i = 0; i < 2; ++i) EXPECT_EQ(x.trace.design[i].theta, y.trace.design[i].theta);
        EXPECT_EQ(x.trace.design[0].signed_mean, y.trace.design[0].signed_mean);
    }
    ASSERT_EQ(r.aggregate.size(), 2u * 5u);
    for (const SweepAggregate& g : r.aggregate) {
        double s = 0;
        for (std::uint64_t rep = 0; rep < 3; ++rep) s += r.runs[g.method * 3 + rep].post_means[g.iter];
        EXPECT_NEAR(g.mean, s / 3, 1e-12);
        EXPECT_EQ(g.count, 3);
    }
}

TEST(MacroSweep, SingleRepMatchesRun)
{
    const RunConfig a = small_config(ObjectiveMode::ROOT, true);
    const SweepResult r = macro_sweep({a}, 1, himmelblau_factory(), 1, true);
    const CalibrationTrace t = run_calibration(himmelblau_factory(), a, 0);
    ASSERT_EQ(r.runs[0].post_means.size(), t.records.size());
    for (std::size_t i = 0; i < t.records.size(); ++i) {
        EXPECT_EQ(r.runs[0].post_means[i], t.records[i].post_mean);
        EXPECT_EQ(r.aggregate[i].mean, t.records[i].post_mean);
    }
}

TEST(MacroSweep, WorkerCountDoesNotMatter)
{
    const RunConfig a = small_config(ObjectiveMode::ROOT, true);
    RunConfig b = small_config(ObjectiveMode::ROOT, false);
    b.family = AcqFamily::LCB;
    b.name = "lcb";
    const ModelFactory f = mm1_factory();
    const SweepResult one = macro_sweep({a, b}, 4, f, 1);
    const SweepResult four = macro_sweep({a, b}, 4, f, 4);
    ASSERT_EQ(one.runs.size(), four.runs.size());
    for (std::size_t i = 0; i < one.runs.size(); ++i) EXPECT_EQ(one.runs[i].post_means, four.runs[i].post_means);
}

TEST(MacroSweep, FailuresAreRecorded)
{
    ModelFactory broken = [](RngStream&) -> std::unique_ptr<SimulationModel> { throw std::runtime_error("boom"); };
    const SweepResult r = macro_sweep({small_config(ObjectiveMode::ROOT, false)}, 2, broken, 2);
    EXPECT_EQ(r.failed, 2);
    EXPECT_FALSE(r.runs[0].ok);
    EXPECT_EQ(r.runs[0].error, "boom");
    EXPECT_TRUE(r.aggregate.empty() || r.aggregate[0].count == 0);
}
