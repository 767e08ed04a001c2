// rfcal: run, sweep, validate, rootless, diagnose.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "rfcal/csv.hpp"
#include "rfcal/diagnostics.hpp"
#include "rfcal/engine.hpp"
#include "rfcal/experiment_config.hpp"
#include "rfcal/rootless.hpp"

namespace {

using namespace rfcal;

enum ExitCode : int { kOk = 0, kConfig = 1, kRuntime = 2, kValidation = 3 };

struct RuntimeFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

int workers_from_env()
{
    const char* env = std::getenv("RFCAL_WORKERS");
    if (!env || !*env) return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (*end != '\0' || n < 1) throw ConfigError("RFCAL_WORKERS must be a positive integer");
    return static_cast<int>(n);
}

// Writes the whole file or nothing: content goes to a sibling temp file first.
void write_file(const std::string& path, const std::string& content)
{
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw RuntimeFailure("cannot write '" + path + "'");
        out << content;
        if (!out) throw RuntimeFailure("write failed for '" + path + "'");
    }
    fs::rename(tmp, target);
}

template <typename Writer>
std::string render(Writer&& w)
{
    std::ostringstream s;
    w(s);
    return s.str();
}

nlohmann::json vector_json(const Vector& v)
{
    nlohmann::json a = nlohmann::json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

std::vector<double> parse_list(const std::string& text)
{
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double x = 0.0;
        try {
            x = std::stod(item, &used);
        } catch (const std::exception&) {
            throw ConfigError("cannot parse number '" + item + "'");
        }
        if (used != item.size()) throw ConfigError("cannot parse number '" + item + "'");
        out.push_back(x);
    }
    if (out.empty()) throw ConfigError("empty list");
    return out;
}

// ---------------------------------------------------------------------------

struct RunArgs {
    std::string config;
    std::string method;
    std::uint64_t macro_rep = 0;
};

int cmd_run(const RunArgs& args)
{
    const ExperimentConfig cfg = load_experiment_config(args.config);
    const RunConfig* method = &cfg.methods.front();
    if (!args.method.empty()) {
        method = nullptr;
        for (const RunConfig& m : cfg.methods) {
            if (m.name == args.method) method = &m;
        }
        if (!method) throw ConfigError("no method named '" + args.method + "'");
    }
    const std::string trace_path = cfg.output.trace_csv.empty() ? "trace.csv" : cfg.output.trace_csv;
    const std::string summary_path = cfg.output.summary_json.empty() ? "summary.json" : cfg.output.summary_json;

    const auto start = std::chrono::steady_clock::now();
    CalibrationTrace trace;
    try {
        trace = run_calibration(make_factory(cfg), *method, args.macro_rep);
    } catch (const std::exception& e) {
        throw RuntimeFailure(e.what());
    }
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    const TraceRecord& last = trace.records.back();
    nlohmann::json summary = {
        {"problem", cfg.problem},
        {"method", method->name},
        {"seed", cfg.seed},
        {"macro_rep", args.macro_rep},
        {"iterations", last.iter},
        {"recommendation", vector_json(last.recommended)},
        {"post_mean", last.post_mean},
        {"post_ci_half", last.post_ci_half},
        {"wall_time_s", wall},
    };
    write_file(trace_path, render([&](std::ostream& o) { write_trace_csv(o, trace); }));
    write_file(summary_path, summary.dump(2) + "\n");
    std::cout << method->name << ": recommendation " << vector_json(last.recommended).dump() << ", post_mean "
              << format_double(last.post_mean) << " +/- " << format_double(last.post_ci_half) << "\n";
    return kOk;
}

// ---------------------------------------------------------------------------

struct SweepArgs {
    std::string config;
    int macro_reps = 0;
};

int cmd_sweep(const SweepArgs& args)
{
    const ExperimentConfig cfg = load_experiment_config(args.config);
    const int workers = workers_from_env();
    const int reps = args.macro_reps > 0 ? args.macro_reps : cfg.macro_reps;
    const std::string long_path = cfg.output.long_csv.empty() ? "sweep_long.csv" : cfg.output.long_csv;
    const std::string agg_path = cfg.output.aggregate_csv.empty() ? "sweep_aggregate.csv" : cfg.output.aggregate_csv;

    SweepResult result;
    try {
        result = macro_sweep(cfg.methods, reps, make_factory(cfg), workers);
    } catch (const std::exception& e) {
        throw RuntimeFailure(e.what());
    }
    for (const SweepRun& run : result.runs) {
        if (!run.ok) {
            std::cerr << "warning: " << result.methods[run.method].name << " macro_rep " << run.macro_rep
                      << " failed: " << run.error << "\n";
        }
    }
    write_file(long_path, render([&](std::ostream& o) { write_sweep_long_csv(o, result); }));
    write_file(agg_path, render([&](std::ostream& o) { write_sweep_aggregate_csv(o, result); }));
    std::cout << result.runs.size() - static_cast<std::size_t>(result.failed) << " runs completed, " << result.failed
              << " failed\n";
    return result.failed == static_cast<int>(result.runs.size()) ? kRuntime : kOk;
}

// ---------------------------------------------------------------------------

struct ValidateArgs {
    int cases = 100;
    std::uint64_t seed = 0;
    double step = 1e-5;
    double tolerance = 1e-4;
    bool corrupt = false;
};

int cmd_validate(const ValidateArgs& args)
{
    if (args.cases < 1) throw ConfigError("--cases must be at least 1");
    const GradientReport report = validate_gradients(args.cases, args.seed, args.step, args.corrupt);
    const auto kinds = all_acquisitions();
    std::cout << "cases " << report.cases << "\n";
    bool ok = true;
    for (std::size_t k = 0; k < kinds.size(); ++k) {
        const bool pass = report.max_deviation[k] <= args.tolerance;
        ok = ok && pass;
        std::cout << kinds[k].name() << " max_abs_dev " << format_double(report.max_deviation[k])
                  << (pass ? " ok" : " FAIL") << "\n";
    }
    if (!ok) {
        std::cerr << "gradient validation failed: deviation above " << format_double(args.tolerance) << "\n";
        return kValidation;
    }
    return kOk;
}

// ---------------------------------------------------------------------------

struct RootlessArgs {
    double eps = 0.1;
    std::string design_sizes = "3,5,7,9,11,13,15,17,19,21";
    std::uint64_t seed = 0;
    int seeds = 100;
    std::string out = "rootless.csv";
    std::string summary_out;
    std::string regime = "auto";
};

int cmd_rootless(const RootlessArgs& args)
{
    if (!(args.eps > 0.0)) throw ConfigError("--eps must be positive");
    if (args.seeds < 1) throw ConfigError("--seeds must be at least 1");
    RootlessConfig cfg;
    cfg.eps = args.eps;
    cfg.seed = args.seed;
    cfg.seeds = args.seeds;
    cfg.design_sizes.clear();
    for (double d : parse_list(args.design_sizes)) {
        if (d < 2 || d != static_cast<int>(d)) throw ConfigError("design sizes must be integers >= 2");
        cfg.design_sizes.push_back(static_cast<int>(d));
    }
    if (args.regime == "small") cfg.small_regime = true;
    else if (args.regime == "large") cfg.small_regime = false;
    else if (args.regime != "auto") throw ConfigError("--regime must be auto, small or large");

    RootlessResult result;
    try {
        result = rootless_study(cfg);
    } catch (const std::exception& e) {
        throw RuntimeFailure(e.what());
    }
    write_file(args.out, render([&](std::ostream& o) { write_rootless_csv(o, result); }));
    if (!args.summary_out.empty()) {
        write_file(args.summary_out, render([&](std::ostream& o) { write_rootless_summary_csv(o, result); }));
    }
    write_rootless_summary_csv(std::cout, result);
    return kOk;
}

// ---------------------------------------------------------------------------

struct DiagnoseArgs {
    std::string config;
    std::string theta;
    int reps = 1000;
    std::uint64_t macro_rep = 0;
};

int cmd_diagnose(const DiagnoseArgs& args)
{
    const ExperimentConfig cfg = load_experiment_config(args.config);
    if (args.reps < 1) throw ConfigError("--reps must be at least 1");
    const std::vector<double> values = parse_list(args.theta);
    RngStream macro(cfg.seed, args.macro_rep);
    RngStream obs = macro.substream({kKeyObservation});
    const auto model = make_factory(cfg)(obs);
    if (values.size() != model->box().dim()) throw ConfigError("--theta has the wrong dimension for this problem");
    DesignPoint theta = Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));

    GapReport r;
    try {
        r = diagnose_point(*model, theta, args.reps, macro.substream({kKeyPostEvaluate}));
    } catch (const std::exception& e) {
        throw RuntimeFailure(e.what());
    }
    nlohmann::json out = {
        {"problem", cfg.problem},
        {"theta", values},
        {"reps", args.reps},
        {"spatial_variability", r.spatial_variability},
        {"aggregate_variance", r.aggregate_variance ? nlohmann::json(*r.aggregate_variance) : nlohmann::json()},
        {"mean_squared_norm", r.mean_squared_norm},
        {"mean_squared_aggregate", r.mean_squared_aggregate},
        {"squared_mean_aggregate", r.squared_mean_aggregate},
        {"ordered", r.ordered},
    };
    std::cout << out.dump(2) << "\n";
    return kOk;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Root-finding calibration of stochastic computer models"};
    app.require_subcommand(1);

    RunArgs run_args;
    auto* run = app.add_subcommand("run", "single calibration run; writes trace CSV and JSON summary");
    run->add_option("config", run_args.config, "experiment config (JSON)")->required();
    run->add_option("--method", run_args.method, "method name (default: first in config)");
    run->add_option("--macro-rep", run_args.macro_rep, "macro replication index");

    SweepArgs sweep_args;
    auto* sweep = app.add_subcommand("sweep", "macro replications of every method; worker count from RFCAL_WORKERS");
    sweep->add_option("config", sweep_args.config, "experiment config (JSON)")->required();
    sweep->add_option("--macro-reps", sweep_args.macro_reps, "override macro_reps from the config");

    ValidateArgs validate_args;
    auto* validate = app.add_subcommand("validate", "analytical vs finite-difference acquisition gradients");
    validate->add_option("--cases", validate_args.cases, "random cases")->capture_default_str();
    validate->add_option("--seed", validate_args.seed, "seed")->capture_default_str();
    validate->add_option("--step", validate_args.step, "central difference step")->capture_default_str();
    validate->add_option("--tolerance", validate_args.tolerance, "max allowed deviation")->capture_default_str();
    validate->add_flag("--corrupt-gradient", validate_args.corrupt)->group("");

    RootlessArgs rootless_args;
    auto* rootless = app.add_subcommand("rootless", "RF vs standard acquisitions on theta^2 + eps");
    rootless->add_option("--eps", rootless_args.eps, "offset eps > 0")->capture_default_str();
    rootless->add_option("--design-sizes", rootless_args.design_sizes, "comma-separated list")->capture_default_str();
    rootless->add_option("--seed", rootless_args.seed, "seed")->capture_default_str();
    rootless->add_option("--seeds", rootless_args.seeds, "seeds per design size")->capture_default_str();
    rootless->add_option("--out", rootless_args.out, "per-case CSV")->capture_default_str();
    rootless->add_option("--summary-out", rootless_args.summary_out, "per-size averages CSV");
    rootless->add_option("--regime", rootless_args.regime, "auto | small | large")->capture_default_str();

    DiagnoseArgs diagnose_args;
    auto* diagnose = app.add_subcommand("diagnose", "surrogate-gap quantities at one theta");
    diagnose->add_option("config", diagnose_args.config, "experiment config (JSON)")->required();
    diagnose->add_option("--theta", diagnose_args.theta, "comma-separated parameter vector")->required();
    diagnose->add_option("--reps", diagnose_args.reps, "replications")->capture_default_str();
    diagnose->add_option("--macro-rep", diagnose_args.macro_rep, "macro replication (observed data)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfig;
    }

    try {
        if (*run) return cmd_run(run_args);
        if (*sweep) return cmd_sweep(sweep_args);
        if (*validate) return cmd_validate(validate_args);
        if (*rootless) return cmd_rootless(rootless_args);
        if (*diagnose) return cmd_diagnose(diagnose_args);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kRuntime;
    }
    return kOk;
}
