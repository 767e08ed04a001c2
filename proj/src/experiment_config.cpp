#include "rfcal/experiment_config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace rfcal {

namespace {

using nlohmann::json;

void require_object(const json& j, const std::string& where)
{
    if (!j.is_object()) throw ConfigError(where + ": expected an object");
}

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where)
{
    for (const auto& [key, value] : j.items()) {
        if (!allowed.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
    }
}

template <typename T>
void read(const json& j, const char* key, T& out, const std::string& where)
{
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(where + "." + key + ": wrong type");
    }
}

void read_u64(const json& j, const char* key, std::uint64_t& out, const std::string& where)
{
    if (!j.contains(key)) return;
    const json& v = j.at(key);
    if (!v.is_number_integer() || (v.is_number_integer() && v.get<long long>() < 0 && !v.is_number_unsigned())) {
        throw ConfigError(where + "." + key + ": expected a non-negative integer");
    }
    out = v.get<std::uint64_t>();
}

void read_strict_number(const json& j, const char* key, double& out, const std::string& where)
{
    if (!j.contains(key)) return;
    if (!j.at(key).is_number()) throw ConfigError(where + "." + key + ": expected a number");
    out = j.at(key).get<double>();
}

void read_strict_int(const json& j, const char* key, int& out, const std::string& where)
{
    if (!j.contains(key)) return;
    if (!j.at(key).is_number_integer()) throw ConfigError(where + "." + key + ": expected an integer");
    out = j.at(key).get<int>();
}

ObjectiveMode parse_objective(const std::string& s)
{
    if (s == "root") return ObjectiveMode::ROOT;
    if (s == "min") return ObjectiveMode::MIN;
    throw ConfigError("method.objective: expected 'root' or 'min', got '" + s + "'");
}

SurrogateMode parse_surrogate(const std::string& s)
{
    if (s == "stochastic") return SurrogateMode::Stochastic;
    if (s == "deterministic") return SurrogateMode::Deterministic;
    throw ConfigError("method.surrogate: expected 'stochastic' or 'deterministic', got '" + s + "'");
}

AcqFamily parse_family(const std::string& s)
{
    if (s == "lcb") return AcqFamily::LCB;
    if (s == "pi") return AcqFamily::PI;
    if (s == "ei") return AcqFamily::EI;
    throw ConfigError("method.acq: expected 'lcb', 'pi' or 'ei', got '" + s + "'");
}

std::string default_name(const RunConfig& m)
{
    std::string name = m.acq_kind().name();
    name += m.surrogate == SurrogateMode::Stochastic ? "/SK" : "/K";
    if (m.use_rss) name += "/RSS";
    return name;
}

void parse_problem_params(const json& j, ExperimentConfig& cfg)
{
    const std::string where = "problem_params";
    require_object(j, where);
    if (cfg.problem == "himmelblau2d") {
        reject_unknown(j, {}, where);
    } else if (cfg.problem == "mm1") {
        reject_unknown(j, {"service_rate", "arrival_real", "n_entities", "box_lo", "box_hi"}, where);
        read_strict_number(j, "service_rate", cfg.mm1.service_rate, where);
        read_strict_number(j, "arrival_real", cfg.mm1.arrival_real, where);
        read_strict_int(j, "n_entities", cfg.mm1.n_entities, where);
        read_strict_number(j, "box_lo", cfg.mm1.box_lo, where);
        read_strict_number(j, "box_hi", cfg.mm1.box_hi, where);
        if (!(cfg.mm1.service_rate > 0.0 && cfg.mm1.arrival_real > 0.0)) throw ConfigError("mm1: rates must be positive");
        if (cfg.mm1.n_entities < 1) throw ConfigError("mm1: n_entities must be at least 1");
        if (!(cfg.mm1.box_lo > 0.0 && cfg.mm1.box_lo < cfg.mm1.box_hi)) throw ConfigError("mm1: invalid calibration box");
    } else if (cfg.problem == "sir") {
        reject_unknown(j, {"population", "initial_infected", "max_contacts", "recovery_prob", "days", "theta_real"}, where);
        read_strict_int(j, "population", cfg.sir.population, where);
        read_strict_int(j, "initial_infected", cfg.sir.initial_infected, where);
        read_strict_int(j, "max_contacts", cfg.sir.max_contacts, where);
        read_strict_number(j, "recovery_prob", cfg.sir.recovery_prob, where);
        read_strict_int(j, "days", cfg.sir.days, where);
        read_strict_number(j, "theta_real", cfg.sir.theta_real, where);
        if (cfg.sir.population < 1 || cfg.sir.initial_infected < 0 || cfg.sir.initial_infected > cfg.sir.population) {
            throw ConfigError("sir: invalid population settings");
        }
        if (cfg.sir.days < 1 || cfg.sir.max_contacts < 0) throw ConfigError("sir: days and max_contacts out of range");
        if (!(cfg.sir.recovery_prob >= 0.0 && cfg.sir.recovery_prob <= 1.0)) throw ConfigError("sir: recovery_prob must lie in [0, 1]");
        if (!(cfg.sir.theta_real >= 0.0 && cfg.sir.theta_real <= 1.0)) throw ConfigError("sir: theta_real must lie in [0, 1]");
    } else if (cfg.problem == "rootless") {
        reject_unknown(j, {"eps", "noise_sd"}, where);
        read_strict_number(j, "eps", cfg.rootless.eps, where);
        read_strict_number(j, "noise_sd", cfg.rootless.noise_sd, where);
        if (!(cfg.rootless.eps > 0.0)) throw ConfigError("rootless: eps must be positive");
        if (!(cfg.rootless.noise_sd >= 0.0)) throw ConfigError("rootless: noise_sd must be non-negative");
    }
}

}  // namespace

ExperimentConfig parse_experiment_config(std::string_view text)
{
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("malformed JSON: ") + e.what());
    }
    require_object(root, "config");
    reject_unknown(root, {"problem", "problem_params", "protocol", "methods", "macro_reps", "seed", "output"}, "config");

    ExperimentConfig cfg;
    if (!root.contains("problem") || !root.at("problem").is_string()) throw ConfigError("config.problem: required string");
    cfg.problem = root.at("problem").get<std::string>();
    if (cfg.problem != "himmelblau2d" && cfg.problem != "mm1" && cfg.problem != "sir" && cfg.problem != "rootless") {
        throw ConfigError("config.problem: unknown problem '" + cfg.problem + "'");
    }
    if (root.contains("problem_params")) parse_problem_params(root.at("problem_params"), cfg);

    read_strict_int(root, "macro_reps", cfg.macro_reps, "config");
    if (cfg.macro_reps < 1) throw ConfigError("config.macro_reps: must be at least 1");
    read_u64(root, "seed", cfg.seed, "config");

    RunConfig protocol;
    if (root.contains("protocol")) {
        const json& p = root.at("protocol");
        require_object(p, "protocol");
        reject_unknown(p, {"p_init", "budget", "reps_per_point", "alpha", "theta_floor", "post_reps", "starts", "iters"},
                       "protocol");
        read_strict_int(p, "p_init", protocol.p_init, "protocol");
        read_strict_int(p, "budget", protocol.budget, "protocol");
        read_strict_int(p, "reps_per_point", protocol.reps_per_point, "protocol");
        read_strict_number(p, "alpha", protocol.alpha, "protocol");
        read_strict_number(p, "theta_floor", protocol.theta_floor, "protocol");
        read_strict_int(p, "post_reps", protocol.post_reps, "protocol");
        read_strict_int(p, "starts", protocol.optimizer.starts, "protocol");
        read_strict_int(p, "iters", protocol.optimizer.iters, "protocol");
    }
    protocol.seed = cfg.seed;

    if (!root.contains("methods") || !root.at("methods").is_array() || root.at("methods").empty()) {
        throw ConfigError("config.methods: required non-empty array");
    }
    std::set<std::string> names;
    for (const json& m : root.at("methods")) {
        require_object(m, "method");
        reject_unknown(m, {"name", "objective", "surrogate", "acq", "kappa", "rss"}, "method");
        RunConfig run = protocol;
        std::string objective = "root", surrogate = "stochastic", acq = "ei";
        read(m, "objective", objective, "method");
        read(m, "surrogate", surrogate, "method");
        read(m, "acq", acq, "method");
        run.objective = parse_objective(objective);
        run.surrogate = parse_surrogate(surrogate);
        run.family = parse_family(acq);
        read_strict_number(m, "kappa", run.kappa, "method");
        if (m.contains("rss") && !m.at("rss").is_boolean()) throw ConfigError("method.rss: expected a boolean");
        read(m, "rss", run.use_rss, "method");
        read(m, "name", run.name, "method");
        if (run.name.empty()) run.name = default_name(run);
        if (!names.insert(run.name).second) throw ConfigError("method names must be unique: '" + run.name + "'");
        try {
            run.validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError("method '" + run.name + "': " + e.what());
        }
        cfg.methods.push_back(std::move(run));
    }

    if (root.contains("output")) {
        const json& o = root.at("output");
        require_object(o, "output");
        reject_unknown(o, {"trace_csv", "summary_json", "long_csv", "aggregate_csv"}, "output");
        read(o, "trace_csv", cfg.output.trace_csv, "output");
        read(o, "summary_json", cfg.output.summary_json, "output");
        read(o, "long_csv", cfg.output.long_csv, "output");
        read(o, "aggregate_csv", cfg.output.aggregate_csv, "output");
    }
    return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_experiment_config(buf.str());
}

ModelFactory make_factory(const ExperimentConfig& config)
{
    if (config.problem == "himmelblau2d") return himmelblau_factory();
    if (config.problem == "mm1") return mm1_factory(config.mm1);
    if (config.problem == "sir") return sir_factory(config.sir);
    if (config.problem == "rootless") return rootless_factory(config.rootless);
    throw ConfigError("unknown problem '" + config.problem + "'");
}

}  // namespace rfcal
