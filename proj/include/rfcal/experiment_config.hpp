#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rfcal/engine.hpp"
#include "rfcal/simulators.hpp"

namespace rfcal {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct OutputPaths {
    std::string trace_csv;
    std::string summary_json;
    std::string long_csv;
    std::string aggregate_csv;
};

/// Parsed experiment manifest. The schema is described in README.md.
struct ExperimentConfig {
    std::string problem;  // himmelblau2d | mm1 | sir | rootless
    Mm1Params mm1;
    SirParams sir;
    RootlessParams rootless;
    std::vector<RunConfig> methods;
    int macro_reps = 1;
    std::uint64_t seed = 0;
    OutputPaths output;
};

/// Parses and validates a JSON manifest. Unknown keys are rejected.
ExperimentConfig parse_experiment_config(std::string_view text);
ExperimentConfig load_experiment_config(const std::string& path);

ModelFactory make_factory(const ExperimentConfig& config);

}  // namespace rfcal
