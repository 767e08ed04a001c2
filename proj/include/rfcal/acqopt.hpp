#pragma once

#include <functional>
#include <optional>
#include <stdexcept>

#include "rfcal/core.hpp"

namespace rfcal {

class OptimizationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct OptimizerConfig {
    int starts = 10;
    int iters = 10;
    double initial_step = 1.0;
    double shrink = 0.5;
    double sufficient_decrease = 1e-4;
    double convergence_tol = 1e-8;  // projected-gradient norm
    int memory = 5;
    int max_backtracks = 40;
};

/// Objective value with an optional gradient. A missing gradient ends the
/// local search at that point.
struct ObjectiveEval {
    double value = 0.0;
    std::optional<Vector> gradient;
};

using Objective = std::function<ObjectiveEval(const Vector&)>;

enum class Sense { Minimize, Maximize };

struct OptimResult {
    DesignPoint point;
    double value = 0.0;
};

/// Multi-start projected limited-memory quasi-Newton search over the box
/// [lo, hi] (lo <= hi; degenerate axes allowed). Each start is drawn
/// uniformly from the box and runs at most `cfg.iters` iterations with
/// backtracking on the projected step. Returns the best local result; ties
/// go to the lexicographically smallest point.
OptimResult optimize(const Objective& objective, const Vector& lo, const Vector& hi, Sense sense,
                     const OptimizerConfig& cfg, RngStream& rng);

OptimResult optimize(const Objective& objective, const ParameterBox& box, Sense sense, const OptimizerConfig& cfg,
                     RngStream& rng);

}  // namespace rfcal
