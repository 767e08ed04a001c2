#pragma once

#include <ostream>
#include <string>

#include "rfcal/engine.hpp"
#include "rfcal/rootless.hpp"

namespace rfcal {

/// Shortest round-trippable form ("%.17g"); "nan", "inf", "-inf" otherwise.
std::string format_double(double x);

/// iter, theta_1..m, acq_value, box_lo_1..m, box_hi_1..m, rec_1..m,
/// post_mean, post_ci_half. Iteration 0 leaves theta and acq_value as nan.
void write_trace_csv(std::ostream& out, const CalibrationTrace& trace);

/// method, macro_rep, iter, post_mean; successful runs only.
void write_sweep_long_csv(std::ostream& out, const SweepResult& result);

/// method, iter, mean, ci_half, count.
void write_sweep_aggregate_csv(std::ostream& out, const SweepResult& result);

/// design_size, seed, lcb_diff, pi_diff, ei_diff, mean_positive, mu0, sd0.
void write_rootless_csv(std::ostream& out, const RootlessResult& result);

/// design_size, lcb_diff, pi_diff, ei_diff, positive_mean_seeds.
void write_rootless_summary_csv(std::ostream& out, const RootlessResult& result);

}  // namespace rfcal
