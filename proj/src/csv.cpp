#include "rfcal/csv.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

namespace rfcal {

namespace {

void write_columns(std::ostream& out, const char* prefix, std::size_t m)
{
    for (std::size_t i = 1; i <= m; ++i) out << ',' << prefix << i;
}

void write_values(std::ostream& out, const Vector& v)
{
    for (Eigen::Index i = 0; i < v.size(); ++i) out << ',' << format_double(v[i]);
}

}  // namespace

std::string format_double(double x)
{
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_trace_csv(std::ostream& out, const CalibrationTrace& trace)
{
    const std::size_t m = trace.records.empty() ? 0 : static_cast<std::size_t>(trace.records.front().box_lo.size());
    out << "iter";
    write_columns(out, "theta_", m);
    out << ",acq_value";
    write_columns(out, "box_lo_", m);
    write_columns(out, "box_hi_", m);
    write_columns(out, "rec_", m);
    out << ",post_mean,post_ci_half\n";

    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (const TraceRecord& r : trace.records) {
        out << r.iter;
        if (r.evaluated) {
            write_values(out, r.evaluated->theta);
        } else {
            for (std::size_t i = 0; i < m; ++i) out << ',' << format_double(nan);
        }
        out << ',' << format_double(r.acq_value);
        write_values(out, r.box_lo);
        write_values(out, r.box_hi);
        write_values(out, r.recommended);
        out << ',' << format_double(r.post_mean) << ',' << format_double(r.post_ci_half) << '\n';
    }
}

void write_sweep_long_csv(std::ostream& out, const SweepResult& result)
{
    out << "method,macro_rep,iter,post_mean\n";
    for (const SweepRun& run : result.runs) {
        if (!run.ok) continue;
        for (std::size_t t = 0; t < run.post_means.size(); ++t) {
            out << result.methods[run.method].name << ',' << run.macro_rep << ',' << t << ','
                << format_double(run.post_means[t]) << '\n';
        }
    }
}

void write_sweep_aggregate_csv(std::ostream& out, const SweepResult& result)
{
    out << "method,iter,mean,ci_half,count\n";
    for (const SweepAggregate& a : result.aggregate) {
        out << result.methods[a.method].name << ',' << a.iter << ',' << format_double(a.mean) << ','
            << format_double(a.ci_half) << ',' << a.count << '\n';
    }
}

void write_rootless_csv(std::ostream& out, const RootlessResult& result)
{
    out << "design_size,seed,lcb_diff,pi_diff,ei_diff,mean_positive,mu0,sd0\n";
    for (const RootlessCase& c : result.cases) {
        out << c.design_size << ',' << c.seed_index << ',' << format_double(c.lcb_diff) << ','
            << format_double(c.pi_diff) << ',' << format_double(c.ei_diff) << ',' << (c.mean_positive ? 1 : 0) << ','
            << format_double(c.at_optimum.mean) << ',' << format_double(c.at_optimum.std()) << '\n';
    }
}

void write_rootless_summary_csv(std::ostream& out, const RootlessResult& result)
{
    out << "design_size,lcb_diff,pi_diff,ei_diff,positive_mean_seeds\n";
    for (const RootlessSummary& s : result.summary) {
        out << s.design_size << ',' << format_double(s.lcb_diff) << ',' << format_double(s.pi_diff) << ','
            << format_double(s.ei_diff) << ',' << s.positive_mean_seeds << '\n';
    }
}

}  // namespace rfcal
