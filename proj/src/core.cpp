#include "rfcal/core.hpp"

#include <algorithm>
#include <cmath>

namespace rfcal {

namespace {

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t mix(std::uint64_t a, std::uint64_t b)
{
    return splitmix64(a ^ splitmix64(b + 0x632be59bd9b4e019ULL));
}

}  // namespace

ParameterBox::ParameterBox(std::vector<double> lower, std::vector<double> upper)
    : lower_(std::move(lower)), upper_(std::move(upper))
{
    if (lower_.empty() || lower_.size() != upper_.size()) {
        throw DimensionError("ParameterBox: bounds must be non-empty and of equal length");
    }
    for (std::size_t i = 0; i < lower_.size(); ++i) {
        if (!(lower_[i] < upper_[i])) {
            throw std::invalid_argument("ParameterBox: lower bound must be below upper bound on every axis");
        }
    }
}

bool ParameterBox::contains(const DesignPoint& theta, double slack) const
{
    if (static_cast<std::size_t>(theta.size()) != dim()) return false;
    for (std::size_t i = 0; i < dim(); ++i) {
        if (theta[i] < lower_[i] - slack || theta[i] > upper_[i] + slack) return false;
    }
    return true;
}

DesignPoint ParameterBox::to_unit(const DesignPoint& theta) const
{
    if (static_cast<std::size_t>(theta.size()) != dim()) throw DimensionError("to_unit: dimension mismatch");
    DesignPoint u(dim());
    for (std::size_t i = 0; i < dim(); ++i) u[i] = (theta[i] - lower_[i]) / width(i);
    return u;
}

DesignPoint ParameterBox::from_unit(const DesignPoint& unit) const
{
    if (static_cast<std::size_t>(unit.size()) != dim()) throw DimensionError("from_unit: dimension mismatch");
    DesignPoint theta(dim());
    for (std::size_t i = 0; i < dim(); ++i) theta[i] = lower_[i] + unit[i] * width(i);
    return theta;
}

DesignPoint ParameterBox::clamp(const DesignPoint& theta) const
{
    DesignPoint out = theta;
    for (std::size_t i = 0; i < dim(); ++i) out[i] = std::clamp(out[i], lower_[i], upper_[i]);
    return out;
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id), engine_(mix(seed, stream_id))
{
}

RngStream RngStream::substream(std::initializer_list<std::uint64_t> keys) const
{
    std::uint64_t id = splitmix64(stream_id_ ^ 0x5851f42d4c957f2dULL);
    for (std::uint64_t k : keys) id = mix(id, k);
    return RngStream(seed_, id);
}

double RngStream::uniform()
{
    return std::uniform_real_distribution<double>(0.0, 1.0)(engine_);
}

double RngStream::uniform(double lo, double hi)
{
    return lo + (hi - lo) * uniform();
}

double RngStream::normal()
{
    return std::normal_distribution<double>(0.0, 1.0)(engine_);
}

double RngStream::exponential(double rate)
{
    return std::exponential_distribution<double>(rate)(engine_);
}

bool RngStream::bernoulli(double p)
{
    return uniform() < p;
}

std::size_t RngStream::index(std::size_t n)
{
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
}

double aggregate_signed(const ResidualSample& sample)
{
    if (sample.components.empty()) throw DimensionError("aggregate_signed: empty residual sample");
    double sum = 0.0;
    for (double r : sample.components) sum += r;
    return sum / static_cast<double>(sample.size());
}

double aggregate_squared(const ResidualSample& sample)
{
    if (sample.components.empty()) throw DimensionError("aggregate_squared: empty residual sample");
    double sum = 0.0;
    for (double r : sample.components) sum += r * r;
    return sum / static_cast<double>(sample.size());
}

ObservationSummary summarize(const DesignPoint& theta, std::span<const ResidualSample> samples)
{
    if (samples.empty()) throw DimensionError("summarize: no samples");
    const std::size_t m_y = samples.front().size();
    const auto n = samples.size();

    std::vector<double> s(n), q(n);
    for (std::size_t j = 0; j < n; ++j) {
        if (samples[j].size() != m_y) throw DimensionError("summarize: samples disagree on output dimension");
        s[j] = aggregate_signed(samples[j]);
        q[j] = aggregate_squared(samples[j]);
    }

    auto mean_of = [n](const std::vector<double>& v) {
        double acc = 0.0;
        for (double x : v) acc += x;
        return acc / static_cast<double>(n);
    };
    auto var_of_mean = [n](const std::vector<double>& v, double mean) {
        if (n < 2) return 0.0;
        double acc = 0.0;
        for (double x : v) acc += (x - mean) * (x - mean);
        return acc / (static_cast<double>(n) * static_cast<double>(n - 1));
    };

    ObservationSummary out;
    out.theta = theta;
    out.reps = static_cast<int>(n);
    out.signed_mean = mean_of(s);
    out.squared_mean = mean_of(q);
    out.signed_noise_var = var_of_mean(s, out.signed_mean);
    out.squared_noise_var = var_of_mean(q, out.squared_mean);
    return out;
}

}  // namespace rfcal
