#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace rfcal {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// A parameter configuration, in model-parameter units unless a function
/// says it works on unit-cube coordinates.
using DesignPoint = Eigen::VectorXd;

class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Compact hyperrectangular search domain.
class ParameterBox {
public:
    ParameterBox(std::vector<double> lower, std::vector<double> upper);

    std::size_t dim() const { return lower_.size(); }
    const std::vector<double>& lower() const { return lower_; }
    const std::vector<double>& upper() const { return upper_; }
    double width(std::size_t axis) const { return upper_[axis] - lower_[axis]; }

    /// Inclusive componentwise containment, with an absolute slack.
    bool contains(const DesignPoint& theta, double slack = 0.0) const;

    /// Affine map onto [0, 1]^m and back.
    DesignPoint to_unit(const DesignPoint& theta) const;
    DesignPoint from_unit(const DesignPoint& unit) const;

    /// Clamps each coordinate into the box.
    DesignPoint clamp(const DesignPoint& theta) const;

    bool operator==(const ParameterBox&) const = default;

private:
    std::vector<double> lower_;
    std::vector<double> upper_;
};

/// One realization r_(j)(theta) of the residual vector.
struct ResidualSample {
    std::vector<double> components;

    std::size_t size() const { return components.size(); }
};

/// Replication summary at one design point.
struct ObservationSummary {
    DesignPoint theta;
    double signed_mean = 0.0;
    double squared_mean = 0.0;
    double signed_noise_var = 0.0;
    double squared_noise_var = 0.0;
    int reps = 0;
};

/// Seeded, splittable random stream. Equal (seed, stream_id) pairs produce
/// equal draw sequences.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_id_; }

    /// Derives an independent child stream keyed by `keys`. Does not advance
    /// this stream.
    RngStream substream(std::initializer_list<std::uint64_t> keys) const;

    double uniform();                   // [0, 1)
    double uniform(double lo, double hi);
    double normal();                    // N(0, 1)
    double exponential(double rate);
    bool bernoulli(double p);
    /// Uniform integer in [0, n).
    std::size_t index(std::size_t n);

    std::mt19937_64& engine() { return engine_; }

private:
    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::mt19937_64 engine_;
};

/// (1/m_y) * sum of components.
double aggregate_signed(const ResidualSample& sample);

/// (1/m_y) * sum of squared components.
double aggregate_squared(const ResidualSample& sample);

/// Replication means plus the n(n-1)-normalized variance of each mean.
/// The variances are 0 for a single replication.
ObservationSummary summarize(const DesignPoint& theta, std::span<const ResidualSample> samples);

}  // namespace rfcal
