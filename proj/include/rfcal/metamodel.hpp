#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "rfcal/core.hpp"
#include "rfcal/kernel.hpp"

namespace rfcal {

/// Posterior standard deviations at or below this are treated as zero.
inline constexpr double kStdFloor = 1e-9;

/// Largest diagonal jitter tried before a factorization is declared failed.
inline constexpr double kMaxJitter = 1e-4;

class ModelFitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct LengthscaleBounds {
    double lo = 1e-2;
    double hi = 1e2;
};

/// Pointwise predictive distribution N(mean, var).
struct Posterior {
    double mean = 0.0;
    double var = 0.0;

    double std() const;
};

/// Gradients of the predictive mean and standard deviation.
struct PosteriorGrad {
    Vector dmean;
    Vector dstd;
};

/// -1/2 f^T (K+S)^-1 f - 1/2 log det(K+S) - n/2 log(2 pi), where S is the
/// noise diagonal plus jitter. Returns -infinity if no jitter up to
/// kMaxJitter makes the system positive definite.
double log_marginal_likelihood(std::span<const DesignPoint> design, const Vector& targets,
                               const Vector& noise_diag, double lengthscale, double jitter = 1e-10);

/// Zero-mean kriging / stochastic-kriging model with an RBF kernel.
///
/// Stochastic kriging differs from kriging only through a non-zero
/// `noise_diag`; an all-zero diagonal gives the interpolating predictor.
/// The cached Cholesky factor and weights make posterior evaluation O(n^2).
class GpModel {
public:
    /// Builds a model at a fixed length-scale. Jitter is multiplied by 10
    /// on factorization failure, up to kMaxJitter.
    GpModel(std::vector<DesignPoint> design, Vector targets, Vector noise_diag, KernelParams params);

    /// Picks the length-scale maximizing the log marginal likelihood: a
    /// 50-point log-spaced grid over `bounds`, then golden-section
    /// refinement in log l around the best grid value.
    static GpModel fit(std::vector<DesignPoint> design, Vector targets, Vector noise_diag,
                       LengthscaleBounds bounds = {}, double jitter = 1e-10);

    std::size_t size() const { return design_.size(); }
    std::size_t dim() const { return static_cast<std::size_t>(design_.front().size()); }
    const std::vector<DesignPoint>& design() const { return design_; }
    const Vector& targets() const { return targets_; }
    const Vector& noise_diag() const { return noise_; }
    /// (K + S)^-1 y.
    const Vector& weights() const { return alpha_; }
    /// Length-scale and the jitter actually used for the factorization.
    const KernelParams& params() const { return params_; }
    double log_marginal_likelihood() const { return lml_; }

    /// K + Sigma + jitter I, and its lower Cholesky factor.
    Matrix system_matrix() const;
    Matrix lower_factor() const;

    Posterior posterior(const DesignPoint& theta) const;

    /// Empty when the posterior std is at or below kStdFloor.
    std::optional<PosteriorGrad> posterior_grad(const DesignPoint& theta) const;

    /// Posterior and gradient in one pass.
    std::pair<Posterior, std::optional<PosteriorGrad>> evaluate(const DesignPoint& theta) const;

private:
    // Posterior plus the weights (K+S)^-1 k(theta).
    std::pair<Posterior, Vector> evaluate_posterior(const DesignPoint& theta) const;

    std::vector<DesignPoint> design_;
    Vector targets_;
    Vector noise_;
    KernelParams params_;
    Eigen::LLT<Matrix> llt_;
    Vector alpha_;
    double lml_ = 0.0;
};

}  // namespace rfcal
