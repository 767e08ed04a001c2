#include "rfcal/metamodel.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace rfcal {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_inputs(std::span<const DesignPoint> design, const Vector& targets, const Vector& noise_diag)
{
    if (design.empty()) throw DimensionError("metamodel: empty design");
    const auto n = static_cast<Eigen::Index>(design.size());
    if (targets.size() != n || noise_diag.size() != n) {
        throw DimensionError("metamodel: targets and noise diagonal must match the design size");
    }
    for (const auto& p : design) {
        if (p.size() != design.front().size()) throw DimensionError("metamodel: design points differ in dimension");
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!std::isfinite(targets[i])) throw ModelFitError("metamodel: non-finite target");
        if (!(noise_diag[i] >= 0.0) || !std::isfinite(noise_diag[i])) {
            throw ModelFitError("metamodel: noise variances must be finite and non-negative");
        }
    }
}

// Factorizes K + diag(noise) + jitter I, escalating jitter tenfold on
// failure. Returns the jitter that worked, or nothing.
std::optional<double> factorize(const Matrix& K, const Vector& noise, double jitter, Eigen::LLT<Matrix>& llt)
{
    double j = jitter;
    while (true) {
        Matrix A = K;
        A.diagonal() += noise;
        A.diagonal().array() += j;
        llt.compute(A);
        if (llt.info() == Eigen::Success) return j;
        if (j >= kMaxJitter) return std::nullopt;
        j = (j <= 0.0) ? 1e-12 : std::min(j * 10.0, kMaxJitter);
    }
}

double lml_from_factor(const Eigen::LLT<Matrix>& llt, const Vector& targets)
{
    const Vector alpha = llt.solve(targets);
    const double log_det = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
    const double n = static_cast<double>(targets.size());
    return -0.5 * targets.dot(alpha) - 0.5 * log_det - 0.5 * n * std::log(2.0 * std::numbers::pi);
}

}  // namespace

double Posterior::std() const
{
    return std::sqrt(std::max(var, 0.0));
}

double log_marginal_likelihood(std::span<const DesignPoint> design, const Vector& targets,
                               const Vector& noise_diag, double lengthscale, double jitter)
{
    check_inputs(design, targets, noise_diag);
    const Matrix K = kernel_matrix(design, design, {lengthscale, jitter});
    Eigen::LLT<Matrix> llt;
    if (!factorize(K, noise_diag, jitter, llt)) return kNegInf;
    const double value = lml_from_factor(llt, targets);
    return std::isfinite(value) ? value : kNegInf;
}

GpModel::GpModel(std::vector<DesignPoint> design, Vector targets, Vector noise_diag, KernelParams params)
    : design_(std::move(design)), targets_(std::move(targets)), noise_(std::move(noise_diag)), params_(params)
{
    check_inputs(design_, targets_, noise_);
    if (!(params_.lengthscale > 0.0)) throw ModelFitError("metamodel: length-scale must be positive");
    const Matrix K = kernel_matrix(design_, design_, params_);
    const auto used = factorize(K, noise_, params_.jitter, llt_);
    if (!used) throw ModelFitError("metamodel: kernel system is not positive definite after jitter escalation");
    params_.jitter = *used;
    alpha_ = llt_.solve(targets_);
    lml_ = lml_from_factor(llt_, targets_);
}

GpModel GpModel::fit(std::vector<DesignPoint> design, Vector targets, Vector noise_diag,
                     LengthscaleBounds bounds, double jitter)
{
    if (design.size() < 2) throw ModelFitError("fit: at least two design points are required");
    check_inputs(design, targets, noise_diag);
    if (!(bounds.lo > 0.0 && bounds.lo < bounds.hi)) throw ModelFitError("fit: invalid length-scale bounds");

    const double log_lo = std::log(bounds.lo);
    const double log_hi = std::log(bounds.hi);
    auto objective = [&](double log_l) {
        return rfcal::log_marginal_likelihood(design, targets, noise_diag, std::exp(log_l), jitter);
    };

    constexpr int kGrid = 50;
    std::vector<double> grid(kGrid), values(kGrid);
    int best = -1;
    for (int i = 0; i < kGrid; ++i) {
        grid[i] = log_lo + (log_hi - log_lo) * i / (kGrid - 1);
        values[i] = objective(grid[i]);
        if (values[i] > kNegInf && (best < 0 || values[i] > values[best])) best = i;
    }
    if (best < 0) throw ModelFitError("fit: log marginal likelihood is undefined at every grid length-scale");

    // Golden-section maximization in log l over the bracketing grid cell.
    double a = grid[std::max(best - 1, 0)];
    double b = grid[std::min(best + 1, kGrid - 1)];
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = objective(c);
    double fd = objective(d);
    // Relative tolerance 1e-4 on l is an absolute tolerance ~1e-4 on log l.
    while (b - a > 1e-4) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = objective(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = objective(d);
        }
    }
    double log_l = grid[best];
    double best_value = values[best];
    const double mid = 0.5 * (a + b);
    const double f_mid = objective(mid);
    if (f_mid > best_value) {
        log_l = mid;
        best_value = f_mid;
    }

    return GpModel(std::move(design), std::move(targets), std::move(noise_diag), {std::exp(log_l), jitter});
}

Matrix GpModel::system_matrix() const
{
    Matrix A = kernel_matrix(design_, design_, params_);
    A.diagonal() += noise_;
    A.diagonal().array() += params_.jitter;
    return A;
}

Matrix GpModel::lower_factor() const
{
    return llt_.matrixL().toDenseMatrix();
}

Posterior GpModel::posterior(const DesignPoint& theta) const
{
    return evaluate_posterior(theta).first;
}

std::optional<PosteriorGrad> GpModel::posterior_grad(const DesignPoint& theta) const
{
    return evaluate(theta).second;
}

std::pair<Posterior, Vector> GpModel::evaluate_posterior(const DesignPoint& theta) const
{
    if (static_cast<std::size_t>(theta.size()) != dim()) throw DimensionError("posterior: dimension mismatch");
    const Vector k = kernel_vector(theta, design_, params_);
    Vector w = llt_.solve(k);
    Posterior post;
    post.mean = k.dot(alpha_);
    post.var = std::max(1.0 - k.dot(w), 0.0);
    return {post, std::move(w)};
}

std::pair<Posterior, std::optional<PosteriorGrad>> GpModel::evaluate(const DesignPoint& theta) const
{
    const auto [post, w] = evaluate_posterior(theta);

    const double sd = post.std();
    if (!(sd > kStdFloor)) return {post, std::nullopt};

    const Matrix dk = kernel_vector_grad(theta, design_, params_);
    PosteriorGrad grad;
    grad.dmean = dk * alpha_;
    // d(sigma^2) = -2 dk (K+S)^-1 k by symmetry of the two cross terms.
    grad.dstd = -(dk * w) / sd;
    return {post, grad};
}

}  // namespace rfcal
