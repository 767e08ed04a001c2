#include "rfcal/acquisition.hpp"

#include <cmath>
#include <numbers>

namespace rfcal {

namespace {

bool degenerate(const Posterior& post)
{
    return !(post.std() > kStdFloor);
}

// d/dtheta of (c - mu) / sigma, where z = (c - mu) / sigma.
Vector dz(double z, double sd, const PosteriorGrad& g)
{
    return -(g.dmean + z * g.dstd) / sd;
}

double sign(double x)
{
    return static_cast<double>((x > 0.0) - (x < 0.0));
}

}  // namespace

std::string AcqKind::name() const
{
    std::string base = family == AcqFamily::LCB ? "LCB" : family == AcqFamily::PI ? "PI" : "EI";
    return mode == ObjectiveMode::ROOT ? "RF-" + base : base;
}

double normal_cdf(double x)
{
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double normal_pdf(double x)
{
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

Incumbent select_incumbent(const GpModel& model, ObjectiveMode mode, SurrogateMode surrogate)
{
    const std::size_t n = model.size();
    if (n == 0) throw DimensionError("select_incumbent: empty design");

    Incumbent best;
    double best_score = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double score = 0.0;
        double value = 0.0;
        if (surrogate == SurrogateMode::Deterministic) {
            value = model.targets()[static_cast<Eigen::Index>(i)];
            score = mode == ObjectiveMode::MIN ? value : std::abs(value);
        } else {
            const Posterior post = model.posterior(model.design()[i]);
            value = post.mean;
            score = mode == ObjectiveMode::MIN ? post.mean : post.mean * post.mean + post.var;
        }
        if (i == 0 || score < best_score) {
            best_score = score;
            best = {i, value};
        }
    }
    return best;
}

double lcb(const Posterior& post, double kappa)
{
    return post.mean - kappa * post.std();
}

double rf_lcb(const Posterior& post, double kappa)
{
    return std::abs(post.mean) - kappa * post.std();
}

double pi(const Posterior& post, const Incumbent& inc)
{
    if (degenerate(post)) return post.mean < inc.value ? 1.0 : 0.0;
    return normal_cdf((inc.value - post.mean) / post.std());
}

double rf_pi(const Posterior& post, const Incumbent& inc)
{
    const double v = std::abs(inc.value);
    if (degenerate(post)) return std::abs(post.mean) < v ? 1.0 : 0.0;
    const double sd = post.std();
    return normal_cdf((v - post.mean) / sd) - normal_cdf((-v - post.mean) / sd);
}

double ei(const Posterior& post, const Incumbent& inc)
{
    const double gap = inc.value - post.mean;
    if (degenerate(post)) return std::max(0.0, gap);
    const double sd = post.std();
    const double z = gap / sd;
    return gap * normal_cdf(z) + sd * normal_pdf(z);
}

double rf_ei(const Posterior& post, const Incumbent& inc)
{
    const double v = std::abs(inc.value);
    const double mu = post.mean;
    if (degenerate(post)) return std::max(0.0, v - std::abs(mu));
    const double sd = post.std();
    const double z_lo = (-v - mu) / sd;
    const double z_mid = -mu / sd;
    const double z_hi = (v - mu) / sd;
    return v * (normal_cdf(z_hi) - normal_cdf(z_lo))
           + mu * (2.0 * normal_cdf(z_mid) - normal_cdf(z_hi) - normal_cdf(z_lo))
           - sd * (2.0 * normal_pdf(z_mid) - normal_pdf(z_hi) - normal_pdf(z_lo));
}

double acq_value(const AcqKind& kind, const Posterior& post, const Incumbent& inc)
{
    const bool root = kind.mode == ObjectiveMode::ROOT;
    switch (kind.family) {
    case AcqFamily::LCB:
        return root ? rf_lcb(post, kind.kappa) : lcb(post, kind.kappa);
    case AcqFamily::PI:
        return root ? rf_pi(post, inc) : pi(post, inc);
    case AcqFamily::EI:
        return root ? rf_ei(post, inc) : ei(post, inc);
    }
    return 0.0;
}

Vector acq_gradient(const AcqKind& kind, const Posterior& post, const PosteriorGrad& g, const Incumbent& inc)
{
    if (degenerate(post)) throw DegenerateStdError("acq_gradient: posterior std below the degeneracy floor");
    const double mu = post.mean;
    const double sd = post.std();
    const bool root = kind.mode == ObjectiveMode::ROOT;

    if (kind.family == AcqFamily::LCB) {
        return (root ? sign(mu) : 1.0) * g.dmean - kind.kappa * g.dstd;
    }

    if (!root) {
        const double z = (inc.value - mu) / sd;
        if (kind.family == AcqFamily::PI) return normal_pdf(z) * dz(z, sd, g);
        return -normal_cdf(z) * g.dmean + normal_pdf(z) * g.dstd;
    }

    const double v = std::abs(inc.value);
    const double z_lo = (-v - mu) / sd;
    const double z_mid = -mu / sd;
    const double z_hi = (v - mu) / sd;
    const Vector dz_lo = dz(z_lo, sd, g);
    const Vector dz_mid = dz(z_mid, sd, g);
    const Vector dz_hi = dz(z_hi, sd, g);
    const double p_lo = normal_pdf(z_lo);
    const double p_mid = normal_pdf(z_mid);
    const double p_hi = normal_pdf(z_hi);

    if (kind.family == AcqFamily::PI) return p_hi * dz_hi - p_lo * dz_lo;

    const double c_lo = normal_cdf(z_lo);
    const double c_mid = normal_cdf(z_mid);
    const double c_hi = normal_cdf(z_hi);
    return v * (p_hi * dz_hi - p_lo * dz_lo)
           + g.dmean * (2.0 * c_mid - c_hi - c_lo)
           + mu * (2.0 * p_mid * dz_mid - p_hi * dz_hi - p_lo * dz_lo)
           - g.dstd * (2.0 * p_mid - p_hi - p_lo)
           - sd * (-2.0 * z_mid * p_mid * dz_mid + z_lo * p_lo * dz_lo + z_hi * p_hi * dz_hi);
}

}  // namespace rfcal
