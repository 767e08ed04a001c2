#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "rfcal/core.hpp"
#include "rfcal/metamodel.hpp"

namespace rfcal {

enum class AcqFamily { LCB, PI, EI };
enum class ObjectiveMode { MIN, ROOT };
enum class SurrogateMode { Deterministic, Stochastic };

/// Which acquisition to score: family x objective mode. `kappa` is only
/// read by the LCB family.
struct AcqKind {
    AcqFamily family = AcqFamily::EI;
    ObjectiveMode mode = ObjectiveMode::ROOT;
    double kappa = 1.0;

    /// LCB variants are minimized, PI/EI variants maximized.
    bool maximize() const { return family != AcqFamily::LCB; }
    std::string name() const;
};

/// Current best value. For ROOT mode `value` keeps its sign; the
/// criteria use its magnitude.
struct Incumbent {
    std::size_t index = 0;
    double value = 0.0;
};

class DegenerateStdError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Standard normal CDF via erfc, and density.
double normal_cdf(double x);
double normal_pdf(double x);

/// Incumbent rules:
///   deterministic MIN   argmin of observed targets
///   deterministic ROOT  argmin |observed target|, signed value
///   stochastic MIN      argmin posterior mean over the design
///   stochastic ROOT     argmin mean^2 + var over the design, value = mean
/// Ties go to the lowest index.
Incumbent select_incumbent(const GpModel& model, ObjectiveMode mode, SurrogateMode surrogate);

double lcb(const Posterior& post, double kappa);
double rf_lcb(const Posterior& post, double kappa);
double pi(const Posterior& post, const Incumbent& inc);
double rf_pi(const Posterior& post, const Incumbent& inc);
double ei(const Posterior& post, const Incumbent& inc);
double rf_ei(const Posterior& post, const Incumbent& inc);

/// Dispatches to one of the six criteria above.
double acq_value(const AcqKind& kind, const Posterior& post, const Incumbent& inc);

/// Analytical gradient of `acq_value` with respect to theta, assembled from
/// the posterior mean and std gradients. Throws DegenerateStdError when the
/// posterior std is at or below kStdFloor.
Vector acq_gradient(const AcqKind& kind, const Posterior& post, const PosteriorGrad& grad, const Incumbent& inc);

}  // namespace rfcal
