#pragma once

#include <span>

#include "rfcal/core.hpp"

namespace rfcal {

/// Squared-exponential kernel hyperparameters. The kernel has unit signal
/// amplitude.
struct KernelParams {
    double lengthscale = 1.0;
    double jitter = 1e-10;
};

/// exp(-|a-b|^2 / (2 l^2))
double rbf(const DesignPoint& a, const DesignPoint& b, const KernelParams& params);

/// Entry (i, j) is rbf(A[i], B[j]). No jitter is added here.
Matrix kernel_matrix(std::span<const DesignPoint> A, std::span<const DesignPoint> B, const KernelParams& params);

/// Row vector k(theta, design) as a column vector of length design.size().
Vector kernel_vector(const DesignPoint& theta, std::span<const DesignPoint> design, const KernelParams& params);

/// Jacobian of k(theta, design) with respect to theta: an m x n matrix whose
/// column i is -(theta - design[i]) k(theta, design[i]) / l^2.
Matrix kernel_vector_grad(const DesignPoint& theta, std::span<const DesignPoint> design, const KernelParams& params);

}  // namespace rfcal
