#include "rfcal/kernel.hpp"

#include <cmath>

namespace rfcal {

namespace {

void check_same_dim(const DesignPoint& a, const DesignPoint& b)
{
    if (a.size() != b.size()) throw DimensionError("kernel: points differ in dimension");
}

}  // namespace

double rbf(const DesignPoint& a, const DesignPoint& b, const KernelParams& params)
{
    check_same_dim(a, b);
    const double l2 = params.lengthscale * params.lengthscale;
    return std::exp(-(a - b).squaredNorm() / (2.0 * l2));
}

Matrix kernel_matrix(std::span<const DesignPoint> A, std::span<const DesignPoint> B, const KernelParams& params)
{
    Matrix K(A.size(), B.size());
    for (std::size_t i = 0; i < A.size(); ++i) {
        for (std::size_t j = 0; j < B.size(); ++j) K(i, j) = rbf(A[i], B[j], params);
    }
    return K;
}

Vector kernel_vector(const DesignPoint& theta, std::span<const DesignPoint> design, const KernelParams& params)
{
    Vector k(design.size());
    for (std::size_t i = 0; i < design.size(); ++i) k[i] = rbf(theta, design[i], params);
    return k;
}

Matrix kernel_vector_grad(const DesignPoint& theta, std::span<const DesignPoint> design, const KernelParams& params)
{
    const double inv_l2 = 1.0 / (params.lengthscale * params.lengthscale);
    Matrix J(theta.size(), design.size());
    for (std::size_t i = 0; i < design.size(); ++i) {
        const double k = rbf(theta, design[i], params);
        J.col(i) = -(theta - design[i]) * (k * inv_l2);
    }
    return J;
}

}  // namespace rfcal
