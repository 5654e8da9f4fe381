#pragma once

#include <Eigen/Dense>

#include <string>
#include <string_view>

namespace kpls {

enum class KernelKind { gaussian, triangular, epanechnikov };

std::string_view to_string(KernelKind kind);
KernelKind kernel_kind_from_string(std::string_view name);

/// A bounded translation-invariant kernel.
///
///   gaussian      k(x,y) = exp(-l |x-y|^2)
///   triangular    k(x,y) = max(0, 1 - sqrt(l) |x-y|)
///   epanechnikov  k(x,y) = max(0, 1 - l |x-y|^2)
///
/// All three are bounded by kappa = 1. Gaussian is positive definite in any
/// dimension and triangular in d = 1; the truncated quadratic is not positive
/// semi-definite in general and is rejected by the Krylov solvers when the
/// resulting matrix has negative curvature.
struct KernelSpec {
    KernelKind kind = KernelKind::gaussian;
    double bandwidth = 1.0;
    double kappa = 1.0;

    static KernelSpec gaussian(double bandwidth) { return {KernelKind::gaussian, bandwidth, 1.0}; }

    /// Throws InputError unless bandwidth and kappa are positive and finite.
    void validate() const;
};

/// Training data: rows of `inputs` are the covariates X_t, `responses` holds y_t.
struct Sample {
    Eigen::MatrixXd inputs;
    Eigen::VectorXd responses;

    Eigen::Index size() const { return inputs.rows(); }
    Eigen::Index dim() const { return inputs.cols(); }

    /// Throws InputError when n < 1, shapes disagree or any entry is non-finite.
    void validate() const;
};

double eval_kernel(const KernelSpec& spec, const Eigen::Ref<const Eigen::VectorXd>& x,
                   const Eigen::Ref<const Eigen::VectorXd>& y);

/// K_n = n^{-1} [k(X_t, X_s)]. The upper triangle is evaluated and mirrored, so
/// the result is exactly symmetric.
Eigen::MatrixXd kernel_matrix(const KernelSpec& spec, const Eigen::MatrixXd& inputs);

/// Unscaled cross-kernel block [k(A_i, B_j)].
Eigen::MatrixXd cross_kernel(const KernelSpec& spec, const Eigen::MatrixXd& a,
                             const Eigen::MatrixXd& b);

}  // namespace kpls
