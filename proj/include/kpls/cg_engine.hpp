#pragma once

#include "kpls/kernels.hpp"

#include <Eigen/Dense>

#include <vector>

namespace kpls {

/// Iterate history of a Krylov-space fit.
///
/// Iterate i (1-based) minimizes <y - K v, K^r (y - K v)> over
/// v in span{y, K y, ..., K^{i-1} y}; r = 0 is kernel PLS, r = 1 kernel CG.
/// Coefficients follow the convention f_alpha = n^{-1} sum_t alpha_t k(., X_t),
/// so the fitted values at the design points are K_n alpha.
struct FitTrace {
    int order_r = 0;
    int max_iter = 0;
    std::vector<Eigen::VectorXd> coefficients;
    /// sqrt(|y - K alpha_i|^2 / n)
    std::vector<double> euclid_residuals;
    /// |S_n f_{alpha_i} - T_n^* y|_H = sqrt((y - K alpha_i)' K (y - K alpha_i) / n)
    std::vector<double> h_residuals;
    /// Residuals of alpha_0 = 0.
    double initial_euclid_residual = 0.0;
    double initial_h_residual = 0.0;
    /// Number of completed iterations; smaller than max_iter when the Krylov
    /// space became numerically invariant.
    int terminated_at = 0;
    bool rank_exhausted = false;

    int iterations() const { return static_cast<int>(coefficients.size()); }
    /// 1-based access to alpha_i.
    const Eigen::VectorXd& alpha(int i) const { return coefficients.at(static_cast<std::size_t>(i - 1)); }

    /// H-norm residuals indexed 0..m, entry 0 belonging to alpha_0 = 0.
    std::vector<double> h_residuals_from_origin() const;
    std::vector<double> euclid_residuals_from_origin() const;
};

/// Relative size of the re-orthogonalized continuation vector (with respect
/// to |y|) below which the Krylov sequence is treated as exhausted. The
/// sequence also stops once that vector drops under sqrt(eps) times the
/// largest Rayleigh quotient of K seen so far.
inline constexpr double kKrylovDegeneracyTolerance = 1e-10;

/// Fit the order-r Krylov estimator up to max_iter iterations.
///
/// Builds an orthonormal Krylov basis with full re-orthogonalization and
/// solves the projected weighted least-squares problem at every step.
/// Throws InputError on shape mismatch, asymmetric K, curvature of K more
/// negative than -1e-10 |K| on the Krylov space, r outside {0,1,2}, or
/// max_iter outside [1, n].
FitTrace fit_krylov(const Eigen::MatrixXd& kernel, const Eigen::VectorXd& y, int order_r,
                    int max_iter);

/// Reference solution for iterate i, computed in quad precision: Arnoldi basis
/// of K_i(K, y) with two Gram-Schmidt passes, then a QR least-squares solve of
/// |W (y - K Q c)| with W = I, L' (K = L L') or K for r = 0, 1, 2.
/// Slow; meant for tests. Throws RankError when the basis degenerates before i.
Eigen::VectorXd krylov_oracle(const Eigen::MatrixXd& kernel, const Eigen::VectorXd& y, int order_r,
                              int i);

/// n^{-1} sum_t alpha_t k(x, X_t)
double predict(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& alpha,
               const KernelSpec& spec, const Eigen::Ref<const Eigen::VectorXd>& x);

/// predict at several points; rows of `points` are evaluation locations.
Eigen::VectorXd predict_batch(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& alpha,
                        const KernelSpec& spec, const Eigen::MatrixXd& points);

/// sqrt((y - K alpha)' K (y - K alpha) / n). Radicands in [-1e-12, 0) are
/// clamped to zero; anything more negative raises NumericalError.
double residual_h_norm(const Eigen::MatrixXd& kernel, const Eigen::VectorXd& y,
                       const Eigen::VectorXd& alpha);

}  // namespace kpls
