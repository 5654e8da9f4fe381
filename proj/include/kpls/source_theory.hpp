#pragma once

#include "kpls/gaussian_process.hpp"

#include <vector>

namespace kpls {

/// Target function f(x) = normalization^{-1} sum_i c_i L_mu(x, z_i) for d = 1,
/// Gaussian kernel bandwidth l and design variance sigma2_x.
struct SourceFunctionSpec {
    int mu = 4;
    double bandwidth_l = 2.0;
    double sigma2_x = 4.0;
    std::vector<double> centers;
    std::vector<double> coefficients;
    double normalization = 1.0;

    /// The three-bump target used by the Monte Carlo study:
    /// mu = 4, l = 2, sigma2_x = 4, centers (-4, 3, 9), coefficients
    /// (3, -2, 1.5), normalization 4.37.
    static SourceFunctionSpec simulation_target();

    /// sum_{i,j} c_i c_j k(z_i, z_j) with the Gaussian kernel of bandwidth l.
    double h_norm_proxy() const;
    void validate() const;
};

/// Eigenvalues a b^{i-1} of the Gaussian-kernel covariance operator under a
/// N(0, sigma2_x) design; beta = 4 l sigma2_x.
struct GaussEigenPair {
    double a = 1.0;
    double b = 0.5;
    double beta = 0.0;
};

struct TridiagDeterminants {
    double full = 1.0;     ///< det of the (mu+1) x (mu+1) matrix
    double leading = 1.0;  ///< det of its leading mu x mu block
};

/// Determinants of the tridiagonal matrix with diagonal sigma_x^{-2} + 2l
/// (last entry l) and off-diagonal -l, via d_k = a_k d_{k-1} - l^2 d_{k-2}.
TridiagDeterminants tridiag_dets(int mu, double l, double sigma2_x);

/// exp(-1/2 [det(full) (x^2 + z^2) - 2 l^{mu+1} x z] / det(leading)).
///
/// Up to a positive constant this is mu-fold smoothing of the kernel
/// exp(-(l/2)(x - z)^2) against the N(0, sigma2_x) density. mu = 0 returns
/// the Gaussian kernel exp(-l (x - z)^2) itself.
double l_mu(double x, double z, int mu, double l, double sigma2_x);

double eval_source(const SourceFunctionSpec& spec, double x);

GaussEigenPair gauss_kernel_eigs(double l, double sigma2_x);

/// Partial sum of d_lambda = sum_{i>=0} (1 + lambda / (a b^i))^{-1}, stopped
/// once the geometric tail bound a b^{i+1} / (lambda (1 - b)) drops below tol.
double effective_dim(double lambda, const GaussEigenPair& pair, double tol = 1e-12);

/// D = 2 / log(1/b) * max{1, 1 / log(1 + a)}
double effective_dim_constant(const GaussEigenPair& pair);

/// D log(1 + a / lambda); only valid for lambda in (0, 1].
double effective_dim_bound(double lambda, const GaussEigenPair& pair);

/// Riemann zeta for s > 1 (Euler-Maclaurin with 7 Bernoulli corrections).
double riemann_zeta(double s);

/// C(q): zeta(q) for q > 1, 5 - log 4 for q = 1,
/// 2/(1-q) - 1/(2-q) + 2^{2-q}/(2-q) for q in (0, 1).
double acf_sum_constant(double q);

/// n^{-2} sum_{h=1}^{n-1} (n - h) |rho_h|
double acf_weighted_sum(const AcfSpec& spec, long long n);

/// 1 + (1 - rho^2)^{-d/2} - 2^{d+1} (4 - rho^2)^{-d/2}; requires |rho| < 1.
double theta(double rho, int d);

/// C with theta(rho) <= C rho^2 on [0, rho_star]:
/// d [(1 - rho_star^2)^{-d/2-1} - 2^{d+1} (4 - rho_star^2)^{-d/2-1}].
double theta_quadratic_constant(double rho_star, int d);

/// The two exponent readings of (1 - 4^{-q}) found in the dependence
/// constant: -(d+2)/4 and -(d-2)/4. Neither is preferred.
enum class ExponentConvention { plus_two, minus_two };

/// C(q) {(2 pi)^d det(Sigma)}^{-1/2} kappa d^{1/2} (1 - 4^{-q})^{-(d +/- 2)/4}
double dependence_rate_constant(double q, int d, double det_sigma, double kappa,
                                ExponentConvention convention);

}  // namespace kpls
