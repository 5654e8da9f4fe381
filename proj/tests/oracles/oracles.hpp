#pragma once

#include <Eigen/Dense>

#include <functional>
#include <random>

namespace oracle {

/// Random symmetric PSD matrix Q diag(eigs) Q' with a Haar-ish Q.
Eigen::MatrixXd random_psd(int n, double min_eig, double max_eig, std::mt19937_64& rng,
                           int rank = -1);

Eigen::VectorXd random_vector(int n, std::mt19937_64& rng);

/// Integral of f against the N(0, sigma2) density by adaptive Gauss-Kronrod
/// over +-14 standard deviations, tolerance 1e-13.
double gaussian_expectation(const std::function<double(double)>& f, double sigma2);

/// mu-fold smoothing int k(x,u_1) k(u_1,u_2) ... k(u_mu,z) dP(u_1)...dP(u_mu)
/// with k(s,t) = exp(-l_kernel (s-t)^2) and P = N(0, sigma2), by nested
/// adaptive quadrature. mu in {1, 2}.
double smoothed_kernel(double x, double z, int mu, double l_kernel, double sigma2);

/// Dense determinant of the tridiagonal matrix with diagonal 1/sigma2 + 2l
/// (last entry l) and off-diagonal -l, size (mu+1), plus its leading block.
std::pair<double, double> dense_tridiag_dets(int mu, double l, double sigma2);

/// Pearson correlation of two equally long samples.
double correlation(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace oracle
