#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string_view>
#include <vector>

namespace kpls {

enum class AcfKind { iid, geometric, polynomial };

std::string_view to_string(AcfKind kind);
AcfKind acf_kind_from_string(std::string_view name);

/// Autocorrelation model of a stationary Gaussian input series.
///
/// rho_h is 1{h = 0} (iid), phi^h (geometric) or (1 + h)^{-q} (polynomial).
/// The autocovariance is tau_h = tau0 * rho_h and the marginal variance of a
/// path is tau0 * sigma2 for unit innovations.
struct AcfSpec {
    AcfKind kind = AcfKind::iid;
    double phi = 0.0;  ///< geometric decay, in (0, 1)
    double q = 1.0;    ///< polynomial decay exponent, > 0
    double tau0 = 1.0;
    double sigma2 = 1.0;

    static AcfSpec iid(double sigma2 = 1.0) { return {AcfKind::iid, 0.0, 1.0, 1.0, sigma2}; }
    static AcfSpec geometric(double phi, double sigma2 = 1.0) {
        return {AcfKind::geometric, phi, 1.0, 1.0, sigma2};
    }
    static AcfSpec polynomial(double q, double sigma2 = 1.0) {
        return {AcfKind::polynomial, 0.0, q, 1.0, sigma2};
    }

    /// The kind-specific parameter (0 for iid, phi, or q).
    double parameter() const;
    void validate() const;
};

/// Lower Cholesky factor L of the Toeplitz covariance [tau_{|i-j|}] * sigma2.
struct CovarianceFactor {
    int n = 0;
    Eigen::MatrixXd factor;
    double jitter_used = 0.0;
};

double acf(const AcfSpec& spec, long long h);

/// Retries with diagonal jitter 1e-12, 1e-10, 1e-8 (relative to tau0 * sigma2)
/// and throws SpectrumError carrying the smallest eigenvalue when all fail.
CovarianceFactor covariance_factor(const AcfSpec& spec, int n);

/// Seed of the `index`-th child stream of `master`. SplitMix64 finalizer
/// applied to a counter, so children are independent of evaluation order.
std::uint64_t child_seed(std::uint64_t master, std::uint64_t index);

/// n standard normal draws from a Mersenne twister seeded with `seed`.
Eigen::VectorXd standard_normal(int n, std::uint64_t seed);

/// L z with z = standard_normal(n, seed).
Eigen::VectorXd sample_path(const CovarianceFactor& factor, std::uint64_t seed);

/// Biased sample autocorrelations rho_0 .. rho_max_lag (rho_0 = 1).
std::vector<double> empirical_acf(const Eigen::VectorXd& series, int max_lag);

}  // namespace kpls
