#include "kpls/source_theory.hpp"

#include "kpls/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace kpls {

namespace {

void require_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) throw InputError(std::string(what) + " must be positive");
}

}  // namespace

SourceFunctionSpec SourceFunctionSpec::simulation_target() {
    SourceFunctionSpec s;
    s.mu = 4;
    s.bandwidth_l = 2.0;
    s.sigma2_x = 4.0;
    s.centers = {-4.0, 3.0, 9.0};
    s.coefficients = {3.0, -2.0, 1.5};
    s.normalization = 4.37;
    return s;
}

double SourceFunctionSpec::h_norm_proxy() const {
    double sum = 0.0;
    for (std::size_t i = 0; i < centers.size(); ++i)
        for (std::size_t j = 0; j < centers.size(); ++j) {
            const double d = centers[i] - centers[j];
            sum += coefficients[i] * coefficients[j] * std::exp(-bandwidth_l * d * d);
        }
    return sum;
}

void SourceFunctionSpec::validate() const {
    if (mu < 0) throw InputError("source mu must be non-negative");
    require_positive(bandwidth_l, "source bandwidth_l");
    require_positive(sigma2_x, "source sigma2_x");
    require_positive(normalization, "source normalization");
    if (centers.size() != coefficients.size())
        throw InputError("source centers and coefficients differ in length");
    for (double v : centers)
        if (!std::isfinite(v)) throw InputError("source centers must be finite");
    for (double v : coefficients)
        if (!std::isfinite(v)) throw InputError("source coefficients must be finite");
}

TridiagDeterminants tridiag_dets(int mu, double l, double sigma2_x) {
    if (mu < 1) throw InputError("tridiag_dets: mu must be at least 1");
    require_positive(l, "tridiag_dets: l");
    require_positive(sigma2_x, "tridiag_dets: sigma2_x");

    const double inner = 1.0 / sigma2_x + 2.0 * l;
    double prev = 1.0;   // d_0
    double curr = inner; // d_1
    for (int k = 2; k <= mu; ++k) {
        const double next = inner * curr - l * l * prev;
        prev = curr;
        curr = next;
    }
    // curr = d_mu; the last diagonal entry is l.
    return {l * curr - l * l * prev, curr};
}

double l_mu(double x, double z, int mu, double l, double sigma2_x) {
    if (mu < 0) throw InputError("l_mu: mu must be non-negative");
    if (mu == 0) {
        require_positive(l, "l_mu: l");
        return std::exp(-l * (x - z) * (x - z));
    }
    const TridiagDeterminants dets = tridiag_dets(mu, l, sigma2_x);
    const double cross = 2.0 * std::pow(l, mu + 1) * x * z;
    return std::exp(-0.5 * (dets.full * (x * x + z * z) - cross) / dets.leading);
}

double eval_source(const SourceFunctionSpec& spec, double x) {
    double sum = 0.0;
    for (std::size_t i = 0; i < spec.centers.size(); ++i)
        sum += spec.coefficients[i] * l_mu(x, spec.centers[i], spec.mu, spec.bandwidth_l, spec.sigma2_x);
    return sum / spec.normalization;
}

GaussEigenPair gauss_kernel_eigs(double l, double sigma2_x) {
    require_positive(l, "gauss_kernel_eigs: l");
    require_positive(sigma2_x, "gauss_kernel_eigs: sigma2_x");
    const double beta = 4.0 * l * sigma2_x;
    GaussEigenPair p;
    p.beta = beta;
    p.a = std::sqrt(2.0) / std::sqrt(1.0 + beta + std::sqrt(1.0 + beta));
    p.b = beta / (1.0 + beta + std::sqrt(1.0 + 2.0 * beta));
    return p;
}

double effective_dim(double lambda, const GaussEigenPair& pair, double tol) {
    require_positive(lambda, "effective_dim: lambda");
    require_positive(tol, "effective_dim: tol");
    if (!(pair.a > 0.0) || !(pair.b > 0.0 && pair.b < 1.0))
        throw InputError("effective_dim: need a > 0 and 0 < b < 1");

    double sum = 0.0;
    double eigenvalue = pair.a;  // a b^i
    for (int i = 0; i < 100000; ++i) {
        sum += eigenvalue / (eigenvalue + lambda);
        const double next = eigenvalue * pair.b;
        if (next / (lambda * (1.0 - pair.b)) < tol) break;
        eigenvalue = next;
    }
    return sum;
}

double effective_dim_constant(const GaussEigenPair& pair) {
    return 2.0 / std::log(1.0 / pair.b) * std::max(1.0, 1.0 / std::log(1.0 + pair.a));
}

double effective_dim_bound(double lambda, const GaussEigenPair& pair) {
    if (!(lambda > 0.0 && lambda <= 1.0))
        throw InputError("effective_dim_bound holds only for lambda in (0, 1]");
    return effective_dim_constant(pair) * std::log(1.0 + pair.a / lambda);
}

double riemann_zeta(double s) {
    if (!(s > 1.0)) throw InputError("riemann_zeta: s must exceed 1");
    constexpr int kTerms = 16;
    // B_{2j} / (2j)!
    constexpr double kBernoulliRatios[] = {
        1.0 / 12.0,
        -1.0 / 720.0,
        1.0 / 30240.0,
        -1.0 / 1209600.0,
        1.0 / 47900160.0,
        -691.0 / 1307674368000.0,
        1.0 / 74724249600.0,
    };
    double sum = 0.0;
    for (int k = 1; k < kTerms; ++k) sum += std::pow(static_cast<double>(k), -s);
    const double big_n = kTerms;
    sum += std::pow(big_n, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(big_n, -s);

    double rising = s;  // s (s+1) ... (s + 2j - 2)
    double power = std::pow(big_n, -s - 1.0);
    for (int j = 0; j < 7; ++j) {
        sum += kBernoulliRatios[j] * rising * power;
        rising *= (s + 2.0 * j + 1.0) * (s + 2.0 * j + 2.0);
        power /= big_n * big_n;
    }
    return sum;
}

double acf_sum_constant(double q) {
    require_positive(q, "acf_sum_constant: q");
    if (q > 1.0) return riemann_zeta(q);
    if (q == 1.0) return 5.0 - std::log(4.0);
    return 2.0 / (1.0 - q) - 1.0 / (2.0 - q) + std::pow(2.0, 2.0 - q) / (2.0 - q);
}

double acf_weighted_sum(const AcfSpec& spec, long long n) {
    spec.validate();
    if (n < 2) throw InputError("acf_weighted_sum: n must be at least 2");
    double sum = 0.0;
    for (long long h = 1; h < n; ++h) sum += static_cast<double>(n - h) * std::abs(acf(spec, h));
    const double nn = static_cast<double>(n);
    return sum / (nn * nn);
}

double theta(double rho, int d) {
    if (!(std::abs(rho) < 1.0)) throw InputError("theta: |rho| must be below 1");
    if (d < 1) throw InputError("theta: d must be at least 1");
    const double r2 = rho * rho;
    const double half_d = 0.5 * d;
    return 1.0 + std::pow(1.0 - r2, -half_d) - std::pow(2.0, d + 1) * std::pow(4.0 - r2, -half_d);
}

double theta_quadratic_constant(double rho_star, int d) {
    if (!(rho_star >= 0.0 && rho_star < 1.0)) throw InputError("rho_star must lie in [0, 1)");
    if (d < 1) throw InputError("theta_quadratic_constant: d must be at least 1");
    const double r2 = rho_star * rho_star;
    const double e = -0.5 * d - 1.0;
    return d * (std::pow(1.0 - r2, e) - std::pow(2.0, d + 1) * std::pow(4.0 - r2, e));
}

double dependence_rate_constant(double q, int d, double det_sigma, double kappa,
                                ExponentConvention convention) {
    require_positive(det_sigma, "dependence_rate_constant: det(Sigma)");
    require_positive(kappa, "dependence_rate_constant: kappa");
    if (d < 1) throw InputError("dependence_rate_constant: d must be at least 1");
    const double shift = convention == ExponentConvention::plus_two ? 2.0 : -2.0;
    const double exponent = -(d + shift) / 4.0;
    return acf_sum_constant(q) / std::sqrt(std::pow(2.0 * std::numbers::pi, d) * det_sigma) * kappa *
           std::sqrt(static_cast<double>(d)) * std::pow(1.0 - std::pow(4.0, -q), exponent);
}

}  // namespace kpls
