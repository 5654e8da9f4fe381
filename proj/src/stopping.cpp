#include "kpls/stopping.hpp"

#include "kpls/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace kpls {

std::string_view to_string(StoppingForm form) {
    switch (form) {
    case StoppingForm::sum: return "sum";
    case StoppingForm::discrepancy: return "discrepancy";
    case StoppingForm::oracle: return "oracle";
    }
    return "unknown";
}

StoppingForm stopping_form_from_string(std::string_view name) {
    if (name == "sum") return StoppingForm::sum;
    if (name == "discrepancy") return StoppingForm::discrepancy;
    if (name == "oracle") return StoppingForm::oracle;
    throw InputError("unknown stopping form '" + std::string(name) + "'");
}

void StoppingSpec::validate() const {
    if (!(threshold > 0.0) || !std::isfinite(threshold))
        throw InputError("stopping threshold must be positive");
    if (max_index < 1) throw InputError("stopping max_index must be at least 1");
}

void RateParams::validate() const {
    auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
    auto non_negative = [](double v) { return v >= 0.0 && std::isfinite(v); };
    if (!positive(q) || !positive(R) || !positive(kappa) || !positive(lambda_n) || !positive(d_lambda))
        throw InputError("rate parameters q, R, kappa, lambda_n, d_lambda must be positive");
    if (!(r >= 0.5) || !std::isfinite(r)) throw InputError("source parameter r must be at least 1/2");
    if (!non_negative(c_delta) || !non_negative(c_eps) || !non_negative(c_psi))
        throw InputError("concentration constants must be non-negative");
}

double gamma_n(double q, long long n) {
    if (!(q > 0.0) || !std::isfinite(q)) throw InputError("gamma_n: q must be positive");
    if (n < 2) throw InputError("gamma_n: n must be at least 2");
    const double nn = static_cast<double>(n);
    if (q > 1.0) return 1.0 / std::sqrt(nn);
    if (q == 1.0) return std::sqrt(std::log(nn) / nn);
    return std::pow(nn, -q / 2.0);
}

double zeta_n(double lambda_n, double d_lambda, double gamma, double r) {
    if (!(lambda_n > 0.0) || !(d_lambda > 0.0) || !(gamma > 0.0))
        throw InputError("zeta_n: lambda_n, d_lambda and gamma must be positive");
    if (!(r >= 0.5)) throw InputError("zeta_n: r must be at least 1/2");
    return std::max(std::sqrt(lambda_n * d_lambda) * gamma, std::pow(lambda_n, r + 0.5));
}

double threshold_theorem1(const RateParams& p, double gamma) {
    p.validate();
    if (!(gamma >= 0.0)) throw InputError("threshold_theorem1: gamma must be non-negative");
    const double c = p.c_eps + std::pow(p.kappa, p.r - 0.5) * (p.r + 0.5) * p.R * (1.0 + p.c_delta);
    return c * gamma;
}

double threshold_theorem2(const RateParams& p, double zeta) {
    p.validate();
    if (!(zeta >= 0.0)) throw InputError("threshold_theorem2: zeta must be non-negative");
    const double candidates[] = {
        1.0,
        p.c_psi * p.c_psi,
        (p.r - 0.5) * std::pow(p.kappa, p.r - 1.5) * p.c_delta,
        p.c_psi * p.c_eps / (std::sqrt(2.0) * p.R),
    };
    return 4.0 * p.R * *std::max_element(std::begin(candidates), std::end(candidates)) * zeta;
}

StopResult stopping_index_sum(std::span<const double> h_residuals, double threshold) {
    if (h_residuals.size() < 2)
        throw InputError("stopping_index_sum needs the origin residual and at least one iterate");
    if (!(threshold > 0.0)) throw InputError("stopping threshold must be positive");

    const double target = 1.0 / (threshold * threshold);
    double accumulated = 0.0;
    for (std::size_t a = 0; a < h_residuals.size(); ++a) {
        const double h = h_residuals[a];
        if (h < 0.0 || std::isnan(h)) throw InputError("residuals must be non-negative");
        if (h == 0.0) return {static_cast<int>(std::max<std::size_t>(a, 1)), true};
        accumulated += 1.0 / (h * h);
        if (a >= 1 && accumulated >= target) return {static_cast<int>(a), true};
    }
    return {static_cast<int>(h_residuals.size() - 1), false};
}

StopResult stopping_index_discrepancy(std::span<const double> h_residuals_r1, double threshold) {
    if (h_residuals_r1.size() < 2)
        throw InputError("stopping_index_discrepancy needs the origin residual and at least one iterate");
    if (!(threshold >= 0.0)) throw InputError("stopping threshold must be non-negative");
    for (std::size_t a = 1; a < h_residuals_r1.size(); ++a)
        if (h_residuals_r1[a] <= threshold) return {static_cast<int>(a), true};
    return {static_cast<int>(h_residuals_r1.size() - 1), false};
}

int oracle_stopping_index(std::span<const double> errors) {
    if (errors.empty()) throw InputError("oracle stopping needs at least one error value");
    std::size_t best = 0;
    for (std::size_t i = 1; i < errors.size(); ++i)
        if (errors[i] < errors[best]) best = i;
    return static_cast<int>(best) + 1;
}

}  // namespace kpls
