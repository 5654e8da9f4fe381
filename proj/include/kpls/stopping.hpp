#pragma once

#include <span>
#include <string_view>

namespace kpls {

enum class StoppingForm { sum, discrepancy, oracle };

std::string_view to_string(StoppingForm form);
StoppingForm stopping_form_from_string(std::string_view name);

/// How the harness picks the reported iterate.
///
/// `threshold` is the already-multiplied product C * gamma_n (or C * zeta_n);
/// it is ignored by the oracle form.
struct StoppingSpec {
    StoppingForm form = StoppingForm::oracle;
    double threshold = 1.0;
    int max_index = 40;

    void validate() const;
};

/// Constants entering the stopping thresholds. The concentration constants
/// c_delta, c_eps and c_psi may be zero (degenerate but well defined).
struct RateParams {
    double q = 2.0;
    double r = 0.5;
    double R = 1.0;
    double kappa = 1.0;
    double c_delta = 0.0;
    double c_eps = 0.0;
    double c_psi = 0.0;
    double lambda_n = 1.0;
    double d_lambda = 1.0;

    void validate() const;
};

/// Concentration rate of the sample operators under polynomial ACF decay:
/// n^{-1/2} for q > 1, n^{-1/2} log^{1/2} n for q = 1, n^{-q/2} for q in (0,1).
double gamma_n(double q, long long n);

/// max(sqrt(lambda_n d_lambda) gamma, lambda_n^{r + 1/2})
double zeta_n(double lambda_n, double d_lambda, double gamma, double r);

/// C * gamma with C = c_eps + kappa^{r-1/2} (r + 1/2) R (1 + c_delta).
double threshold_theorem1(const RateParams& p, double gamma);

/// C * zeta with C = 4 R max{1, c_psi^2, (r - 1/2) kappa^{r-3/2} c_delta, c_psi c_eps / (sqrt 2 R)}.
double threshold_theorem2(const RateParams& p, double zeta);

struct StopResult {
    int index = 0;
    bool reached = false;
};

/// Smallest a >= 1 with sum_{i=0}^{a} h_i^{-2} >= threshold^{-2}. The input
/// starts with the residual of alpha_0 = 0. A zero residual fires immediately.
/// When the rule never fires, returns the last index with reached = false.
StopResult stopping_index_sum(std::span<const double> h_residuals, double threshold);

/// Smallest a >= 1 with h_a <= threshold, evaluated on a KCG (r = 1) trace
/// whose entry 0 is the alpha_0 residual.
StopResult stopping_index_discrepancy(std::span<const double> h_residuals_r1, double threshold);

/// 1-based argmin of the per-iterate errors, ties toward the smaller index.
int oracle_stopping_index(std::span<const double> errors);

}  // namespace kpls
