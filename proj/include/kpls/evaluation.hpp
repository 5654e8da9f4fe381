#pragma once

#include <functional>
#include <span>
#include <vector>

namespace kpls {

/// Nodes and weights integrating against the N(0, sigma2) density; the
/// weights sum to one.
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    int order = 0;
};

/// Gauss-Hermite rule of the given order mapped to N(0, sigma2) by
/// x = sqrt(2 sigma2) t. Nodes come from the Golub-Welsch eigenproblem and
/// are polished by Newton steps on the orthonormal Hermite recurrence.
QuadratureRule gauss_hermite_rule(int order, double sigma2);

inline constexpr int kDefaultRuleOrder = 64;

/// Composite 20-point Gauss-Legendre rule on +-10 standard deviations of
/// N(0, sigma2) with panels no wider than panel_width; the density is folded
/// into the weights. Unlike the Hermite rule it resolves features narrower
/// than the design spread, such as kernel sections of a fitted estimate.
QuadratureRule panel_rule(double sigma2, double panel_width);

using Evaluator = std::function<double(double)>;

/// Integral of (estimate - target)^2 against N(0, sigma2_x); rule_order >= 16.
double l2_error(const Evaluator& estimate, const Evaluator& target, double sigma2_x,
                int rule_order = kDefaultRuleOrder);

/// Same integral with an explicit rule.
double l2_error(const Evaluator& estimate, const Evaluator& target, const QuadratureRule& rule);

/// Same integral from values already tabulated at `rule.nodes`.
double l2_error(const QuadratureRule& rule, std::span<const double> estimate_values,
                std::span<const double> target_values);

struct RateFit {
    double slope = 0.0;
    double intercept = 0.0;
};

/// Least squares line through (log n, log error).
RateFit rate_fit(std::span<const double> ns, std::span<const double> errors);

}  // namespace kpls
