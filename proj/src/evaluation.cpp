#include "kpls/evaluation.hpp"

#include "kpls/error.hpp"

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss.hpp>

#include <cmath>
#include <numbers>

namespace kpls {

namespace {

// Orthonormal Hermite polynomials for the weight exp(-t^2): returns
// (p_{n-1}(t), p_n(t)) and accumulates sum_{k<n} p_k(t)^2.
struct HermiteValues {
    double previous;
    double current;
    double christoffel_sum;
};

HermiteValues hermite_orthonormal(int n, double t) {
    double p_prev = 0.0;
    double p = std::pow(std::numbers::pi, -0.25);
    double sum = 0.0;
    for (int k = 0; k < n; ++k) {
        sum += p * p;
        const double next =
            std::sqrt(2.0 / (k + 1.0)) * t * p - std::sqrt(static_cast<double>(k) / (k + 1.0)) * p_prev;
        p_prev = p;
        p = next;
    }
    return {p_prev, p, sum};
}

}  // namespace

QuadratureRule gauss_hermite_rule(int order, double sigma2) {
    if (order < 1) throw InputError("quadrature order must be positive");
    if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) throw InputError("quadrature variance must be positive");

    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(order, order);
    for (int k = 1; k < order; ++k) jacobi(k, k - 1) = jacobi(k - 1, k) = std::sqrt(k / 2.0);
    const Eigen::VectorXd guesses =
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(jacobi, Eigen::EigenvaluesOnly).eigenvalues();

    QuadratureRule rule;
    rule.order = order;
    rule.nodes.resize(static_cast<std::size_t>(order));
    rule.weights.resize(static_cast<std::size_t>(order));

    const double spread = std::sqrt(2.0 * sigma2);
    double total = 0.0;
    for (int i = 0; i < order; ++i) {
        double t = guesses(i);
        for (int step = 0; step < 3; ++step) {
            const HermiteValues v = hermite_orthonormal(order, t);
            const double derivative = std::sqrt(2.0 * order) * v.previous;
            if (derivative == 0.0) break;
            t -= v.current / derivative;
        }
        const double w = 1.0 / hermite_orthonormal(order, t).christoffel_sum;
        rule.nodes[static_cast<std::size_t>(i)] = spread * t;
        rule.weights[static_cast<std::size_t>(i)] = w;
        total += w;
    }
    for (double& w : rule.weights) w /= total;
    return rule;
}

QuadratureRule panel_rule(double sigma2, double panel_width) {
    if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) throw InputError("quadrature variance must be positive");
    if (!(panel_width > 0.0) || !std::isfinite(panel_width)) throw InputError("panel width must be positive");

    using Legendre = boost::math::quadrature::gauss<double, 20>;
    const double sd = std::sqrt(sigma2);
    const double half_range = 10.0 * sd;
    const int panels = static_cast<int>(std::ceil(2.0 * half_range / panel_width));
    const double h = 2.0 * half_range / panels;

    QuadratureRule rule;
    double total = 0.0;
    auto add = [&](double x, double w) {
        const double density = std::exp(-0.5 * x * x / sigma2);
        rule.nodes.push_back(x);
        rule.weights.push_back(w * density);
        total += w * density;
    };
    for (int p = 0; p < panels; ++p) {
        const double mid = -half_range + (p + 0.5) * h;
        const auto& abscissa = Legendre::abscissa();
        const auto& weights = Legendre::weights();
        // 20 is even: the stored abscissae are the positive half.
        for (std::size_t k = abscissa.size(); k-- > 0;) add(mid - 0.5 * h * abscissa[k], 0.5 * h * weights[k]);
        for (std::size_t k = 0; k < abscissa.size(); ++k) add(mid + 0.5 * h * abscissa[k], 0.5 * h * weights[k]);
    }
    for (double& w : rule.weights) w /= total;
    rule.order = static_cast<int>(rule.nodes.size());
    return rule;
}

double l2_error(const QuadratureRule& rule, std::span<const double> estimate_values,
                std::span<const double> target_values) {
    if (estimate_values.size() != rule.nodes.size() || target_values.size() != rule.nodes.size())
        throw InputError("l2_error: tabulated values do not match the rule");
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double diff = estimate_values[i] - target_values[i];
        if (!std::isfinite(diff)) throw EvaluationError("l2_error: non-finite evaluator output");
        sum += rule.weights[i] * diff * diff;
    }
    return sum;
}

double l2_error(const Evaluator& estimate, const Evaluator& target, double sigma2_x, int rule_order) {
    if (rule_order < 16) throw InputError("l2_error: rule order must be at least 16");
    return l2_error(estimate, target, gauss_hermite_rule(rule_order, sigma2_x));
}

double l2_error(const Evaluator& estimate, const Evaluator& target, const QuadratureRule& rule) {
    std::vector<double> est(rule.nodes.size());
    std::vector<double> tgt(rule.nodes.size());
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        est[i] = estimate(rule.nodes[i]);
        tgt[i] = target(rule.nodes[i]);
    }
    return l2_error(rule, est, tgt);
}

RateFit rate_fit(std::span<const double> ns, std::span<const double> errors) {
    if (ns.size() != errors.size()) throw InputError("rate_fit: inputs differ in length");
    if (ns.size() < 3) throw InputError("rate_fit needs at least three points");
    const std::size_t m = ns.size();
    double mx = 0.0, my = 0.0;
    std::vector<double> lx(m), ly(m);
    for (std::size_t i = 0; i < m; ++i) {
        if (!(ns[i] > 0.0) || !(errors[i] > 0.0)) throw InputError("rate_fit: values must be positive");
        lx[i] = std::log(ns[i]);
        ly[i] = std::log(errors[i]);
        mx += lx[i];
        my += ly[i];
    }
    mx /= static_cast<double>(m);
    my /= static_cast<double>(m);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    if (!(sxx > 0.0)) throw InputError("rate_fit: sample sizes must not all coincide");
    const double slope = sxy / sxx;
    return {slope, my - slope * mx};
}

}  // namespace kpls
