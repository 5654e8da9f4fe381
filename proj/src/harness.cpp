#include "kpls/harness.hpp"

#include "kpls/cg_engine.hpp"
#include "kpls/error.hpp"
#include "kpls/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <map>
#include <thread>

namespace kpls {

std::string_view to_string(Method method) {
    return method == Method::kpls ? "kpls" : "kcg";
}

Method method_from_string(std::string_view name) {
    if (name == "kpls") return Method::kpls;
    if (name == "kcg") return Method::kcg;
    throw InputError("unknown method '" + std::string(name) + "'");
}

int method_order(Method method) { return method == Method::kpls ? 0 : 1; }

void ExperimentConfig::validate() const {
    try {
        kernel.validate();
        acf.validate();
        source.validate();
        if (stopping.form != StoppingForm::oracle) stopping.validate();
    } catch (const InputError& e) {
        throw ConfigError(e.what());
    }
    if (stopping.max_index < 1) throw ConfigError("stopping.max_index must be at least 1");
    if (!(noise_eta >= 0.0) || !std::isfinite(noise_eta)) throw ConfigError("noise_eta must be non-negative");
    if (!(innovation_variance > 0.0) || !std::isfinite(innovation_variance))
        throw ConfigError("innovation_variance must be positive");
    if (repetitions < 1) throw ConfigError("repetitions must be at least 1");
    if (max_iterations < 1) throw ConfigError("max_iterations must be at least 1");
    if (sample_sizes.empty()) throw ConfigError("sample_sizes must not be empty");
    for (int n : sample_sizes)
        if (n < max_iterations)
            throw ConfigError("every sample size must be at least max_iterations (got " +
                              std::to_string(n) + ")");
    if (methods.empty()) throw ConfigError("methods must not be empty");
}

const SummaryRow* ExperimentReport::find(Method method, int n) const {
    for (const auto& s : summary)
        if (s.method == method && s.n == n) return &s;
    return nullptr;
}

namespace {

// Everything a repetition needs that does not depend on the repetition index.
struct SizeContext {
    int n = 0;
    CovarianceFactor factor;
    QuadratureRule rule;
    std::vector<double> target_at_nodes;
    Eigen::MatrixXd nodes;
};

SizeContext prepare(const ExperimentConfig& config, int n) {
    SizeContext ctx;
    ctx.n = n;
    ctx.factor = covariance_factor(config.acf, n);
    ctx.rule = error_rule(config);
    ctx.nodes = Eigen::Map<const Eigen::VectorXd>(ctx.rule.nodes.data(),
                                                  static_cast<Eigen::Index>(ctx.rule.nodes.size()));
    ctx.target_at_nodes.reserve(ctx.rule.nodes.size());
    for (double x : ctx.rule.nodes) ctx.target_at_nodes.push_back(eval_source(config.source, x));
    return ctx;
}

int choose_index(const StoppingSpec& stopping, const FitTrace& trace, std::span<const double> errors) {
    const int limit = std::min<int>(stopping.max_index, static_cast<int>(errors.size()));
    switch (stopping.form) {
    case StoppingForm::oracle:
        return oracle_stopping_index(errors.first(static_cast<std::size_t>(limit)));
    case StoppingForm::sum: {
        const auto h = trace.h_residuals_from_origin();
        return std::min(limit, stopping_index_sum(h, stopping.threshold).index);
    }
    case StoppingForm::discrepancy: {
        const auto h = trace.h_residuals_from_origin();
        return std::min(limit, stopping_index_discrepancy(h, stopping.threshold).index);
    }
    }
    return limit;
}

std::vector<ExperimentRow> repetition_rows(const ExperimentConfig& config, const SizeContext& ctx,
                                           int repetition) {
    const int n = ctx.n;
    const std::uint64_t seed = child_seed(config.master_seed, static_cast<std::uint64_t>(repetition));

    std::vector<ExperimentRow> rows;
    for (Method method : config.methods) {
        ExperimentRow row;
        row.method = method;
        row.n = n;
        row.acf_kind = config.acf.kind;
        row.acf_parameter = config.acf.parameter();
        row.repetition = repetition;
        row.seed = seed;
        rows.push_back(row);
    }

    try {
        Eigen::VectorXd x = sample_path(ctx.factor, child_seed(seed, 0));
        x *= std::sqrt(config.innovation_variance);
        const Eigen::VectorXd eps = standard_normal(n, child_seed(seed, 1));
        Eigen::VectorXd y(n);
        for (int t = 0; t < n; ++t) y(t) = eval_source(config.source, x(t)) + config.noise_eta * eps(t);

        const Eigen::MatrixXd inputs = x;
        const Eigen::MatrixXd kernel = kernel_matrix(config.kernel, inputs);
        const Eigen::MatrixXd at_nodes =
            cross_kernel(config.kernel, ctx.nodes, inputs) / static_cast<double>(n);

        for (ExperimentRow& row : rows) {
            try {
                const FitTrace trace =
                    fit_krylov(kernel, y, method_order(row.method), config.max_iterations);
                if (trace.iterations() == 0) throw RankError("empty Krylov space (y = 0)");
                std::vector<double> errors;
                errors.reserve(static_cast<std::size_t>(trace.iterations()));
                for (const auto& alpha : trace.coefficients) {
                    const Eigen::VectorXd est = at_nodes * alpha;
                    errors.push_back(l2_error(ctx.rule, std::span<const double>(est.data(), est.size()),
                                              ctx.target_at_nodes));
                }
                row.chosen_index = choose_index(config.stopping, trace, errors);
                row.terminated_at = trace.terminated_at;
                row.l2_error = errors[static_cast<std::size_t>(row.chosen_index - 1)];
            } catch (const Error& e) {
                row.failed = true;
                row.failure = e.what();
                row.l2_error = std::numeric_limits<double>::quiet_NaN();
            }
        }
    } catch (const Error& e) {
        for (ExperimentRow& row : rows) {
            row.failed = true;
            row.failure = e.what();
            row.l2_error = std::numeric_limits<double>::quiet_NaN();
        }
    }
    return rows;
}

double quantile(const std::vector<double>& sorted, double p) {
    if (sorted.empty()) return std::numeric_limits<double>::quiet_NaN();
    const double pos = p * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace

QuadratureRule error_rule(const ExperimentConfig& config) {
    const double sd = std::sqrt(config.design_variance());
    const double l = config.kernel.bandwidth;
    const double width = config.kernel.kind == KernelKind::gaussian ? 2.0 / std::sqrt(2.0 * l)
                                                                    : 0.25 / std::sqrt(l);
    return panel_rule(config.design_variance(), std::min(width, sd));
}

Quantiles describe(std::vector<double> values) {
    Quantiles q;
    if (values.empty()) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        return {nan, nan, nan, nan, nan};
    }
    std::sort(values.begin(), values.end());
    double sum = 0.0;
    for (double v : values) sum += v;
    q.mean = sum / static_cast<double>(values.size());
    double ss = 0.0;
    for (double v : values) ss += (v - q.mean) * (v - q.mean);
    q.sd = values.size() > 1 ? std::sqrt(ss / static_cast<double>(values.size() - 1)) : 0.0;
    q.median = quantile(values, 0.5);
    q.q1 = quantile(values, 0.25);
    q.q3 = quantile(values, 0.75);
    return q;
}

std::vector<ExperimentRow> run_repetition(const ExperimentConfig& config, int n, int repetition) {
    config.validate();
    if (n < config.max_iterations) throw ConfigError("sample size below max_iterations");
    return repetition_rows(config, prepare(config, n), repetition);
}

ExperimentReport run_experiment(const ExperimentConfig& config, unsigned threads) {
    config.validate();

    std::vector<SizeContext> contexts;
    contexts.reserve(config.sample_sizes.size());
    for (int n : config.sample_sizes) contexts.push_back(prepare(config, n));

    const std::size_t reps = static_cast<std::size_t>(config.repetitions);
    const std::size_t tasks = contexts.size() * reps;
    std::vector<std::vector<ExperimentRow>> results(tasks);

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t task = next++; task < tasks; task = next++) {
            const SizeContext& ctx = contexts[task / reps];
            results[task] = repetition_rows(config, ctx, static_cast<int>(task % reps));
        }
    };
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, tasks));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
    }

    ExperimentReport report;
    for (std::size_t m = 0; m < config.methods.size(); ++m)
        for (std::size_t s = 0; s < contexts.size(); ++s)
            for (std::size_t r = 0; r < reps; ++r) report.rows.push_back(results[s * reps + r][m]);

    for (Method method : config.methods) {
        std::vector<double> ns, means;
        for (int n : config.sample_sizes) {
            std::vector<double> errs, idx;
            for (const auto& row : report.rows)
                if (row.method == method && row.n == n && !row.failed) {
                    errs.push_back(row.l2_error);
                    idx.push_back(row.chosen_index);
                }
            SummaryRow s;
            s.method = method;
            s.n = n;
            s.acf_kind = config.acf.kind;
            s.effective_repetitions = static_cast<int>(errs.size());
            s.error = describe(errs);
            s.index = describe(idx);
            report.summary.push_back(s);
            if (!errs.empty() && s.error.mean > 0.0) {
                ns.push_back(n);
                means.push_back(s.error.mean);
            }
        }
        std::vector<double> distinct = ns;
        std::sort(distinct.begin(), distinct.end());
        distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
        if (distinct.size() >= 3) {
            const RateFit fit = rate_fit(ns, means);
            report.rate_table.push_back({method, config.acf.kind, fit.slope, fit.intercept});
        }
    }
    return report;
}

double cross_validate_bandwidth(const Sample& train, std::span<const double> grid, int folds,
                                int max_iterations, Method method) {
    train.validate();
    if (grid.empty()) throw InputError("cross validation grid is empty");
    const int n = static_cast<int>(train.size());
    if (folds < 2) throw InputError("cross validation needs at least two folds");
    if (folds > n) throw InputError("more folds than observations");
    if (max_iterations < 1) throw InputError("max_iterations must be positive");

    double best_value = grid.front();
    double best_error = std::numeric_limits<double>::infinity();
    for (double bandwidth : grid) {
        const KernelSpec spec = KernelSpec::gaussian(bandwidth);
        spec.validate();
        std::vector<double> fold_sum(static_cast<std::size_t>(max_iterations), 0.0);
        std::vector<int> fold_count(static_cast<std::size_t>(max_iterations), 0);

        for (int f = 0; f < folds; ++f) {
            const int begin = static_cast<int>(static_cast<long long>(n) * f / folds);
            const int end = static_cast<int>(static_cast<long long>(n) * (f + 1) / folds);
            const int held = end - begin;
            const int kept = n - held;
            if (held == 0 || kept == 0) continue;

            Eigen::MatrixXd x_fit(kept, train.dim());
            Eigen::VectorXd y_fit(kept);
            x_fit << train.inputs.topRows(begin), train.inputs.bottomRows(n - end);
            y_fit << train.responses.head(begin), train.responses.tail(n - end);
            const Eigen::MatrixXd x_out = train.inputs.middleRows(begin, held);
            const Eigen::VectorXd y_out = train.responses.segment(begin, held);

            const Eigen::MatrixXd kernel = kernel_matrix(spec, x_fit);
            const FitTrace trace =
                fit_krylov(kernel, y_fit, method_order(method), std::min(max_iterations, kept));
            const Eigen::MatrixXd cross = cross_kernel(spec, x_out, x_fit) / static_cast<double>(kept);
            for (int i = 1; i <= trace.iterations(); ++i) {
                const double mse = (y_out - cross * trace.alpha(i)).squaredNorm() / held;
                fold_sum[static_cast<std::size_t>(i - 1)] += mse;
                fold_count[static_cast<std::size_t>(i - 1)] += 1;
            }
        }

        double best_for_candidate = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < fold_sum.size(); ++i)
            if (fold_count[i] > 0)
                best_for_candidate = std::min(best_for_candidate, fold_sum[i] / fold_count[i]);
        if (best_for_candidate < best_error) {
            best_error = best_for_candidate;
            best_value = bandwidth;
        }
    }
    return best_value;
}

}  // namespace kpls
