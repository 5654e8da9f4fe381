#pragma once

#include "kpls/evaluation.hpp"
#include "kpls/gaussian_process.hpp"
#include "kpls/kernels.hpp"
#include "kpls/source_theory.hpp"
#include "kpls/stopping.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace kpls {

enum class Method { kpls, kcg };

std::string_view to_string(Method method);
Method method_from_string(std::string_view name);
/// Inner-product order of the Krylov objective: 0 for kpls, 1 for kcg.
int method_order(Method method);

/// Monte Carlo experiment: X = L N with N ~ N(0, innovation_variance I),
/// y = f(X) + noise_eta * eps, both methods fitted per repetition.
struct ExperimentConfig {
    KernelSpec kernel = KernelSpec::gaussian(2.0);
    AcfSpec acf = AcfSpec::iid(4.0);
    SourceFunctionSpec source = SourceFunctionSpec::simulation_target();
    double noise_eta = 1.0 / 16.0;
    std::vector<int> sample_sizes = {200, 400, 1000};
    int repetitions = 1000;
    int max_iterations = 40;
    StoppingSpec stopping;
    std::uint64_t master_seed = 12345;
    std::vector<Method> methods = {Method::kpls, Method::kcg};
    /// Variance of the innovations N; the design marginal is
    /// tau0 * sigma2 * innovation_variance.
    double innovation_variance = 1.0;

    double design_variance() const { return acf.tau0 * acf.sigma2 * innovation_variance; }

    /// Throws ConfigError on any invariant violation.
    void validate() const;
};

struct ExperimentRow {
    Method method = Method::kpls;
    int n = 0;
    AcfKind acf_kind = AcfKind::iid;
    double acf_parameter = 0.0;
    int repetition = 0;
    std::uint64_t seed = 0;
    int chosen_index = 0;
    int terminated_at = 0;
    double l2_error = 0.0;
    bool failed = false;
    std::string failure;
};

struct Quantiles {
    double mean = 0.0;
    double sd = 0.0;
    double median = 0.0;
    double q1 = 0.0;
    double q3 = 0.0;
};

struct SummaryRow {
    Method method = Method::kpls;
    int n = 0;
    AcfKind acf_kind = AcfKind::iid;
    int effective_repetitions = 0;
    Quantiles error;
    Quantiles index;
};

struct RateRow {
    Method method = Method::kpls;
    AcfKind acf_kind = AcfKind::iid;
    double slope = 0.0;
    double intercept = 0.0;
};

struct ExperimentReport {
    std::vector<ExperimentRow> rows;
    std::vector<SummaryRow> summary;
    std::vector<RateRow> rate_table;

    const SummaryRow* find(Method method, int n) const;
};

/// Quadrature rule used for the reported L2 errors: panel_rule at the design
/// variance, panels of twice the Gaussian kernel's length scale 1/sqrt(2 l)
/// (a quarter of the support radius for the compact kernels), at most one
/// design standard deviation wide.
QuadratureRule error_rule(const ExperimentConfig& config);

/// One repetition at sample size n: one row per configured method.
/// Numerical failures are recorded in the row instead of thrown.
std::vector<ExperimentRow> run_repetition(const ExperimentConfig& config, int n, int repetition);

/// All repetitions for all sample sizes, dispatched to `threads` workers
/// (0 = hardware concurrency). Rows are ordered by (method, n, repetition)
/// and do not depend on scheduling.
ExperimentReport run_experiment(const ExperimentConfig& config, unsigned threads = 0);

Quantiles describe(std::vector<double> values);

/// Grid search over Gaussian bandwidths with contiguous-block folds. For each
/// candidate the held-out squared error is averaged over folds per iteration
/// and minimized over the iteration index; the candidate with the lowest
/// minimum wins (ties toward the earlier grid entry).
double cross_validate_bandwidth(const Sample& train, std::span<const double> grid, int folds,
                                int max_iterations = 40, Method method = Method::kpls);

// report_io.cpp

/// Parse a JSON config whose keys mirror the ExperimentConfig fields. Missing
/// keys keep their defaults; unknown keys raise ConfigError.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);

/// method,n,acf_kind,q_or_phi,repetition,seed,chosen_index,terminated_at,l2_error
void write_rows_csv(std::ostream& out, std::span<const ExperimentRow> rows);
void write_summary_csv(std::ostream& out, const ExperimentReport& report);
void write_rate_csv(std::ostream& out, const ExperimentReport& report);
/// Error boxplots per (n, method) and the mean error times n / log n.
void write_svg(std::ostream& out, const ExperimentReport& report);

}  // namespace kpls
