#include "kpls/kernels.hpp"

#include "kpls/error.hpp"

#include <algorithm>
#include <cmath>

namespace kpls {

namespace {

double profile(KernelKind kind, double bandwidth, double squared_distance) {
    switch (kind) {
    case KernelKind::gaussian:
        return std::exp(-bandwidth * squared_distance);
    case KernelKind::triangular:
        return std::max(0.0, 1.0 - std::sqrt(bandwidth * squared_distance));
    case KernelKind::epanechnikov:
        return std::max(0.0, 1.0 - bandwidth * squared_distance);
    }
    return 0.0;
}

void require_finite(const Eigen::MatrixXd& m, const char* what) {
    if (!m.allFinite()) throw InputError(std::string(what) + " contains non-finite entries");
}

}  // namespace

std::string_view to_string(KernelKind kind) {
    switch (kind) {
    case KernelKind::gaussian: return "gaussian";
    case KernelKind::triangular: return "triangular";
    case KernelKind::epanechnikov: return "epanechnikov";
    }
    return "unknown";
}

KernelKind kernel_kind_from_string(std::string_view name) {
    if (name == "gaussian") return KernelKind::gaussian;
    if (name == "triangular") return KernelKind::triangular;
    if (name == "epanechnikov") return KernelKind::epanechnikov;
    throw InputError("unknown kernel kind '" + std::string(name) + "'");
}

void KernelSpec::validate() const {
    if (!(bandwidth > 0.0) || !std::isfinite(bandwidth))
        throw InputError("kernel bandwidth must be positive and finite");
    if (!(kappa > 0.0) || !std::isfinite(kappa))
        throw InputError("kernel bound kappa must be positive and finite");
}

void Sample::validate() const {
    if (inputs.rows() < 1) throw InputError("sample must contain at least one observation");
    if (inputs.cols() < 1) throw InputError("sample inputs must have at least one column");
    if (responses.size() != inputs.rows())
        throw InputError("sample responses and inputs disagree in length");
    require_finite(inputs, "sample inputs");
    require_finite(responses, "sample responses");
}

double eval_kernel(const KernelSpec& spec, const Eigen::Ref<const Eigen::VectorXd>& x,
                   const Eigen::Ref<const Eigen::VectorXd>& y) {
    if (x.size() != y.size()) throw InputError("kernel arguments differ in dimension");
    return profile(spec.kind, spec.bandwidth, (x - y).squaredNorm());
}

Eigen::MatrixXd kernel_matrix(const KernelSpec& spec, const Eigen::MatrixXd& inputs) {
    spec.validate();
    const Eigen::Index n = inputs.rows();
    if (n < 1) throw InputError("kernel matrix needs at least one point");
    require_finite(inputs, "kernel inputs");

    const double scale = 1.0 / static_cast<double>(n);
    Eigen::MatrixXd k(n, n);
    for (Eigen::Index s = 0; s < n; ++s) {
        k(s, s) = scale * profile(spec.kind, spec.bandwidth, 0.0);
        for (Eigen::Index t = 0; t < s; ++t) {
            const double d2 = (inputs.row(t) - inputs.row(s)).squaredNorm();
            k(t, s) = scale * profile(spec.kind, spec.bandwidth, d2);
            k(s, t) = k(t, s);
        }
    }
    return k;
}

Eigen::MatrixXd cross_kernel(const KernelSpec& spec, const Eigen::MatrixXd& a,
                             const Eigen::MatrixXd& b) {
    spec.validate();
    if (a.cols() != b.cols()) throw InputError("cross kernel blocks differ in dimension");
    Eigen::MatrixXd k(a.rows(), b.rows());
    for (Eigen::Index j = 0; j < b.rows(); ++j)
        for (Eigen::Index i = 0; i < a.rows(); ++i)
            k(i, j) = profile(spec.kind, spec.bandwidth, (a.row(i) - b.row(j)).squaredNorm());
    return k;
}

}  // namespace kpls
