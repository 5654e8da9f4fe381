#include "kpls/cg_engine.hpp"

#include "kpls/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace kpls {

namespace {

constexpr double kSymmetryTolerance = 1e-12;
constexpr double kCurvatureTolerance = 1e-10;
// Below sqrt(eps) |K| the next basis direction carries fewer than half the
// significant digits, and later residuals fall under the roundoff floor.
const double kRelativeInvarianceTolerance = std::sqrt(std::numeric_limits<double>::epsilon());

void check_inputs(const Eigen::MatrixXd& kernel, const Eigen::VectorXd& y, int order_r,
                  int max_iter) {
    const Eigen::Index n = kernel.rows();
    if (n < 1 || kernel.cols() != n) throw InputError("kernel matrix must be square and non-empty");
    if (y.size() != n) throw InputError("response length does not match kernel matrix");
    if (order_r < 0 || order_r > 2) throw InputError("inner-product order r must be 0, 1 or 2");
    if (max_iter < 1 || max_iter > n)
        throw InputError("max_iter must lie in [1, n], got " + std::to_string(max_iter));
    if (!kernel.allFinite() || !y.allFinite()) throw InputError("non-finite entries in fit inputs");

    const double scale = std::max(kernel.cwiseAbs().maxCoeff(), 1e-300);
    if ((kernel - kernel.transpose()).cwiseAbs().maxCoeff() > kSymmetryTolerance * scale)
        throw InputError("kernel matrix is not symmetric");
    if (kernel.diagonal().minCoeff() < -kCurvatureTolerance * scale)
        throw InputError("kernel matrix has a negative diagonal entry");
}

// Orthogonalize `w` against the first `cols` columns of `basis`, twice.
void orthogonalize(const Eigen::MatrixXd& basis, Eigen::Index cols, Eigen::VectorXd& w) {
    for (int pass = 0; pass < 2; ++pass) {
        const Eigen::VectorXd proj = basis.leftCols(cols).transpose() * w;
        w.noalias() -= basis.leftCols(cols) * proj;
    }
}

}  // namespace

std::vector<double> FitTrace::h_residuals_from_origin() const {
    std::vector<double> out;
    out.reserve(h_residuals.size() + 1);
    out.push_back(initial_h_residual);
    out.insert(out.end(), h_residuals.begin(), h_residuals.end());
    return out;
}

std::vector<double> FitTrace::euclid_residuals_from_origin() const {
    std::vector<double> out;
    out.reserve(euclid_residuals.size() + 1);
    out.push_back(initial_euclid_residual);
    out.insert(out.end(), euclid_residuals.begin(), euclid_residuals.end());
    return out;
}

FitTrace fit_krylov(const Eigen::MatrixXd& kernel, const Eigen::VectorXd& y, int order_r,
                    int max_iter) {
    check_inputs(kernel, y, order_r, max_iter);

    const Eigen::Index n = kernel.rows();
    const double inv_n = 1.0 / static_cast<double>(n);

    FitTrace trace;
    trace.order_r = order_r;
    trace.max_iter = max_iter;

    const double beta = y.norm();
    trace.initial_euclid_residual = std::sqrt(beta * beta * inv_n);
    trace.initial_h_residual = std::sqrt(std::max(0.0, y.dot(kernel * y) * inv_n));
    if (beta == 0.0) {
        trace.rank_exhausted = true;
        return trace;
    }

    const Eigen::Index cap = max_iter + 1;
    Eigen::MatrixXd basis(n, cap);      // q_1 .. q_m
    Eigen::MatrixXd images(n, cap);     // K q_1 .. K q_m
    Eigen::MatrixXd projected(cap, cap);  // q_j' K q_k

    auto append = [&](Eigen::Index m, const Eigen::VectorXd& q) {
        basis.col(m) = q;
        images.col(m).noalias() = kernel * q;
        projected.block(0, m, m + 1, 1).noalias() = basis.leftCols(m + 1).transpose() * images.col(m);
        projected.block(m, 0, 1, m).noalias() = q.transpose() * images.leftCols(m);
    };

    append(0, y / beta);
    Eigen::Index dim = 1;

    for (int i = 1; i <= max_iter; ++i) {
        // Look one vector ahead so that y - K Q_i c lies in span(Q_{i+1}).
        bool invariant = false;
        if (dim == i) {
            if (dim < n) {
                Eigen::VectorXd w = images.col(i - 1);
                orthogonalize(basis, dim, w);
                const double h = w.norm();
                const double scale = projected.topLeftCorner(dim, dim).diagonal().maxCoeff();
                if (h < kKrylovDegeneracyTolerance) {
                    invariant = true;
                } else {
                    // A direction this small still holds the residual of the
                    // current iterate, but no further Krylov vector is reliable.
                    invariant = h < kRelativeInvarianceTolerance * scale;
                    append(dim, w / h);
                    ++dim;
                }
            } else {
                invariant = true;
            }
        }

        const Eigen::Index m = dim;
        const Eigen::MatrixXd h_block = projected.topLeftCorner(m, i);
        const Eigen::MatrixXd curvature =
            0.5 * (projected.topLeftCorner(m, m) + projected.topLeftCorner(m, m).transpose());

        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(curvature);
        const Eigen::VectorXd evals = eig.eigenvalues();
        const double spread = std::max(evals.cwiseAbs().maxCoeff(), 1e-300);
        if (evals.minCoeff() < -kCurvatureTolerance * spread)
            throw InputError("kernel matrix is not positive semi-definite on the Krylov space");

        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
        rhs(0) = beta;
        // Square root of the curvature with roundoff-level negative
        // eigenvalues set to zero; both the r = 1 objective and the reported
        // H-norm use it, so the reported value is the one minimized.
        const Eigen::MatrixXd root =
            evals.cwiseMax(0.0).cwiseSqrt().asDiagonal() * eig.eigenvectors().transpose();

        Eigen::VectorXd c;
        switch (order_r) {
        case 0:
            c = h_block.completeOrthogonalDecomposition().solve(rhs);
            break;
        case 1:
            c = (root * h_block).completeOrthogonalDecomposition().solve(root * rhs);
            break;
        default: {
            const Eigen::MatrixXd lifted = images.leftCols(m) * h_block;
            const Eigen::VectorXd target = images.leftCols(m) * rhs;
            c = lifted.completeOrthogonalDecomposition().solve(target);
            break;
        }
        }

        Eigen::VectorXd alpha = basis.leftCols(i) * c;
        const Eigen::VectorXd residual = y - images.leftCols(i) * c;
        const Eigen::VectorXd coords = rhs - h_block * c;

        trace.euclid_residuals.push_back(std::sqrt(residual.squaredNorm() * inv_n));
        trace.h_residuals.push_back(std::sqrt((root * coords).squaredNorm() * inv_n));
        trace.coefficients.push_back(std::move(alpha));

        if (invariant) {
            trace.rank_exhausted = i < max_iter;
            break;
        }
    }
    trace.terminated_at = trace.iterations();
    return trace;
}

double predict(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& alpha, const KernelSpec& spec,
               const Eigen::Ref<const Eigen::VectorXd>& x) {
    if (alpha.size() != inputs.rows()) throw InputError("coefficient length does not match inputs");
    if (x.size() != inputs.cols()) throw InputError("prediction point has the wrong dimension");
    double sum = 0.0;
    for (Eigen::Index t = 0; t < inputs.rows(); ++t)
        sum += alpha(t) * eval_kernel(spec, x, inputs.row(t).transpose());
    return sum / static_cast<double>(inputs.rows());
}

Eigen::VectorXd predict_batch(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& alpha,
                        const KernelSpec& spec, const Eigen::MatrixXd& points) {
    if (alpha.size() != inputs.rows()) throw InputError("coefficient length does not match inputs");
    if (points.cols() != inputs.cols()) throw InputError("prediction points have the wrong dimension");
    return cross_kernel(spec, points, inputs) * alpha / static_cast<double>(inputs.rows());
}

double residual_h_norm(const Eigen::MatrixXd& kernel, const Eigen::VectorXd& y,
                       const Eigen::VectorXd& alpha) {
    const Eigen::Index n = kernel.rows();
    if (kernel.cols() != n || y.size() != n || alpha.size() != n)
        throw InputError("residual_h_norm: shapes disagree");
    const Eigen::VectorXd r = y - kernel * alpha;
    const double radicand = r.dot(kernel * r) / static_cast<double>(n);
    if (radicand < -1e-12) throw NumericalError("negative H-norm radicand: kernel matrix is indefinite");
    return std::sqrt(std::max(0.0, radicand));
}

}  // namespace kpls
