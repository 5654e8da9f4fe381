#include "kpls/cg_engine.hpp"

#include "kpls/error.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <string>
#include <vector>

namespace kpls {

namespace {

using Real = boost::multiprecision::cpp_bin_float_quad;
using Vec = std::vector<Real>;
using Mat = std::vector<Vec>;  // row major, Mat[row][col]

Real dot(const Vec& a, const Vec& b) {
    Real s = 0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s;
}

Vec multiply(const Mat& a, const Vec& v) {
    Vec out(a.size(), Real(0));
    for (std::size_t r = 0; r < a.size(); ++r) out[r] = dot(a[r], v);
    return out;
}

// Lower factor of a positive semi-definite matrix; columns with a vanishing
// pivot are left at zero.
Mat semidefinite_cholesky(const Mat& k) {
    const std::size_t n = k.size();
    Real max_diag = 0;
    for (std::size_t j = 0; j < n; ++j) max_diag = std::max(max_diag, k[j][j]);
    Mat l(n, Vec(n, Real(0)));
    for (std::size_t j = 0; j < n; ++j) {
        Real d = k[j][j];
        for (std::size_t p = 0; p < j; ++p) d -= l[j][p] * l[j][p];
        if (d <= Real(1e-28) * max_diag) continue;
        l[j][j] = sqrt(d);
        for (std::size_t r = j + 1; r < n; ++r) {
            Real s = k[r][j];
            for (std::size_t p = 0; p < j; ++p) s -= l[r][p] * l[j][p];
            l[r][j] = s / l[j][j];
        }
    }
    return l;
}

}  // namespace

Eigen::VectorXd krylov_oracle(const Eigen::MatrixXd& kernel, const Eigen::VectorXd& y, int order_r,
                              int i) {
    const auto n = static_cast<std::size_t>(kernel.rows());
    if (n == 0 || kernel.cols() != kernel.rows() || static_cast<std::size_t>(y.size()) != n)
        throw InputError("krylov_oracle: shapes disagree");
    if (order_r < 0 || order_r > 2) throw InputError("krylov_oracle: r must be 0, 1 or 2");
    if (i < 1 || static_cast<std::size_t>(i) > n) throw InputError("krylov_oracle: i outside [1, n]");

    Mat k(n, Vec(n));
    Vec yq(n);
    for (std::size_t r = 0; r < n; ++r) {
        yq[r] = y(static_cast<Eigen::Index>(r));
        for (std::size_t c = 0; c < n; ++c)
            k[r][c] = kernel(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    }

    const Real ynorm = sqrt(dot(yq, yq));
    if (ynorm == 0) throw RankError("krylov_oracle: y = 0 spans an empty Krylov space");

    std::vector<Vec> basis;
    Vec q = yq;
    for (auto& v : q) v /= ynorm;
    basis.push_back(q);
    while (basis.size() < static_cast<std::size_t>(i)) {
        Vec w = multiply(k, basis.back());
        for (int pass = 0; pass < 2; ++pass)
            for (const Vec& b : basis) {
                const Real h = dot(b, w);
                for (std::size_t t = 0; t < n; ++t) w[t] -= h * b[t];
            }
        const Real norm = sqrt(dot(w, w));
        if (norm < Real(kKrylovDegeneracyTolerance))
            throw RankError("krylov_oracle: Krylov basis degenerates at dimension " +
                            std::to_string(basis.size() + 1));
        for (auto& v : w) v /= norm;
        basis.push_back(std::move(w));
    }

    // Columns of the design W K Q and the target W y.
    std::vector<Vec> cols;
    for (const Vec& b : basis) cols.push_back(multiply(k, b));
    Vec target = yq;
    if (order_r == 1) {
        const Mat l = semidefinite_cholesky(k);
        Mat lt(n, Vec(n));
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c) lt[r][c] = l[c][r];
        for (Vec& c : cols) c = multiply(lt, c);
        target = multiply(lt, target);
    } else if (order_r == 2) {
        for (Vec& c : cols) c = multiply(k, c);
        target = multiply(k, target);
    }

    // Modified Gram-Schmidt QR of the design, applied twice.
    const std::size_t m = cols.size();
    Mat rfac(m, Vec(m, Real(0)));
    Real max_diag = 0;
    for (std::size_t j = 0; j < m; ++j) {
        for (int pass = 0; pass < 2; ++pass)
            for (std::size_t p = 0; p < j; ++p) {
                const Real h = dot(cols[p], cols[j]);
                rfac[p][j] += h;
                for (std::size_t t = 0; t < n; ++t) cols[j][t] -= h * cols[p][t];
            }
        const Real norm = sqrt(dot(cols[j], cols[j]));
        max_diag = std::max(max_diag, norm);
        // A dependent column (singular K) gets coefficient zero; the fitted
        // values of a basic solution are the same as for any other minimizer.
        // The cutoff reflects that K itself is only known to double precision.
        if (norm <= Real(kKrylovDegeneracyTolerance) * max_diag) {
            for (auto& v : cols[j]) v = 0;
            continue;
        }
        rfac[j][j] = norm;
        for (auto& v : cols[j]) v /= norm;
    }

    Vec coef(m);
    for (std::size_t j = 0; j < m; ++j) coef[j] = dot(cols[j], target);
    for (std::size_t j = m; j-- > 0;) {
        if (rfac[j][j] == 0) {
            coef[j] = 0;
            continue;
        }
        for (std::size_t p = j + 1; p < m; ++p) coef[j] -= rfac[j][p] * coef[p];
        coef[j] /= rfac[j][j];
    }

    Eigen::VectorXd alpha = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    for (std::size_t t = 0; t < n; ++t) {
        Real s = 0;
        for (std::size_t j = 0; j < m; ++j) s += basis[j][t] * coef[j];
        alpha(static_cast<Eigen::Index>(t)) = static_cast<double>(s);
    }
    return alpha;
}

}  // namespace kpls
