#include "oracles/oracles.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>

namespace oracle {

Eigen::MatrixXd random_psd(int n, double min_eig, double max_eig, std::mt19937_64& rng, int rank) {
    std::normal_distribution<double> normal;
    Eigen::MatrixXd g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = normal(rng);
    const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(g).householderQ();
    std::uniform_real_distribution<double> unif(std::log(min_eig), std::log(max_eig));
    Eigen::VectorXd eigs(n);
    for (int i = 0; i < n; ++i) eigs(i) = (rank >= 0 && i >= rank) ? 0.0 : std::exp(unif(rng));
    Eigen::MatrixXd k = q * eigs.asDiagonal() * q.transpose();
    return 0.5 * (k + k.transpose());
}

Eigen::VectorXd random_vector(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> normal;
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v(i) = normal(rng);
    return v;
}

double gaussian_expectation(const std::function<double(double)>& f, double sigma2) {
    using boost::math::quadrature::gauss_kronrod;
    const double norm = 1.0 / std::sqrt(2.0 * std::numbers::pi * sigma2);
    auto integrand = [&](double x) { return f(x) * norm * std::exp(-0.5 * x * x / sigma2); };
    // The density is below 1e-40 of its peak beyond 14 standard deviations.
    const double edge = 14.0 * std::sqrt(sigma2);
    return gauss_kronrod<double, 61>::integrate(integrand, -edge, edge, 15, 1e-13);
}

double smoothed_kernel(double x, double z, int mu, double l_kernel, double sigma2) {
    auto k = [l_kernel](double s, double t) { return std::exp(-l_kernel * (s - t) * (s - t)); };
    if (mu == 1) return gaussian_expectation([&](double u) { return k(x, u) * k(u, z); }, sigma2);
    if (mu == 2)
        return gaussian_expectation(
            [&](double u1) {
                return k(x, u1) *
                       gaussian_expectation([&](double u2) { return k(u1, u2) * k(u2, z); }, sigma2);
            },
            sigma2);
    throw std::invalid_argument("smoothed_kernel supports mu = 1, 2");
}

std::pair<double, double> dense_tridiag_dets(int mu, double l, double sigma2) {
    const int m = mu + 1;
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) {
        a(i, i) = 1.0 / sigma2 + 2.0 * l;
        if (i + 1 < m) a(i, i + 1) = a(i + 1, i) = -l;
    }
    a(m - 1, m - 1) = l;
    return {a.determinant(), a.topLeftCorner(mu, mu).determinant()};
}

double correlation(const std::vector<double>& a, const std::vector<double>& b) {
    const auto n = static_cast<double>(a.size());
    double ma = 0, mb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= n;
    mb /= n;
    double sab = 0, saa = 0, sbb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    return sab / std::sqrt(saa * sbb);
}

}  // namespace oracle
