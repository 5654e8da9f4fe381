#include "kpls/error.hpp"
#include "kpls/source_theory.hpp"
#include "kpls/stopping.hpp"
#include "oracles/oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace kpls;

TEST_CASE("tridiag_dets") {
    const auto d = tridiag_dets(1, 2.0, 4.0);
    CHECK(d.full == doctest::Approx(4.5).epsilon(1e-15));
    CHECK(d.leading == doctest::Approx(4.25).epsilon(1e-15));
    CHECK(tridiag_dets(1, 1e-9, 4.0).full < 1e-8);
    for (int mu = 1; mu <= 6; ++mu)
        for (double l : {0.1, 2.0, 5.0}) {
            const auto rec = tridiag_dets(mu, l, 4.0);
            const auto [full, leading] = oracle::dense_tridiag_dets(mu, l, 4.0);
            CHECK(rec.full == doctest::Approx(full).epsilon(1e-12));
            CHECK(rec.leading == doctest::Approx(leading).epsilon(1e-12));
        }
    CHECK_THROWS_AS(tridiag_dets(0, 2.0, 4.0), InputError);
}

TEST_CASE("l_mu values") {
    CHECK(l_mu(0.0, 0.0, 3, 2.0, 4.0) == 1.0);
    CHECK(l_mu(1.3, -0.7, 2, 2.0, 4.0) == l_mu(-0.7, 1.3, 2, 2.0, 4.0));
    CHECK(l_mu(1.0, 0.0, 1, 2.0, 4.0) == doctest::Approx(std::exp(-0.5 * 4.5 / 4.25)).epsilon(1e-15));
    CHECK(l_mu(1.0, 0.5, 0, 2.0, 4.0) == doctest::Approx(std::exp(-0.5)).epsilon(1e-15));
    for (double x = -5; x <= 5; x += 0.5)
        for (double z = -5; z <= 5; z += 0.5) {
            const double v = l_mu(x, z, 4, 2.0, 4.0);
            CHECK(v > 0.0);
            CHECK(v <= 1.0);
        }
}

TEST_CASE("l_mu is smoothing of the half-bandwidth kernel") {
    // The closed form matches mu-fold smoothing of exp(-(l/2)(x-z)^2); with
    // the full bandwidth l the correlation is visibly below one.
    const double l = 2.0, s2 = 4.0;
    for (int mu : {1, 2}) {
        std::vector<double> formula, quad, full;
        for (int i = 0; i < 7; ++i)
            for (int j = 0; j < 7; ++j) {
                const double x = -3.0 + i, z = -3.0 + j;
                formula.push_back(l_mu(x, z, mu, l, s2));
                quad.push_back(oracle::smoothed_kernel(x, z, mu, l / 2.0, s2));
                full.push_back(oracle::smoothed_kernel(x, z, mu, l, s2));
            }
        CHECK(oracle::correlation(formula, quad) > 1.0 - 1e-9);
        CHECK(oracle::correlation(formula, full) < 0.99);
        // Constant ratio, i.e. equality up to normalization.
        for (std::size_t k = 0; k < formula.size(); ++k)
            CHECK(quad[k] / formula[k] == doctest::Approx(quad[0] / formula[0]).epsilon(1e-6));
    }
}

TEST_CASE("eval_source") {
    SourceFunctionSpec empty;
    CHECK(eval_source(empty, 1.0) == 0.0);

    SourceFunctionSpec one;
    one.centers = {0.7};
    one.coefficients = {1.0};
    one.normalization = 2.0;
    CHECK(eval_source(one, 0.7) == doctest::Approx(l_mu(0.7, 0.7, one.mu, 2.0, 4.0) / 2.0));

    const auto target = SourceFunctionSpec::simulation_target();
    double lo = 1e9, hi = -1e9;
    for (int i = 0; i <= 15000; ++i) {
        const double v = eval_source(target, -7.5 + i * 1e-3);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    CHECK(lo >= -0.36);
    CHECK(hi <= 0.66);

    one.coefficients.push_back(1.0);
    CHECK_THROWS_AS(one.validate(), InputError);
}

TEST_CASE("Gaussian kernel eigenvalue constants") {
    const auto p = gauss_kernel_eigs(2.0, 4.0);
    CHECK(p.beta == 32.0);
    CHECK(p.a == doctest::Approx(std::sqrt(2.0) / std::sqrt(33.0 + std::sqrt(33.0))).epsilon(1e-15));
    CHECK(p.a == doctest::Approx(0.2272).epsilon(1e-4));
    CHECK(p.b == doctest::Approx(32.0 / (33.0 + std::sqrt(65.0))).epsilon(1e-15));
    CHECK(p.b == doctest::Approx(0.779304).epsilon(1e-6));

    const auto tiny = gauss_kernel_eigs(1e-12, 1.0);
    CHECK(tiny.a == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(tiny.b < 1e-9);
    for (double l : {1e-3, 0.1, 1.0, 10.0, 1e3})
        for (double s2 : {1e-2, 1.0, 4.0, 100.0}) {
            const auto q = gauss_kernel_eigs(l, s2);
            CHECK(q.b > 0.0);
            CHECK(q.b < 1.0);
        }
}

TEST_CASE("effective dimensionality") {
    GaussEigenPair half{1.0, 0.5, 0.0};
    double expected = 0.0;
    for (int i = 0; i < 200; ++i) expected += 1.0 / (1.0 + std::pow(2.0, i));
    CHECK(effective_dim(1.0, half) == doctest::Approx(expected).epsilon(1e-11));
    CHECK(effective_dim(1.0, half) == doctest::Approx(1.2644997803).epsilon(1e-9));
    CHECK(effective_dim(1e12, half) < 1e-11);

    const auto p = gauss_kernel_eigs(2.0, 4.0);
    CHECK(effective_dim(0.01, p) <= effective_dim_bound(0.01, p));
    const double d = 2.0 / std::log(1.0 / p.b) * std::max(1.0, 1.0 / std::log(1.0 + p.a));
    CHECK(effective_dim_constant(p) == doctest::Approx(d).epsilon(1e-15));
    CHECK(effective_dim_constant(p) == doctest::Approx(39.18).epsilon(1e-3));
    CHECK(effective_dim_bound(1.0, p) == doctest::Approx(d * std::log(1.0 + p.a)));
    CHECK(effective_dim_bound(0.1, p) == doctest::Approx(d * std::log(1.0 + p.a / 0.1)));
    CHECK_THROWS_AS(effective_dim_bound(1.5, p), InputError);
    CHECK_THROWS_AS(effective_dim_bound(0.0, p), InputError);
    for (int i = 0; i < 50; ++i) {
        const double lambda = std::pow(10.0, -4.0 + 4.0 * i / 49.0);
        CHECK(effective_dim(lambda, p) <= effective_dim_bound(lambda, p));
    }
}

TEST_CASE("riemann zeta") {
    CHECK(riemann_zeta(2.0) == doctest::Approx(std::numbers::pi * std::numbers::pi / 6.0).epsilon(1e-14));
    for (double s = 1.01; s < 12.0; s += 0.137)
        CHECK(riemann_zeta(s) == doctest::Approx(std::riemann_zeta(s)).epsilon(1e-12));
    CHECK_THROWS_AS(riemann_zeta(1.0), InputError);
}

TEST_CASE("acf sum constant and weighted sum") {
    CHECK(acf_sum_constant(1.0) == doctest::Approx(5.0 - std::log(4.0)).epsilon(1e-15));
    CHECK(acf_sum_constant(1.0) == doctest::Approx(3.613706).epsilon(1e-6));
    CHECK(acf_sum_constant(2.0) == doctest::Approx(1.644934).epsilon(1e-6));
    CHECK(acf_sum_constant(0.5) == doctest::Approx(5.218951).epsilon(1e-6));

    CHECK(acf_weighted_sum(AcfSpec::iid(), 50) == 0.0);
    CHECK(acf_weighted_sum(AcfSpec::geometric(0.5), 2) == doctest::Approx(0.125));
    for (double q : {0.25, 0.5, 1.0, 1.5, 2.0})
        for (long long n : {10LL, 100LL, 1000LL, 10000LL})
            CHECK(acf_weighted_sum(AcfSpec::polynomial(q), n) <= acf_sum_constant(q) * std::pow(gamma_n(q, n), 2));
}

TEST_CASE("theta") {
    for (int d = 1; d <= 5; ++d) CHECK(theta(0.0, d) == 0.0);
    CHECK(theta(0.5, 1) ==
          doctest::Approx(1.0 + std::pow(0.75, -0.5) - 4.0 * std::pow(3.75, -0.5)).epsilon(1e-15));
    CHECK(theta(0.5, 1) == doctest::Approx(0.0891).epsilon(1e-3));
    CHECK(theta(0.3, 1) < theta(0.6, 1));
    CHECK(theta(-0.4, 2) == theta(0.4, 2));
    CHECK_THROWS_AS(theta(1.0, 1), InputError);

    for (int d : {1, 2, 3}) {
        const double rho_star = std::pow(2.0, -0.25);
        const double c = theta_quadratic_constant(rho_star, d);
        for (int i = 0; i <= 200; ++i) {
            const double rho = rho_star * i / 200.0;
            CHECK(theta(rho, d) <= c * rho * rho);
        }
    }
}

TEST_CASE("dependence rate constant conventions") {
    const double plus = dependence_rate_constant(0.5, 1, 4.0, 1.0, ExponentConvention::plus_two);
    const double minus = dependence_rate_constant(0.5, 1, 4.0, 1.0, ExponentConvention::minus_two);
    const double base = acf_sum_constant(0.5) / std::sqrt(2.0 * std::numbers::pi * 4.0);
    CHECK(plus == doctest::Approx(base * std::pow(0.5, -0.75)));
    CHECK(minus == doctest::Approx(base * std::pow(0.5, 0.25)));
}
