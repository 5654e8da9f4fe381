#include "kpls/cg_engine.hpp"
#include "kpls/error.hpp"
#include "kpls/stopping.hpp"
#include "oracles/oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace kpls;

TEST_CASE("gamma_n branches") {
    CHECK(gamma_n(2.0, 100) == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(gamma_n(0.25, 10000) == doctest::Approx(0.316228).epsilon(1e-6));
    CHECK(gamma_n(1.0, 100) == doctest::Approx(0.1 * std::sqrt(std::log(100.0))).epsilon(1e-15));
    CHECK(gamma_n(1.0, 100) == doctest::Approx(0.214597).epsilon(1e-6));
    CHECK_THROWS_AS(gamma_n(0.0, 10), InputError);
    CHECK_THROWS_AS(gamma_n(1.0, 0), InputError);
}

TEST_CASE("gamma_n is non-increasing in n") {
    // log(n)/n rises between n = 2 and n = 3, so the q = 1 branch starts at 3.
    for (double q : {0.1, 0.25, 0.5, 0.99, 1.0, 1.01, 1.5, 2.0, 5.0}) {
        double prev = gamma_n(q, 3);
        for (long long n = 4; n <= 20000; n += (n < 100 ? 1 : 97)) {
            const double g = gamma_n(q, n);
            CHECK(g <= prev);
            prev = g;
        }
    }
}

TEST_CASE("zeta_n examples") {
    CHECK(zeta_n(1.0, 1.0, 1.0, 0.5) == doctest::Approx(1.0));
    CHECK(zeta_n(0.01, 4.0, 0.1, 0.5) == doctest::Approx(0.02));
    CHECK(zeta_n(0.25, 1.0, 1e-6, 1.5) == doctest::Approx(0.0625));
}

TEST_CASE("theorem thresholds") {
    RateParams p;
    p.c_eps = 1.0;
    p.c_delta = 0.0;
    p.R = 1.0;
    p.kappa = 1.0;
    p.r = 1.5;
    CHECK(threshold_theorem1(p, 1.0) == doctest::Approx(3.0));
    CHECK(threshold_theorem1(p, 0.0) == 0.0);
    p.c_eps = 0.5;
    p.c_delta = 1.0;
    p.R = 2.0;
    p.r = 0.5;
    CHECK(threshold_theorem1(p, 0.1) == doctest::Approx(0.45));

    RateParams s;
    s.R = 1.0;
    s.r = 0.5;
    s.c_delta = 1.0;
    s.c_eps = 1.0;
    s.c_psi = 1.0;
    CHECK(threshold_theorem2(s, 0.3) == doctest::Approx(4.0 * 0.3));
    CHECK(threshold_theorem2(s, 0.0) == 0.0);
    s.c_psi = 2.0;
    s.c_eps = 0.01;
    s.c_delta = 0.01;
    CHECK(threshold_theorem2(s, 0.5) == doctest::Approx(8.0));
}

TEST_CASE("sum rule examples") {
    const std::vector<double> h{2.0, 1.0, 0.5};
    auto r = stopping_index_sum(h, 1.0);
    CHECK(r.index == 1);
    CHECK(r.reached);
    r = stopping_index_sum(h, 5.0);
    CHECK(r.index == 1);
    const std::vector<double> flat(5, 10.0);
    r = stopping_index_sum(flat, 0.1);
    CHECK_FALSE(r.reached);
    CHECK(r.index == 4);
    CHECK_THROWS_AS(stopping_index_sum(std::vector<double>{1.0}, 1.0), InputError);
}

TEST_CASE("discrepancy rule examples") {
    const std::vector<double> h{9.0, 0.5, 0.2};
    CHECK(stopping_index_discrepancy(h, 0.3).index == 2);
    CHECK(stopping_index_discrepancy(h, 10.0).index == 1);
    const auto r = stopping_index_discrepancy(h, 0.0);
    CHECK_FALSE(r.reached);
    CHECK(r.index == 2);
}

TEST_CASE("oracle index") {
    CHECK(oracle_stopping_index(std::vector<double>{3, 1, 2}) == 2);
    CHECK(oracle_stopping_index(std::vector<double>{1, 1, 1}) == 1);
    std::vector<double> dec(40);
    for (int i = 0; i < 40; ++i) dec[i] = 40.0 - i;
    CHECK(oracle_stopping_index(dec) == 40);
}

TEST_CASE("sum and discrepancy rules coincide on fitted traces") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 14;
        const Eigen::MatrixXd k = oracle::random_psd(n, 1e-3, 1.0, rng);
        const Eigen::VectorXd y = oracle::random_vector(n, rng);
        const auto h0 = fit_krylov(k, y, 0, n).h_residuals_from_origin();
        const auto h1 = fit_krylov(k, y, 1, n).h_residuals_from_origin();
        int prev_sum = 1 << 30, prev_disc = 1 << 30;
        for (int j = 0; j < 30; ++j) {
            const double tau = h1.back() * std::pow(h1.front() / h1.back() * 1.2, j / 29.0);
            const auto s = stopping_index_sum(h0, tau);
            const auto d = stopping_index_discrepancy(h1, tau);
            CHECK(std::abs(s.index - d.index) <= 1);
            CHECK(s.index <= prev_sum);
            CHECK(d.index <= prev_disc);
            prev_sum = s.index;
            prev_disc = d.index;
        }
    }
}

TEST_CASE("stopping spec parsing and validation") {
    CHECK(stopping_form_from_string("sum") == StoppingForm::sum);
    CHECK(to_string(StoppingForm::discrepancy) == "discrepancy");
    CHECK_THROWS_AS(stopping_form_from_string("early"), InputError);
    StoppingSpec spec;
    spec.max_index = 0;
    CHECK_THROWS_AS(spec.validate(), InputError);
}
