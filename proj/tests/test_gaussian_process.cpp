#include "kpls/error.hpp"
#include "kpls/gaussian_process.hpp"

#include <doctest.h>

#include <cmath>
#include <set>

using namespace kpls;

TEST_CASE("acf examples") {
    CHECK(acf(AcfSpec::iid(), 0) == 1.0);
    CHECK(acf(AcfSpec::iid(), 3) == 0.0);
    CHECK(acf(AcfSpec::geometric(0.9), 2) == doctest::Approx(0.81).epsilon(1e-15));
    CHECK(acf(AcfSpec::polynomial(0.25), 3) == doctest::Approx(0.707107).epsilon(1e-6));
    CHECK_THROWS_AS(acf(AcfSpec::iid(), -1), InputError);
    CHECK_THROWS_AS(AcfSpec::geometric(1.0).validate(), InputError);
    CHECK_THROWS_AS(AcfSpec::polynomial(0.0).validate(), InputError);
    CHECK(acf_kind_from_string("polynomial") == AcfKind::polynomial);
}

TEST_CASE("polynomial acf obeys its decay bound exactly") {
    for (double q : {0.25, 1.0, 2.0})
        for (long long h = 0; h < 500; ++h)
            CHECK(std::abs(acf(AcfSpec::polynomial(q), h)) <= std::pow(static_cast<double>(h) + 1.0, -q));
}

TEST_CASE("covariance_factor examples") {
    const auto id = covariance_factor(AcfSpec::iid(1.0), 7);
    CHECK(id.factor.isApprox(Eigen::MatrixXd::Identity(7, 7)));
    CHECK(id.jitter_used == 0.0);

    const auto geo = covariance_factor(AcfSpec::geometric(0.5, 1.0), 2);
    Eigen::Matrix2d expected;
    expected << 1.0, 0.0, 0.5, std::sqrt(0.75);
    CHECK((geo.factor - expected).cwiseAbs().maxCoeff() < 1e-15);

    const auto poly = covariance_factor(AcfSpec::polynomial(0.25, 1.0), 3);
    Eigen::Matrix3d v;
    const double a = std::pow(2.0, -0.25), b = std::pow(3.0, -0.25);
    v << 1, a, b, a, 1, a, b, a, 1;
    CHECK((poly.factor * poly.factor.transpose() - v).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("covariance_factor reconstruction up to n = 1024") {
    for (const AcfSpec& spec : {AcfSpec::iid(4.0), AcfSpec::geometric(0.9, 4.0), AcfSpec::polynomial(0.25, 4.0)}) {
        const int n = 1024;
        const auto f = covariance_factor(spec, n);
        const Eigen::MatrixXd rebuilt = f.factor * f.factor.transpose();
        const double scale = spec.tau0 * spec.sigma2;
        double worst = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                worst = std::max(worst, std::abs(rebuilt(i, j) - scale * acf(spec, std::abs(i - j))));
        CHECK(worst <= 1e-8 * scale + f.jitter_used);
    }
}

TEST_CASE("sample_path determinism and identity factor") {
    const auto f = covariance_factor(AcfSpec::iid(1.0), 16);
    const Eigen::VectorXd a = sample_path(f, 99);
    const Eigen::VectorXd b = sample_path(f, 99);
    CHECK((a.array() == b.array()).all());
    CHECK((a.array() == standard_normal(16, 99).array()).all());
    CHECK((a.array() != sample_path(f, 100).array()).any());
}

TEST_CASE("child seeds are distinct") {
    std::set<std::uint64_t> seen;
    for (std::uint64_t m : {0ULL, 1ULL, 12345ULL})
        for (std::uint64_t i = 0; i < 1000; ++i) seen.insert(child_seed(m, i));
    CHECK(seen.size() == 3000);
    CHECK(child_seed(5, 3) == child_seed(5, 3));
}

TEST_CASE("paths are stationary with the right lag-1 correlation") {
    const int n = 40, paths = 1000;
    for (const AcfSpec& spec : {AcfSpec::iid(4.0), AcfSpec::geometric(0.9, 4.0), AcfSpec::polynomial(0.25, 4.0)}) {
        const auto f = covariance_factor(spec, n);
        Eigen::MatrixXd draws(paths, n);
        for (int p = 0; p < paths; ++p) draws.row(p) = sample_path(f, child_seed(2024, p)).transpose();
        const double var = spec.tau0 * spec.sigma2;
        // Variance of a sample variance from Gaussian data is 2 var^2 / (paths - 1).
        const double se = var * std::sqrt(2.0 / (paths - 1));
        for (int t = 0; t < n; ++t) {
            const double m = draws.col(t).mean();
            const double s2 = (draws.col(t).array() - m).square().sum() / (paths - 1);
            CHECK(std::abs(s2 - var) < 5.0 * se);
        }
        const double lag1 = (draws.col(10).array() * draws.col(11).array()).mean() / var;
        CHECK(std::abs(lag1 - acf(spec, 1)) < 5.0 / std::sqrt(static_cast<double>(paths)));
    }
}

TEST_CASE("empirical_acf") {
    Eigen::VectorXd s(4);
    s << 1, -1, 1, -1;
    const auto r = empirical_acf(s, 1);
    CHECK(r[0] == 1.0);
    CHECK(r[1] == doctest::Approx(-0.75));
    CHECK_THROWS_AS(empirical_acf(Eigen::VectorXd::Constant(5, 2.0), 1), DegenerateError);
    CHECK_THROWS_AS(empirical_acf(s, 4), InputError);

    const auto f = covariance_factor(AcfSpec::geometric(0.9), 4000);
    const auto long_run = empirical_acf(sample_path(f, 3), 2);
    CHECK(long_run[1] == doctest::Approx(0.9).epsilon(0.05));
}
