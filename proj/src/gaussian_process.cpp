#include "kpls/gaussian_process.hpp"

#include "kpls/error.hpp"

#include <cmath>
#include <random>
#include <string>

namespace kpls {

std::string_view to_string(AcfKind kind) {
    switch (kind) {
    case AcfKind::iid: return "iid";
    case AcfKind::geometric: return "geometric";
    case AcfKind::polynomial: return "polynomial";
    }
    return "unknown";
}

AcfKind acf_kind_from_string(std::string_view name) {
    if (name == "iid") return AcfKind::iid;
    if (name == "geometric") return AcfKind::geometric;
    if (name == "polynomial") return AcfKind::polynomial;
    throw InputError("unknown acf kind '" + std::string(name) + "'");
}

double AcfSpec::parameter() const {
    switch (kind) {
    case AcfKind::iid: return 0.0;
    case AcfKind::geometric: return phi;
    case AcfKind::polynomial: return q;
    }
    return 0.0;
}

void AcfSpec::validate() const {
    if (!(tau0 > 0.0) || !std::isfinite(tau0)) throw InputError("acf tau0 must be positive");
    if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) throw InputError("acf sigma2 must be positive");
    if (kind == AcfKind::geometric && !(phi > 0.0 && phi < 1.0))
        throw InputError("geometric acf needs phi in (0, 1)");
    if (kind == AcfKind::polynomial && (!(q > 0.0) || !std::isfinite(q)))
        throw InputError("polynomial acf needs q > 0");
}

double acf(const AcfSpec& spec, long long h) {
    if (h < 0) throw InputError("acf lag must be non-negative");
    switch (spec.kind) {
    case AcfKind::iid: return h == 0 ? 1.0 : 0.0;
    case AcfKind::geometric: return std::pow(spec.phi, static_cast<double>(h));
    case AcfKind::polynomial: return std::pow(1.0 + static_cast<double>(h), -spec.q);
    }
    return 0.0;
}

CovarianceFactor covariance_factor(const AcfSpec& spec, int n) {
    spec.validate();
    if (n < 1) throw InputError("covariance_factor: n must be at least 1");

    const double scale = spec.tau0 * spec.sigma2;
    Eigen::VectorXd column(n);
    for (int h = 0; h < n; ++h) column(h) = scale * acf(spec, h);

    Eigen::MatrixXd cov(n, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) cov(i, j) = column(std::abs(i - j));

    const double jitters[] = {0.0, 1e-12, 1e-10, 1e-8};
    for (double jitter : jitters) {
        Eigen::MatrixXd shifted = cov;
        shifted.diagonal().array() += jitter * scale;
        Eigen::LLT<Eigen::MatrixXd> llt(shifted);
        if (llt.info() == Eigen::Success) {
            CovarianceFactor out;
            out.n = n;
            out.factor = llt.matrixL();
            out.jitter_used = jitter * scale;
            return out;
        }
    }
    const double smallest = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(cov, Eigen::EigenvaluesOnly)
                                .eigenvalues()
                                .minCoeff();
    throw SpectrumError("Toeplitz covariance is not positive definite (smallest eigenvalue " +
                            std::to_string(smallest) + ")",
                        smallest);
}

std::uint64_t child_seed(std::uint64_t master, std::uint64_t index) {
    auto mix = [](std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    };
    return mix(mix(master) ^ (index * 0xd1b54a32d192ed03ULL + 0x8cb92ba72f3d8dd7ULL));
}

Eigen::VectorXd standard_normal(int n, std::uint64_t seed) {
    std::mt19937_64 engine(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::VectorXd z(n);
    for (int i = 0; i < n; ++i) z(i) = normal(engine);
    return z;
}

Eigen::VectorXd sample_path(const CovarianceFactor& factor, std::uint64_t seed) {
    if (factor.factor.rows() != factor.n || factor.factor.cols() != factor.n)
        throw InputError("covariance factor has inconsistent shape");
    const Eigen::VectorXd z = standard_normal(factor.n, seed);
    return factor.factor.triangularView<Eigen::Lower>() * z;
}

std::vector<double> empirical_acf(const Eigen::VectorXd& series, int max_lag) {
    const Eigen::Index n = series.size();
    if (max_lag < 0 || max_lag >= n) throw InputError("empirical_acf: max_lag must lie in [0, n)");
    const Eigen::VectorXd centered = series.array() - series.mean();
    const double denom = centered.squaredNorm();
    if (!(denom > 0.0)) throw DegenerateError("empirical_acf: series is constant");

    std::vector<double> out(static_cast<std::size_t>(max_lag) + 1);
    out[0] = 1.0;
    for (int h = 1; h <= max_lag; ++h)
        out[static_cast<std::size_t>(h)] =
            centered.head(n - h).dot(centered.tail(n - h)) / denom;
    return out;
}

}  // namespace kpls
