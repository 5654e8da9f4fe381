#include "kpls/cg_engine.hpp"
#include "kpls/error.hpp"
#include "kpls/gaussian_process.hpp"
#include "kpls/harness.hpp"
#include "kpls/source_theory.hpp"
#include "kpls/stopping.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12e", v);
    return buf;
}

// Reads "x,y" rows; a non-numeric first line is taken as a header.
kpls::Sample read_sample(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw kpls::ConfigError("cannot open " + path);
    std::vector<double> xs, ys;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string a, b;
        if (!std::getline(ls, a, ',') || !std::getline(ls, b, ','))
            throw kpls::ConfigError("expected two columns in " + path);
        try {
            xs.push_back(std::stod(a));
            ys.push_back(std::stod(b));
        } catch (const std::exception&) {
            if (!first) throw kpls::ConfigError("non-numeric row in " + path);
        }
        first = false;
    }
    kpls::Sample s;
    s.inputs = Eigen::Map<Eigen::VectorXd>(xs.data(), static_cast<Eigen::Index>(xs.size()));
    s.responses = Eigen::Map<Eigen::VectorXd>(ys.data(), static_cast<Eigen::Index>(ys.size()));
    return s;
}

std::ostream& open_or_stdout(const std::string& path, std::ofstream& file) {
    if (path.empty() || path == "-") return std::cout;
    file.open(path, std::ios::binary);
    if (!file) throw kpls::ConfigError("cannot write " + path);
    return file;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Kernel PLS / kernel CG regression for dependent data"};
    app.require_subcommand(1);

    // simulate
    auto* sim = app.add_subcommand("simulate", "sample a Gaussian design path and responses as CSV");
    std::string sim_acf = "iid", sim_out;
    double sim_param = 0.0, sim_sigma2 = 4.0, sim_eta = 1.0 / 16.0;
    int sim_n = 200;
    std::uint64_t sim_seed = 1;
    sim->add_option("--acf", sim_acf, "iid, geometric or polynomial");
    sim->add_option("--param", sim_param, "phi (geometric) or q (polynomial)");
    sim->add_option("--sigma2", sim_sigma2, "marginal variance scale");
    sim->add_option("--noise", sim_eta, "noise level eta");
    sim->add_option("-n,--n", sim_n, "path length")->check(CLI::PositiveNumber);
    sim->add_option("--seed", sim_seed, "seed");
    sim->add_option("-o,--out", sim_out, "output CSV (default stdout)");

    // fit
    auto* fit = app.add_subcommand("fit", "fit one x,y dataset and print the iterate trace");
    std::string fit_in, fit_method = "kpls", fit_out;
    double fit_l = 2.0;
    int fit_iter = 40;
    fit->add_option("input", fit_in, "CSV with columns x,y")->required();
    fit->add_option("--method", fit_method, "kpls or kcg");
    fit->add_option("--bandwidth", fit_l, "Gaussian kernel bandwidth l");
    fit->add_option("--max-iter", fit_iter, "maximum number of iterations");
    fit->add_option("-o,--out", fit_out, "output CSV (default stdout)");

    // experiment
    auto* exp = app.add_subcommand("experiment", "run the Monte Carlo study from a JSON config");
    std::string exp_config, exp_out, exp_summary, exp_rates, exp_svg;
    unsigned exp_threads = 0;
    exp->add_option("--config", exp_config, "JSON config file")->required();
    exp->add_option("--out", exp_out, "per-repetition CSV (default stdout)");
    exp->add_option("--summary", exp_summary, "summary CSV");
    exp->add_option("--rates", exp_rates, "rate table CSV");
    exp->add_option("--svg", exp_svg, "SVG figure");
    exp->add_option("--threads", exp_threads, "worker threads (0 = all cores)");

    // ed-table
    auto* ed = app.add_subcommand("ed-table", "effective dimensionality and its bound over lambda");
    double ed_l = 2.0, ed_sigma2 = 4.0, ed_lo = 1e-4, ed_hi = 1.0;
    int ed_points = 20;
    ed->add_option("--bandwidth", ed_l, "Gaussian kernel bandwidth l");
    ed->add_option("--sigma2", ed_sigma2, "design variance");
    ed->add_option("--lambda-min", ed_lo);
    ed->add_option("--lambda-max", ed_hi);
    ed->add_option("--points", ed_points)->check(CLI::PositiveNumber);

    // constants
    auto* con = app.add_subcommand("constants", "print C(q), gamma_n(q), a, b and D");
    double con_q = 1.0, con_l = 2.0, con_sigma2 = 4.0;
    long long con_n = 1000;
    con->add_option("--q", con_q, "polynomial decay exponent");
    con->add_option("-n,--n", con_n, "sample size");
    con->add_option("--bandwidth", con_l, "Gaussian kernel bandwidth l");
    con->add_option("--sigma2", con_sigma2, "design variance");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (*sim) {
            kpls::AcfSpec acf;
            acf.kind = kpls::acf_kind_from_string(sim_acf);
            if (acf.kind == kpls::AcfKind::geometric) acf.phi = sim_param;
            if (acf.kind == kpls::AcfKind::polynomial) acf.q = sim_param;
            acf.sigma2 = sim_sigma2;
            acf.validate();
            const auto factor = kpls::covariance_factor(acf, sim_n);
            const auto x = kpls::sample_path(factor, kpls::child_seed(sim_seed, 0));
            const auto eps = kpls::standard_normal(sim_n, kpls::child_seed(sim_seed, 1));
            const auto target = kpls::SourceFunctionSpec::simulation_target();
            std::ofstream file;
            std::ostream& out = open_or_stdout(sim_out, file);
            out << "x,y\n";
            for (int t = 0; t < sim_n; ++t)
                out << fmt(x(t)) << ',' << fmt(kpls::eval_source(target, x(t)) + sim_eta * eps(t)) << '\n';
        } else if (*fit) {
            const auto sample = read_sample(fit_in);
            sample.validate();
            const auto spec = kpls::KernelSpec::gaussian(fit_l);
            spec.validate();
            const auto method = kpls::method_from_string(fit_method);
            const auto trace = kpls::fit_krylov(kpls::kernel_matrix(spec, sample.inputs), sample.responses,
                                                kpls::method_order(method), fit_iter);
            std::ofstream file;
            std::ostream& out = open_or_stdout(fit_out, file);
            out << "iteration,euclid_residual,h_residual\n";
            for (int i = 0; i < trace.iterations(); ++i)
                out << i + 1 << ',' << fmt(trace.euclid_residuals[static_cast<std::size_t>(i)]) << ','
                    << fmt(trace.h_residuals[static_cast<std::size_t>(i)]) << '\n';
        } else if (*exp) {
            const auto config = kpls::load_config(exp_config);
            const auto report = kpls::run_experiment(config, exp_threads);
            std::ofstream file;
            kpls::write_rows_csv(open_or_stdout(exp_out, file), report.rows);
            if (!exp_summary.empty()) {
                std::ofstream s;
                kpls::write_summary_csv(open_or_stdout(exp_summary, s), report);
            }
            if (!exp_rates.empty()) {
                std::ofstream s;
                kpls::write_rate_csv(open_or_stdout(exp_rates, s), report);
            }
            if (!exp_svg.empty()) {
                std::ofstream s;
                kpls::write_svg(open_or_stdout(exp_svg, s), report);
            }
        } else if (*ed) {
            if (!(ed_lo > 0.0 && ed_hi <= 1.0 && ed_lo <= ed_hi))
                throw kpls::ConfigError("lambda range must satisfy 0 < min <= max <= 1");
            const auto pair = kpls::gauss_kernel_eigs(ed_l, ed_sigma2);
            std::cout << "lambda,d_lambda,bound\n";
            for (int i = 0; i < ed_points; ++i) {
                const double t = ed_points == 1 ? 0.0 : static_cast<double>(i) / (ed_points - 1);
                const double lambda = std::exp(std::log(ed_lo) + t * (std::log(ed_hi) - std::log(ed_lo)));
                std::cout << fmt(lambda) << ',' << fmt(kpls::effective_dim(lambda, pair)) << ','
                          << fmt(kpls::effective_dim_bound(lambda, pair)) << '\n';
            }
        } else if (*con) {
            const auto pair = kpls::gauss_kernel_eigs(con_l, con_sigma2);
            std::cout << "C(q) = " << fmt(kpls::acf_sum_constant(con_q)) << '\n'
                      << "gamma_n(q) = " << fmt(kpls::gamma_n(con_q, con_n)) << '\n'
                      << "a = " << fmt(pair.a) << '\n'
                      << "b = " << fmt(pair.b) << '\n'
                      << "D = " << fmt(kpls::effective_dim_constant(pair)) << '\n';
        }
    } catch (const kpls::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const kpls::InputError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const kpls::Error& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    }
    return 0;
}
