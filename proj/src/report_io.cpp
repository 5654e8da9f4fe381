#include "kpls/error.hpp"
#include "kpls/harness.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

namespace kpls {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    if (!obj.is_object()) throw ConfigError(where + " must be a JSON object");
    for (const auto& item : obj.items())
        if (!allowed.count(item.key()))
            throw ConfigError("unknown key '" + item.key() + "' in " + where);
}

template <class T>
void read(const json& obj, const char* key, T& out) {
    if (obj.contains(key)) out = obj.at(key).get<T>();
}

KernelSpec parse_kernel(const json& j) {
    reject_unknown(j, {"kind", "bandwidth", "kappa"}, "kernel");
    KernelSpec spec;
    if (j.contains("kind")) spec.kind = kernel_kind_from_string(j.at("kind").get<std::string>());
    read(j, "bandwidth", spec.bandwidth);
    read(j, "kappa", spec.kappa);
    return spec;
}

AcfSpec parse_acf(const json& j) {
    reject_unknown(j, {"kind", "phi", "q", "tau0", "sigma2"}, "acf");
    AcfSpec spec;
    if (j.contains("kind")) spec.kind = acf_kind_from_string(j.at("kind").get<std::string>());
    read(j, "phi", spec.phi);
    read(j, "q", spec.q);
    read(j, "tau0", spec.tau0);
    read(j, "sigma2", spec.sigma2);
    return spec;
}

SourceFunctionSpec parse_source(const json& j) {
    reject_unknown(j, {"mu", "bandwidth_l", "sigma2_x", "centers", "coefficients", "normalization"},
                   "source");
    SourceFunctionSpec spec = SourceFunctionSpec::simulation_target();
    read(j, "mu", spec.mu);
    read(j, "bandwidth_l", spec.bandwidth_l);
    read(j, "sigma2_x", spec.sigma2_x);
    read(j, "centers", spec.centers);
    read(j, "coefficients", spec.coefficients);
    read(j, "normalization", spec.normalization);
    return spec;
}

StoppingSpec parse_stopping(const json& j) {
    reject_unknown(j, {"form", "threshold", "max_index"}, "stopping");
    StoppingSpec spec;
    if (j.contains("form")) spec.form = stopping_form_from_string(j.at("form").get<std::string>());
    read(j, "threshold", spec.threshold);
    read(j, "max_index", spec.max_index);
    return spec;
}

std::string num(double v) {
    if (std::isnan(v)) return "nan";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12e", v);
    return buf;
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
    ExperimentConfig config;
    try {
        const json j = json::parse(json_text);
        reject_unknown(j,
                       {"kernel", "acf", "source", "noise_eta", "sample_sizes", "repetitions",
                        "max_iterations", "stopping", "master_seed", "methods", "innovation_variance"},
                       "config");
        if (j.contains("kernel")) config.kernel = parse_kernel(j.at("kernel"));
        if (j.contains("acf")) config.acf = parse_acf(j.at("acf"));
        if (j.contains("source")) config.source = parse_source(j.at("source"));
        if (j.contains("stopping")) config.stopping = parse_stopping(j.at("stopping"));
        read(j, "noise_eta", config.noise_eta);
        read(j, "sample_sizes", config.sample_sizes);
        read(j, "repetitions", config.repetitions);
        read(j, "max_iterations", config.max_iterations);
        read(j, "master_seed", config.master_seed);
        read(j, "innovation_variance", config.innovation_variance);
        if (j.contains("methods")) {
            config.methods.clear();
            for (const auto& m : j.at("methods")) config.methods.push_back(method_from_string(m.get<std::string>()));
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("invalid config: ") + e.what());
    } catch (const InputError& e) {
        throw ConfigError(e.what());
    }
    config.validate();
    return config;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

void write_rows_csv(std::ostream& out, std::span<const ExperimentRow> rows) {
    out << "method,n,acf_kind,q_or_phi,repetition,seed,chosen_index,terminated_at,l2_error\n";
    for (const auto& r : rows) {
        out << to_string(r.method) << ',' << r.n << ',' << to_string(r.acf_kind) << ','
            << num(r.acf_parameter) << ',' << r.repetition << ',' << r.seed << ',' << r.chosen_index
            << ',' << r.terminated_at << ',' << num(r.failed ? std::nan("") : r.l2_error) << '\n';
    }
}

void write_summary_csv(std::ostream& out, const ExperimentReport& report) {
    out << "method,n,acf_kind,effective_repetitions,error_mean,error_sd,error_median,error_q1,error_q3,"
           "index_mean,index_median\n";
    for (const auto& s : report.summary) {
        out << to_string(s.method) << ',' << s.n << ',' << to_string(s.acf_kind) << ','
            << s.effective_repetitions << ',' << num(s.error.mean) << ',' << num(s.error.sd) << ','
            << num(s.error.median) << ',' << num(s.error.q1) << ',' << num(s.error.q3) << ','
            << num(s.index.mean) << ',' << num(s.index.median) << '\n';
    }
}

void write_rate_csv(std::ostream& out, const ExperimentReport& report) {
    out << "method,acf_kind,slope,intercept\n";
    for (const auto& r : report.rate_table)
        out << to_string(r.method) << ',' << to_string(r.acf_kind) << ',' << num(r.slope) << ','
            << num(r.intercept) << '\n';
}

void write_svg(std::ostream& out, const ExperimentReport& report) {
    const double width = 760, height = 360, pad = 50, panel = (width - 3 * pad) / 2;
    const auto& sm = report.summary;

    double lo = INFINITY, hi = -INFINITY, slo = INFINITY, shi = -INFINITY;
    for (const auto& s : sm) {
        if (s.effective_repetitions == 0) continue;
        lo = std::min(lo, s.error.q1);
        hi = std::max(hi, s.error.q3);
        const double scaled = s.error.mean * s.n / std::log(static_cast<double>(s.n));
        slo = std::min(slo, scaled);
        shi = std::max(shi, scaled);
    }
    if (!(hi > lo)) hi = lo + 1.0;
    if (!(shi > slo)) shi = slo + 1.0;

    char buf[256];
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << pad << "\" y=\"20\">L2 error quartiles</text>\n";
    out << "<text x=\"" << 2 * pad + panel << "\" y=\"20\">mean error * n / log n</text>\n";

    const double top = 35, bottom = height - pad;
    auto ypos = [&](double v, double a, double b) { return bottom - (v - a) / (b - a) * (bottom - top); };
    const double slot = sm.empty() ? panel : panel / static_cast<double>(sm.size());
    for (std::size_t i = 0; i < sm.size(); ++i) {
        const auto& s = sm[i];
        if (s.effective_repetitions == 0) continue;
        const double cx = pad + slot * (static_cast<double>(i) + 0.5);
        const char* color = s.method == Method::kpls ? "#333333" : "#999999";
        std::snprintf(buf, sizeof buf,
                      "<rect x=\"%.1f\" y=\"%.1f\" width=\"%.1f\" height=\"%.1f\" fill=\"none\" stroke=\"%s\"/>\n",
                      cx - slot * 0.3, ypos(s.error.q3, lo, hi), slot * 0.6,
                      ypos(s.error.q1, lo, hi) - ypos(s.error.q3, lo, hi), color);
        out << buf;
        std::snprintf(buf, sizeof buf,
                      "<line x1=\"%.1f\" x2=\"%.1f\" y1=\"%.1f\" y2=\"%.1f\" stroke=\"%s\"/>\n",
                      cx - slot * 0.3, cx + slot * 0.3, ypos(s.error.median, lo, hi),
                      ypos(s.error.median, lo, hi), color);
        out << buf;
        std::snprintf(buf, sizeof buf, "<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"middle\">%s %d</text>\n", cx,
                      bottom + 15, std::string(to_string(s.method)).c_str(), s.n);
        out << buf;
    }

    for (Method method : {Method::kpls, Method::kcg}) {
        std::vector<const SummaryRow*> pts;
        for (const auto& s : sm)
            if (s.method == method && s.effective_repetitions > 0) pts.push_back(&s);
        if (pts.empty()) continue;
        const double step = panel / static_cast<double>(std::max<std::size_t>(pts.size() - 1, 1));
        out << "<polyline fill=\"none\" stroke=\"" << (method == Method::kpls ? "#333333" : "#999999")
            << "\" points=\"";
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const double scaled = pts[i]->error.mean * pts[i]->n / std::log(static_cast<double>(pts[i]->n));
            std::snprintf(buf, sizeof buf, "%.1f,%.1f ", 2 * pad + panel + step * static_cast<double>(i),
                          ypos(scaled, slo, shi));
            out << buf;
        }
        out << "\"/>\n";
    }
    out << "</svg>\n";
}

}  // namespace kpls
