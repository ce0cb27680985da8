#include "belltomo/runner.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "belltomo/oracle.hpp"
#include "belltomo/sampler.hpp"

namespace belltomo {

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// analytic reference for a point; throws degenerate_denominator at Λ = 0
struct AnalyticRef {
    double bell;
    std::array<double, 4> correlations;
    double deficit;
};

AnalyticRef analytic_reference(const NopaParams& params, const BellAngles& a) {
    AnalyticRef ref;
    const int n_max = oracle::default_n_max;
    ref.correlations = {
        oracle::correlation_exact(params, a.alpha, a.beta, n_max),
        oracle::correlation_exact(params, a.alpha, a.beta_prime, n_max),
        oracle::correlation_exact(params, a.alpha_prime, a.beta_prime, n_max),
        oracle::correlation_exact(params, a.alpha_prime, a.beta, n_max)};
    ref.bell = std::abs(ref.correlations[0] - ref.correlations[1]) +
               std::abs(ref.correlations[2] + ref.correlations[3]);
    ref.deficit = oracle::build_state(params, n_max).deficit();
    return ref;
}

std::string failure_marker(const std::exception& e) {
    if (dynamic_cast<const degenerate_denominator*>(&e)) return "degenerate_denominator";
    if (dynamic_cast<const kernel_divergence*>(&e)) return "kernel_divergence";
    if (dynamic_cast<const invalid_parameter*>(&e)) return "invalid_parameter";
    if (dynamic_cast<const convention_violation*>(&e)) return "convention_violation";
    return "error";
}

void append_blocked(std::ostringstream& os, const char* label, const BlockedEstimate& e,
                    double analytic) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "  %-10s %+.6f +- %.6f   (exact %+.9f)\n", label,
                  e.value, e.std_error, analytic);
    os << buf;
}

nlohmann::json blocked_to_json(const BlockedEstimate& e) {
    return {{"value", e.value},
            {"std_error", e.std_error},
            {"n_blocks", e.n_blocks},
            {"n_samples", e.n_samples}};
}

BlockedEstimate blocked_from_json(const nlohmann::json& j) {
    BlockedEstimate e;
    e.value = j.at("value").get<double>();
    e.std_error = j.at("std_error").get<double>();
    e.n_blocks = j.at("n_blocks").get<int>();
    e.n_samples = j.at("n_samples").get<long long>();
    return e;
}

void csv_row(std::ostringstream& os, const PointResult& p) {
    const auto& est = p.estimate;
    os << fmt17(p.sweep_value) << ',' << fmt17(est.bell.value) << ','
       << fmt17(est.bell.std_error);
    for (const auto& c : est.correlations)
        os << ',' << fmt17(c.value) << ',' << fmt17(c.std_error);
    os << ',' << fmt17(est.prob_one_pair.value) << ','
       << fmt17(est.prob_one_pair.std_error) << ',' << fmt17(p.bell_analytic) << ','
       << p.status << '\n';
}

constexpr const char* kCsvHeader =
    "sweep_value,B,B_err,C_ab,C_ab_err,C_abp,C_abp_err,C_apbp,C_apbp_err,"
    "C_apb,C_apb_err,P11,P11_err,B_analytic,status\n";

PointResult empty_point(double sweep_value, const std::string& status) {
    PointResult p;
    p.sweep_value = sweep_value;
    p.status = status;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    p.estimate.bell = {nan, nan, 0, 0};
    for (auto& c : p.estimate.correlations) c = {nan, nan, 0, 0};
    p.estimate.prob_one_pair = {nan, nan, 0, 0};
    return p;
}

}  // namespace

int resolve_workers(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("BELLTOMO_WORKERS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 1 && v <= 4096)
            return static_cast<int>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

RunReport run_single(const RunConfig& cfg) {
    const auto check = validate_run_config(cfg.run.params, cfg.run.angles, cfg.run.eta,
                                           cfg.run.n_samples, cfg.run.n_blocks,
                                           cfg.run.seed);
    if (!check.ok) {
        std::string msg = "invalid run configuration:";
        for (const auto& v : check.violations) msg += "\n  " + v;
        throw invalid_parameter(msg);
    }

    RunReport report;
    report.run = check.normalized;
    report.workers_used = resolve_workers(cfg.workers);

    // exact reference first: a degenerate state fails before any sampling
    const auto ref = analytic_reference(report.run.params, report.run.angles);
    report.bell_analytic = ref.bell;
    report.correlation_analytic = ref.correlations;
    report.truncation_deficit = ref.deficit;

    const auto t0 = std::chrono::steady_clock::now();
    report.estimate =
        estimate_bell(report.run.params, report.run.angles, report.run.eta,
                      report.run.n_samples, report.run.n_blocks, report.run.seed,
                      report.workers_used);
    const auto t1 = std::chrono::steady_clock::now();
    report.wall_seconds = std::chrono::duration<double>(t1 - t0).count();
    report.events_per_second =
        report.wall_seconds > 0.0 ? report.run.n_samples / report.wall_seconds : 0.0;

    if (!cfg.dump_path.empty()) dump_events(report.run, cfg.dump_path);
    return report;
}

std::vector<double> SweepSpec::values() const {
    if (steps < 1) throw invalid_parameter("sweep needs at least one step");
    std::vector<double> vs(steps);
    if (steps == 1) {
        vs[0] = start;
        return vs;
    }
    const double h = (stop - start) / (steps - 1);
    for (int i = 0; i < steps; ++i) vs[i] = start + h * i;
    vs[steps - 1] = stop;  // land exactly on the endpoint
    return vs;
}

std::vector<PointResult> run_sweep(const RunConfig& cfg, const SweepSpec& spec) {
    std::vector<PointResult> out;
    const auto values = spec.values();
    for (std::size_t i = 0; i < values.size(); ++i) {
        RunConfig point_cfg = cfg;
        point_cfg.run.seed = sub_seed(cfg.run.seed, i);
        point_cfg.dump_path.clear();  // dumps are for single runs only
        if (spec.axis == SweepSpec::Axis::phi)
            point_cfg.run.params.phi = values[i];
        else
            point_cfg.run.eta.eta = values[i];
        try {
            const RunReport r = run_single(point_cfg);
            PointResult p;
            p.sweep_value = values[i];
            p.status = "ok";
            p.estimate = r.estimate;
            p.bell_analytic = r.bell_analytic;
            out.push_back(p);
        } catch (const std::exception& e) {
            out.push_back(empty_point(values[i], failure_marker(e)));
        }
    }
    return out;
}

std::string format_report_text(const RunReport& r) {
    std::ostringstream os;
    char buf[200];
    const auto& p = r.run.params;
    os << "twin-beam Bell run\n";
    std::snprintf(buf, sizeof buf,
                  "  lambda     %.9g%+.9gi   (mean photons per mode %.6g)\n",
                  p.lambda.real(), p.lambda.imag(), p.mean_photon());
    os << buf;
    std::snprintf(buf, sizeof buf, "  phase      %.9g\n  eta        %.9g\n",
                  p.phi, r.run.eta.eta);
    os << buf;
    std::snprintf(buf, sizeof buf, "  angles     a=%.9g b=%.9g a'=%.9g b'=%.9g\n",
                  r.run.angles.alpha, r.run.angles.beta, r.run.angles.alpha_prime,
                  r.run.angles.beta_prime);
    os << buf;
    std::snprintf(buf, sizeof buf,
                  "  events     %lld in %d blocks, seed %llu, %d workers\n",
                  r.run.n_samples, r.run.n_blocks,
                  static_cast<unsigned long long>(r.run.seed), r.workers_used);
    os << buf;
    append_blocked(os, "B", r.estimate.bell, r.bell_analytic);
    static const char* kLabels[4] = {"C(a,b)", "C(a,b')", "C(a',b')", "C(a',b)"};
    for (int j = 0; j < 4; ++j)
        append_blocked(os, kLabels[j], r.estimate.correlations[j],
                       r.correlation_analytic[j]);
    std::snprintf(buf, sizeof buf, "  %-10s %+.6f +- %.6f\n", "P(1,1)",
                  r.estimate.prob_one_pair.value, r.estimate.prob_one_pair.std_error);
    os << buf;
    std::snprintf(buf, sizeof buf,
                  "  reference truncation deficit %.3g\n"
                  "  wall %.3f s, %.3g events/s\n",
                  r.truncation_deficit, r.wall_seconds, r.events_per_second);
    os << buf;
    return os.str();
}

std::string report_to_json_string(const RunReport& r) {
    nlohmann::json j;
    j["config"] = {{"lambda_re", r.run.params.lambda.real()},
                   {"lambda_im", r.run.params.lambda.imag()},
                   {"phi", r.run.params.phi},
                   {"eta", r.run.eta.eta},
                   {"alpha", r.run.angles.alpha},
                   {"beta", r.run.angles.beta},
                   {"alpha_prime", r.run.angles.alpha_prime},
                   {"beta_prime", r.run.angles.beta_prime},
                   {"n_samples", r.run.n_samples},
                   {"n_blocks", r.run.n_blocks},
                   {"seed", r.run.seed},
                   {"workers", r.workers_used}};
    j["bell"] = blocked_to_json(r.estimate.bell);
    static const char* kKeys[4] = {"c_ab", "c_abp", "c_apbp", "c_apb"};
    for (int k = 0; k < 4; ++k) j[kKeys[k]] = blocked_to_json(r.estimate.correlations[k]);
    j["p11"] = blocked_to_json(r.estimate.prob_one_pair);
    j["bell_analytic"] = r.bell_analytic;
    j["correlation_analytic"] = r.correlation_analytic;
    j["truncation_deficit"] = r.truncation_deficit;
    j["wall_seconds"] = r.wall_seconds;
    j["events_per_second"] = r.events_per_second;
    return j.dump(2) + "\n";
}

RunReport report_from_json_string(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw io_failure(std::string("report parse: ") + e.what());
    }
    RunReport r;
    const auto& c = j.at("config");
    r.run.params.lambda = {c.at("lambda_re").get<double>(),
                           c.at("lambda_im").get<double>()};
    r.run.params.phi = c.at("phi").get<double>();
    r.run.eta.eta = c.at("eta").get<double>();
    r.run.angles.alpha = c.at("alpha").get<double>();
    r.run.angles.beta = c.at("beta").get<double>();
    r.run.angles.alpha_prime = c.at("alpha_prime").get<double>();
    r.run.angles.beta_prime = c.at("beta_prime").get<double>();
    r.run.n_samples = c.at("n_samples").get<long long>();
    r.run.n_blocks = c.at("n_blocks").get<int>();
    r.run.seed = c.at("seed").get<std::uint64_t>();
    r.workers_used = c.at("workers").get<int>();
    r.estimate.bell = blocked_from_json(j.at("bell"));
    static const char* kKeys[4] = {"c_ab", "c_abp", "c_apbp", "c_apb"};
    for (int k = 0; k < 4; ++k)
        r.estimate.correlations[k] = blocked_from_json(j.at(kKeys[k]));
    r.estimate.prob_one_pair = blocked_from_json(j.at("p11"));
    r.bell_analytic = j.at("bell_analytic").get<double>();
    const auto ca = j.at("correlation_analytic");
    for (int k = 0; k < 4; ++k) r.correlation_analytic[k] = ca.at(k).get<double>();
    r.truncation_deficit = j.at("truncation_deficit").get<double>();
    r.wall_seconds = j.at("wall_seconds").get<double>();
    r.events_per_second = j.at("events_per_second").get<double>();
    return r;
}

std::string sweep_to_csv(const std::vector<PointResult>& points) {
    std::ostringstream os;
    os << kCsvHeader;
    for (const auto& p : points) csv_row(os, p);
    return os.str();
}

std::string report_to_csv(const RunReport& r) {
    PointResult p;
    p.sweep_value = r.run.params.phi;
    p.status = "ok";
    p.estimate = r.estimate;
    p.bell_analytic = r.bell_analytic;
    return sweep_to_csv({p});
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_failure("cannot open for writing: " + path);
    out << content;
    if (!out) throw io_failure("write failed: " + path);
}

void dump_events(const RunParams& run, const std::string& path) {
    const bool csv = path.size() >= 4 && path.substr(path.size() - 4) == ".csv";
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_failure("cannot open for writing: " + path);
    if (csv) out << "x1,x2,x3,x4,phi1,phi2,phi3,phi4\n";

    const EventSampler sampler(run.params, run.eta);
    const long long block_size = run.n_samples / run.n_blocks;
    const long long remainder = run.n_samples % run.n_blocks;
    const int n_units = run.n_blocks + (remainder > 0 ? 1 : 0);
    for (int unit = 0; unit < n_units; ++unit) {
        const long long count = unit < run.n_blocks ? block_size : remainder;
        RngStream rng(sub_seed(run.seed, static_cast<std::uint64_t>(unit)));
        for (long long i = 0; i < count; ++i) {
            const QuadSample ev = sampler.sample(rng);
            if (csv) {
                out << fmt17(ev.x[0]);
                for (int m = 1; m < 4; ++m) out << ',' << fmt17(ev.x[m]);
                for (int m = 0; m < 4; ++m) out << ',' << fmt17(ev.phase[m]);
                out << '\n';
            } else {
                double row[8] = {ev.x[0], ev.x[1], ev.x[2], ev.x[3],
                                 ev.phase[0], ev.phase[1], ev.phase[2], ev.phase[3]};
                out.write(reinterpret_cast<const char*>(row), sizeof row);
            }
        }
    }
    if (!out) throw io_failure("write failed: " + path);
}

}  // namespace belltomo
