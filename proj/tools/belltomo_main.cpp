// Command-line front end: simulate | sweep-phi | sweep-eta | oracle | selftest.
// Exit codes: 0 ok, 2 invalid configuration, 3 numerical failure
// (degenerate denominator, convention violation, failed selftest), 4 I/O.

#include <chrono>
#include <complex>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "belltomo/core.hpp"
#include "belltomo/estimator.hpp"
#include "belltomo/kernel.hpp"
#include "belltomo/oracle.hpp"
#include "belltomo/runner.hpp"
#include "belltomo/sampler.hpp"
#include "belltomo/stats.hpp"

namespace {

using namespace belltomo;

struct CommonOpts {
    double lambda_mag = 0.5;
    double mean_photon = -1.0;  // <0 means not given
    double phase = pi;
    double eta = 1.0;
    double alpha = 0.0;
    double beta = 3.0 * pi / 8.0;
    double alpha_prime = pi / 4.0;
    double beta_prime = pi / 8.0;
    long long samples = 1000000;
    int blocks = 20;
    std::uint64_t seed = 1;
    int workers = 0;
    std::string out;
    std::string format = "report";
    std::string dump;
};

void add_state_flags(CLI::App* cmd, CommonOpts& o) {
    auto* lam = cmd->add_option("--lambda", o.lambda_mag,
                                "squeezing amplitude magnitude, in [0, 1)");
    auto* nm = cmd->add_option("--mean-photon", o.mean_photon,
                               "mean photons per mode (alternative to --lambda)");
    lam->excludes(nm);
    nm->excludes(lam);
    cmd->add_option("--crystal-phase", o.phase, "relative phase of the second twin beam");
    cmd->add_option("--alpha", o.alpha, "polarizer angle a");
    cmd->add_option("--beta", o.beta, "polarizer angle b");
    cmd->add_option("--alpha2", o.alpha_prime, "polarizer angle a'");
    cmd->add_option("--beta2", o.beta_prime, "polarizer angle b'");
}

void add_run_flags(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--eta", o.eta, "detection efficiency, must stay above 1/2");
    cmd->add_option("--samples", o.samples, "number of homodyne events");
    cmd->add_option("--blocks", o.blocks, "number of error-estimation blocks");
    cmd->add_option("--seed", o.seed, "master seed");
    cmd->add_option("--workers", o.workers,
                    "worker threads (0 = BELLTOMO_WORKERS env or hardware)");
    cmd->add_option("--out", o.out, "output file (default stdout)");
    cmd->add_option("--format", o.format, "simulate output format")
        ->check(CLI::IsMember({"report", "csv"}));
    cmd->add_option("--dump", o.dump,
                    "write every event (x1..x4, phi1..phi4) to this file; "
                    ".csv extension selects text, otherwise raw f64");
}

RunConfig make_config(const CommonOpts& o) {
    RunConfig cfg;
    cfg.run.params.lambda =
        o.mean_photon >= 0.0 ? lambda_from_mean_photon(o.mean_photon) : o.lambda_mag;
    cfg.run.params.phi = o.phase;
    cfg.run.angles = {o.alpha, o.beta, o.alpha_prime, o.beta_prime};
    cfg.run.eta.eta = o.eta;
    cfg.run.n_samples = o.samples;
    cfg.run.n_blocks = o.blocks;
    cfg.run.seed = o.seed;
    cfg.workers = o.workers;
    cfg.output_path = o.out;
    cfg.format = o.format == "csv" ? OutputFormat::csv : OutputFormat::report;
    cfg.dump_path = o.dump;
    return cfg;
}

void emit(const std::string& out_path, const std::string& content) {
    if (out_path.empty())
        std::cout << content;
    else
        write_text_file(out_path, content);
}

int cmd_simulate(const CommonOpts& o) {
    const RunConfig cfg = make_config(o);
    const RunReport report = run_single(cfg);
    emit(cfg.output_path, cfg.format == OutputFormat::csv ? report_to_csv(report)
                                                          : format_report_text(report));
    return 0;
}

int cmd_sweep(const CommonOpts& o, SweepSpec::Axis axis, double from, double to,
              int steps) {
    const RunConfig cfg = make_config(o);
    SweepSpec spec;
    spec.axis = axis;
    spec.start = from;
    spec.stop = to;
    spec.steps = steps;
    const auto points = run_sweep(cfg, spec);
    emit(cfg.output_path, sweep_to_csv(points));
    // partial failures are recorded in the CSV, not fatal
    return 0;
}

int cmd_oracle(const CommonOpts& o, int n_max) {
    NopaParams params;
    params.lambda =
        o.mean_photon >= 0.0 ? lambda_from_mean_photon(o.mean_photon) : o.lambda_mag;
    params.phi = o.phase;
    const BellAngles angles{o.alpha, o.beta, o.alpha_prime, o.beta_prime};
    params.validate();
    angles.validate();

    const auto detail =
        oracle::correlation_detail(params, angles.alpha, angles.beta, n_max);
    const double cs[4] = {
        detail.correlation,
        oracle::correlation_exact(params, angles.alpha, angles.beta_prime, n_max),
        oracle::correlation_exact(params, angles.alpha_prime, angles.beta_prime, n_max),
        oracle::correlation_exact(params, angles.alpha_prime, angles.beta, n_max)};
    const double bell = std::abs(cs[0] - cs[1]) + std::abs(cs[2] + cs[3]);

    std::ostringstream os;
    char buf[160];
    std::snprintf(buf, sizeof buf, "exact reference, truncation n_max = %d\n", n_max);
    os << buf;
    static const char* kLabels[4] = {"C(a,b)", "C(a,b')", "C(a',b')", "C(a',b)"};
    for (int j = 0; j < 4; ++j) {
        std::snprintf(buf, sizeof buf, "  %-10s %+.15g\n", kLabels[j], cs[j]);
        os << buf;
    }
    std::snprintf(buf, sizeof buf,
                  "  %-10s %+.15g\n  %-10s %.15g\n  deficit    %.3g\n", "B", bell,
                  "P(1,1)", detail.prob_one_pair,
                  oracle::build_state(params, n_max).deficit());
    os << buf;
    emit(o.out, os.str());
    return 0;
}

struct KernelCheck {
    const char* name;
    double rho00, rho11;
    std::complex<double> rho01;
};

int cmd_selftest(long long samples, int workers) {
    int failures = 0;
    auto report = [&](bool ok, const std::string& line) {
        std::cout << (ok ? "[ok]   " : "[FAIL] ") << line << "\n";
        if (!ok) ++failures;
    };

    // kernel averages against exact density matrices, three states, three
    // efficiencies; 6 standard errors is a ~1e-9 false-alarm rate per cell
    const std::complex<double> c_amp{0.25, 0.4330127018922193};  // 0.5 e^{i pi/3}
    const double c2 = std::norm(c_amp);
    const KernelCheck checks[] = {
        {"vacuum", 1.0, 0.0, {0.0, 0.0}},
        {"coherent", std::exp(-c2), c2 * std::exp(-c2), std::conj(c_amp) * std::exp(-c2)},
        {"one-photon", 0.0, 1.0, {0.0, 0.0}},
    };
    std::uint64_t stream = 0;
    for (double eta_val : {1.0, 0.85, 0.65}) {
        const Efficiency eta{eta_val};
        for (const auto& chk : checks) {
            RngStream rng(sub_seed(9000, stream++));
            CompensatedSum s0, s1, sre, sim, q0, q1;
            for (long long i = 0; i < samples; ++i) {
                SingleModeSample sm;
                if (chk.name[0] == 'v')
                    sm = sample_vacuum(eta, rng);
                else if (chk.name[0] == 'c')
                    sm = sample_coherent(c_amp, eta, rng);
                else
                    sm = sample_one_photon(eta, rng);
                const KernelValues kv = kernel_values(sm.x, sm.phase, eta);
                s0.add(kv.k0);
                s1.add(kv.k1);
                sre.add(kv.k_plus.real());
                sim.add(kv.k_plus.imag());
                q0.add(kv.k0 * kv.k0);
                q1.add(kv.k1 * kv.k1);
            }
            const double m = static_cast<double>(samples);
            const double m0 = s0.value() / m, m1 = s1.value() / m;
            const double se0 = std::sqrt((q0.value() / m - m0 * m0) / m);
            const double se1 = std::sqrt((q1.value() / m - m1 * m1) / m);
            const bool ok = std::abs(m0 - chk.rho00) < 6 * se0 &&
                            std::abs(m1 - chk.rho11) < 6 * se1 &&
                            std::abs(sre.value() / m - chk.rho01.real()) < 6 * se0 &&
                            std::abs(sim.value() / m - chk.rho01.imag()) < 6 * se0;
            char buf[120];
            std::snprintf(buf, sizeof buf,
                          "kernel unbiased on %-10s eta=%.2f  (rho00 %+.4f vs %+.4f)",
                          chk.name, eta_val, m0, chk.rho00);
            report(ok, buf);
        }
    }

    // conjugate-pair convention on real twin-beam events
    {
        NopaParams params{{0.5, 0.0}, pi};
        const EventSampler sampler(params, Efficiency{0.85});
        RngStream rng(sub_seed(9100, 0));
        bool ok = true;
        try {
            for (int i = 0; i < 1000; ++i)
                (void)c_numerator_checked(sampler.sample(rng), Efficiency{0.85},
                                          pi / 8, pi / 8);
        } catch (const convention_violation&) {
            ok = false;
        }
        report(ok, "conjugate-pair combinations are real on twin-beam events");
    }

    // joint quadrature law: rotated coordinates must be exactly normal
    {
        NopaParams params{{0.5, 0.0}, 0.0};
        const Efficiency eta{0.85};
        RngStream rng(sub_seed(9200, 0));
        const auto p = pair_pdf_params(params.lambda, 0.3, 0.9, eta);
        std::vector<double> u, v;
        const long long n = std::max<long long>(samples, 20000);
        for (long long i = 0; i < n; ++i) {
            const auto [xi, xj] = sample_pair(p, rng);
            u.push_back((xi + xj) / std::sqrt(p.var_sum));
            v.push_back((xi - xj) / std::sqrt(p.var_diff));
        }
        const auto gof = gof_normal_pairs(u, v, 10);
        char buf[120];
        std::snprintf(buf, sizeof buf,
                      "pair sampler matches its density (chi2 %.1f/%d, p = %.3g)",
                      gof.chi2, gof.dof, gof.p_value);
        report(gof.p_value > 1e-4, buf);
    }

    // throughput advisory, not a failure
    {
        NopaParams params{{0.5, 0.0}, pi};
        const BellAngles angles{0.0, 3 * pi / 8, pi / 4, pi / 8};
        const int w = resolve_workers(workers);
        const long long n = std::max<long long>(samples, 50000);
        const auto t0 = std::chrono::steady_clock::now();
        (void)estimate_bell(params, angles, Efficiency{0.85}, n, 2, 42, w);
        const double dt =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const double rate = n / dt;
        char buf[120];
        std::snprintf(buf, sizeof buf, "throughput %.3g events/s on %d workers", rate, w);
        if (rate < 1e5 * w)
            std::cout << "[warn] " << buf << " (below 1e5 per worker)\n";
        else
            std::cout << "[ok]   " << buf << "\n";
    }

    if (failures > 0) {
        std::cout << failures << " selftest failure(s)\n";
        return 3;
    }
    std::cout << "selftest passed\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"tomographic Bell-statistic simulator for twin-beam homodyne data"};
    app.require_subcommand(1);
    // config keys live in a [subcommand] section and map onto that
    // subcommand's flags; values given on the command line win
    app.set_config("--config", "", "read options from a TOML/INI file ([subcommand] sections)");

    CommonOpts o;
    double from = 0.0, to = 0.0;
    int steps = 9, n_max = oracle::default_n_max;
    long long selftest_samples = 200000;

    auto* sim = app.add_subcommand("simulate", "run the estimator once");
    add_state_flags(sim, o);
    add_run_flags(sim, o);

    auto* sw_phi = app.add_subcommand("sweep-phi", "sweep the crystal phase, CSV output");
    add_state_flags(sw_phi, o);
    add_run_flags(sw_phi, o);
    sw_phi->add_option("--from", from, "first phase")->required();
    sw_phi->add_option("--to", to, "last phase")->required();
    sw_phi->add_option("--steps", steps, "number of points");

    auto* sw_eta = app.add_subcommand("sweep-eta", "sweep the efficiency, CSV output");
    add_state_flags(sw_eta, o);
    add_run_flags(sw_eta, o);
    sw_eta->add_option("--from", from, "first efficiency")->required();
    sw_eta->add_option("--to", to, "last efficiency")->required();
    sw_eta->add_option("--steps", steps, "number of points");

    auto* orc = app.add_subcommand("oracle", "print exact reference values, no sampling");
    add_state_flags(orc, o);
    orc->add_option("--n-max", n_max, "Fock-space truncation");
    orc->add_option("--out", o.out, "output file (default stdout)");

    auto* st = app.add_subcommand("selftest", "kernel, sampler and throughput checks");
    st->add_option("--samples", selftest_samples, "events per check");
    st->add_option("--workers", o.workers, "worker threads for the throughput check");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (sim->parsed()) return cmd_simulate(o);
        if (sw_phi->parsed()) return cmd_sweep(o, SweepSpec::Axis::phi, from, to, steps);
        if (sw_eta->parsed()) return cmd_sweep(o, SweepSpec::Axis::eta, from, to, steps);
        if (orc->parsed()) return cmd_oracle(o, n_max);
        if (st->parsed()) return cmd_selftest(selftest_samples, o.workers);
    } catch (const invalid_parameter& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const kernel_divergence& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const degenerate_denominator& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const convention_violation& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const io_failure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
