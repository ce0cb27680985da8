// Acceptance gate: eight end-to-end criteria, each runnable on its own
// (`acceptance <n>`) or all together (`acceptance`). Every criterion
// prints one [PASS]/[FAIL] line with the measured numbers; the process
// exits nonzero if any requested criterion fails.
//
// All stochastic criteria run with master seed 1, fixed before any of
// them was first executed. Known outcomes on this seed are documented in
// the README; in particular criterion 4's second clause demands a
// resolution this event count cannot deliver (see the analysis there) and
// is expected to fail honestly rather than be tuned away.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <random>
#include <string>
#include <vector>

#include "belltomo/core.hpp"
#include "belltomo/estimator.hpp"
#include "belltomo/kernel.hpp"
#include "belltomo/oracle.hpp"
#include "belltomo/runner.hpp"
#include "belltomo/sampler.hpp"
#include "belltomo/stats.hpp"

using namespace belltomo;

namespace {

constexpr std::uint64_t kMasterSeed = 1;
constexpr double kRoot8 = 2.8284271247461903;  // 2 sqrt(2)
const BellAngles kStandard{0.0, 3 * pi / 8, pi / 4, pi / 8};

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    }
};

void emit(int crit, bool pass, const char* fmt, ...) {
    char buf[512];
    va_list args;
    va_start(args, fmt);
    std::vsnprintf(buf, sizeof buf, fmt, args);
    va_end(args);
    std::printf("[%s] criterion %d: %s\n", pass ? "PASS" : "FAIL", crit, buf);
    std::fflush(stdout);
}

// 1: exact correlation vs ideal closed form over random parameters
bool criterion1() {
    Timer timer;
    std::mt19937_64 gen(kMasterSeed);
    std::uniform_real_distribution<double> mag(0.2, 0.95);
    std::uniform_real_distribution<double> ang(0.0, 2 * pi);
    double worst_ratio = 0.0, worst_diff = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const NopaParams params{std::polar(mag(gen), ang(gen)), ang(gen)};
        const double alpha = ang(gen), beta = ang(gen);
        const double exact =
            oracle::correlation_exact(params, alpha, beta, oracle::default_n_max);
        const double formula = oracle::correlation_formula(params.phi, alpha, beta);
        const double allowed =
            10.0 * oracle::build_state(params, oracle::default_n_max).deficit();
        const double diff = std::abs(exact - formula);
        worst_diff = std::max(worst_diff, diff);
        worst_ratio = std::max(worst_ratio, diff / allowed);
        if (diff >= allowed) {
            emit(1, false, "|exact - closed form| = %.3g exceeds 10x deficit %.3g",
                 diff, allowed);
            return false;
        }
    }
    const double secs = timer.seconds();
    const bool in_time = secs < 10.0;
    emit(1, in_time,
         "100 random points, max |exact - formula| = %.2e (worst %.2e of budget), "
         "%.2f s",
         worst_diff, worst_ratio, secs);
    return in_time;
}

// 2: maximal violation value and the quantum bound
bool criterion2() {
    Timer timer;
    const double b_max =
        oracle::bell_exact(NopaParams{{0.5, 0.0}, pi}, kStandard, oracle::default_n_max);
    if (std::abs(b_max - kRoot8) > 1e-9) {
        emit(2, false, "B at the standard angles, phi = pi: %.12f vs %.12f", b_max,
             kRoot8);
        return false;
    }
    std::mt19937_64 gen(kMasterSeed + 1);
    std::uniform_real_distribution<double> ang(0.0, 2 * pi);
    std::uniform_real_distribution<double> mag(0.1, 0.9);
    double largest = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const NopaParams params{{mag(gen), 0.0}, ang(gen)};
        const BellAngles a{ang(gen), ang(gen), ang(gen), ang(gen)};
        const double b = oracle::bell_exact(params, a, 6);
        largest = std::max(largest, b);
        if (b > kRoot8 + 1e-12) {
            emit(2, false, "quantum bound violated: B = %.15f", b);
            return false;
        }
    }
    const double secs = timer.seconds();
    const bool in_time = secs < 30.0;
    emit(2, in_time,
         "B(standard, pi) = 2sqrt2 within 1e-9; 1000 random quadruples stay below "
         "the bound (max %.6f), %.2f s",
         largest, secs);
    return in_time;
}

// 3: kernel reconstruction of rho_{nm}, n,m <= 1, on three states x three
// efficiencies, each within 3 standard errors at 1e6 samples
bool criterion3() {
    Timer timer;
    const long long n = 1000000;
    const NopaParams twin{{0.5, 0.0}, pi};  // marginal: thermal, N = 1/3
    bool all_ok = true;
    double worst_pull = 0.0;
    std::uint64_t stream_idx = 0;
    for (double eta_val : {1.0, 0.85, 0.65}) {
        const Efficiency eta{eta_val};
        for (int state = 0; state < 3; ++state) {
            RngStream rng(sub_seed(kMasterSeed, 100 + stream_idx++));
            const EventSampler twin_sampler(twin, eta);
            // target matrix elements
            double r00, r11, r01re;
            const char* name;
            switch (state) {
                case 0:
                    name = "vacuum";
                    r00 = 1.0;
                    r11 = 0.0;
                    r01re = 0.0;
                    break;
                case 1:
                    name = "coherent(0.5)";
                    r00 = std::exp(-0.25);
                    r11 = 0.25 * std::exp(-0.25);
                    r01re = 0.5 * std::exp(-0.25);
                    break;
                default:
                    name = "twin-marginal";
                    r00 = 0.75;
                    r11 = 0.1875;
                    r01re = 0.0;
                    break;
            }
            CompensatedSum s00, s11, sre, sim, q00, q11, qre, qim;
            for (long long i = 0; i < n; ++i) {
                SingleModeSample sm;
                if (state == 0)
                    sm = sample_vacuum(eta, rng);
                else if (state == 1)
                    sm = sample_coherent({0.5, 0.0}, eta, rng);
                else {
                    const QuadSample ev = twin_sampler.sample(rng);
                    sm = {ev.x[0], ev.phase[0]};
                }
                const KernelValues kv = kernel_values(sm.x, sm.phase, eta);
                s00.add(kv.k0);
                s11.add(kv.k1);
                sre.add(kv.k_plus.real());
                sim.add(kv.k_plus.imag());
                q00.add(kv.k0 * kv.k0);
                q11.add(kv.k1 * kv.k1);
                qre.add(kv.k_plus.real() * kv.k_plus.real());
                qim.add(kv.k_plus.imag() * kv.k_plus.imag());
            }
            const double fn = static_cast<double>(n);
            auto pull = [&](const CompensatedSum& s, const CompensatedSum& q,
                            double target) {
                const double m = s.value() / fn;
                const double se = std::sqrt((q.value() / fn - m * m) / fn);
                return std::abs(m - target) / se;
            };
            const double pulls[4] = {pull(s00, q00, r00), pull(s11, q11, r11),
                                     pull(sre, qre, r01re), pull(sim, qim, 0.0)};
            for (double p : pulls) worst_pull = std::max(worst_pull, p);
            const bool ok = pulls[0] < 3 && pulls[1] < 3 && pulls[2] < 3 && pulls[3] < 3;
            if (!ok) {
                emit(3, false,
                     "%s at eta=%.2f: pulls %.2f %.2f %.2f %.2f exceed 3 se", name,
                     eta_val, pulls[0], pulls[1], pulls[2], pulls[3]);
                all_ok = false;
            }
        }
    }
    const double secs = timer.seconds();
    if (all_ok && secs >= 120.0) {
        emit(3, false, "correct but too slow: %.1f s (budget 120)", secs);
        return false;
    }
    if (all_ok)
        emit(3, true,
             "9 state/efficiency cells, all 36 matrix-element pulls < 3 se "
             "(worst %.2f), %.1f s",
             worst_pull, secs);
    return all_ok;
}

// 4: the published operating point at 1e6 events: B consistent with
// 2sqrt2 within 3 estimated errors AND more than 10 estimated errors
// above the classical bound 2
bool criterion4() {
    Timer timer;
    const NopaParams params{lambda_from_mean_photon(0.5), pi};
    const auto est =
        estimate_bell(params, kStandard, Efficiency{0.85}, 1000000, 20, kMasterSeed, 0);
    const double b = est.bell.value, se = est.bell.std_error;
    const double secs = timer.seconds();
    const bool close = std::abs(b - kRoot8) < 3 * se;
    const bool resolved = (b - 2.0) > 10 * se;
    const bool in_time = secs < 300.0;
    emit(4, close && resolved && in_time,
         "B = %.4f +- %.4f; |B - 2sqrt2| = %.2f se (need < 3): %s; "
         "(B-2)/se = %.2f (need > 10): %s; %.1f s",
         b, se, std::abs(b - kRoot8) / se, close ? "yes" : "NO",
         (b - 2.0) / se, resolved ? "yes" : "NO", secs);
    return close && resolved && in_time;
}

// 5: low-efficiency run at 1e7 events: consistency with 2sqrt2 and an
// error estimate within 2x of the published-scale reference 0.268*sqrt(80)
bool criterion5() {
    Timer timer;
    const NopaParams params{{0.5, 0.0}, pi};
    const auto est =
        estimate_bell(params, kStandard, Efficiency{0.65}, 10000000, 20, kMasterSeed, 0);
    const double b = est.bell.value, se = est.bell.std_error;
    const double ref = 0.268 * std::sqrt(80.0);  // rescaled from 8e8 events
    const double lo = ref / 2.0, hi = ref * 2.0;
    const double secs = timer.seconds();
    const bool close = std::abs(b - kRoot8) < 3 * se;
    const bool calibrated = se > lo && se < hi;
    const bool in_time = secs < 900.0;
    emit(5, close && calibrated && in_time,
         "B = %.3f +- %.3f; |B - 2sqrt2| = %.2f se (need < 3): %s; "
         "se in [%.3f, %.3f]: %s; %.0f s",
         b, se, std::abs(b - kRoot8) / se, close ? "yes" : "NO", lo, hi,
         calibrated ? "yes" : "NO", secs);
    return close && calibrated && in_time;
}

// 6: crystal-phase sweep tracks the analytic curve at every point
bool criterion6() {
    Timer timer;
    RunConfig cfg;
    cfg.run.params = {lambda_from_mean_photon(0.5), 0.0};
    cfg.run.angles = kStandard;
    cfg.run.eta = {0.85};
    cfg.run.n_samples = 1000000;
    cfg.run.n_blocks = 20;
    cfg.run.seed = kMasterSeed;
    SweepSpec spec;
    spec.axis = SweepSpec::Axis::phi;
    spec.start = 0.0;
    spec.stop = 2 * pi;
    spec.steps = 9;
    const auto points = run_sweep(cfg, spec);
    bool all_ok = true;
    double worst = 0.0;
    for (const auto& p : points) {
        if (p.status != "ok") {
            emit(6, false, "point phi = %.3f failed: %s", p.sweep_value,
                 p.status.c_str());
            all_ok = false;
            continue;
        }
        const double pull =
            std::abs(p.estimate.bell.value - p.bell_analytic) / p.estimate.bell.std_error;
        worst = std::max(worst, pull);
        if (pull >= 3.0) {
            emit(6, false, "phi = %.3f: B = %.4f +- %.4f vs analytic %.4f (%.2f se)",
                 p.sweep_value, p.estimate.bell.value, p.estimate.bell.std_error,
                 p.bell_analytic, pull);
            all_ok = false;
        }
    }
    const double secs = timer.seconds();
    if (all_ok && secs >= 2700.0) {
        emit(6, false, "correct but too slow: %.0f s (budget 2700)", secs);
        return false;
    }
    if (all_ok)
        emit(6, true, "9 phase points within 3 se of the analytic curve (worst %.2f se), %.0f s",
             worst, secs);
    return all_ok;
}

// 7: the sampler's own distribution: goodness of fit over random
// parameters, plus the exact vacuum marginal variance
bool criterion7() {
    Timer timer;
    std::mt19937_64 gen(kMasterSeed + 7);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    bool all_ok = true;
    double min_p = 1.0;
    for (int trial = 0; trial < 20; ++trial) {
        const double magv = 0.8 * u01(gen);
        const double eta_val = 0.55 + 0.45 * u01(gen);
        const auto p = pair_pdf_params(std::polar(magv, 2 * pi * u01(gen)),
                                       2 * pi * u01(gen), 2 * pi * u01(gen),
                                       Efficiency{eta_val});
        RngStream rng(sub_seed(kMasterSeed, 700 + trial));
        const int n = 100000;
        std::vector<double> u(n), v(n);
        for (int i = 0; i < n; ++i) {
            const auto [xi, xj] = sample_pair(p, rng);
            u[i] = (xi + xj) / std::sqrt(p.var_sum);
            v[i] = (xi - xj) / std::sqrt(p.var_diff);
        }
        const auto res = gof_normal_pairs(u, v, 20);
        min_p = std::min(min_p, res.p_value);
        if (res.p_value <= 0.001) {
            emit(7, false, "draw %d (|l|=%.2f eta=%.2f): gof p = %.5f <= 0.001", trial,
                 magv, eta_val, res.p_value);
            all_ok = false;
        }
    }
    // vacuum marginals: Var(x) = 1/4 + delta2 exactly
    for (double eta_val : {1.0, 0.85, 0.65}) {
        const Efficiency eta{eta_val};
        RngStream rng(sub_seed(kMasterSeed, 790 + static_cast<int>(eta_val * 100)));
        const int n = 1000000;
        CompensatedSum sum, sq;
        for (int i = 0; i < n; ++i) {
            const double x = sample_vacuum(eta, rng).x;
            sum.add(x);
            sq.add(x * x);
        }
        const double m = sum.value() / n;
        const double var = sq.value() / n - m * m;
        const double want = 0.25 + eta.delta2();
        if (std::abs(var - want) > 0.01 * want) {
            emit(7, false, "vacuum variance at eta=%.2f: %.5f vs %.5f (off by %.2f%%)",
                 eta_val, var, want, 100 * std::abs(var - want) / want);
            all_ok = false;
        }
    }
    const double secs = timer.seconds();
    if (all_ok && secs >= 120.0) {
        emit(7, false, "correct but too slow: %.1f s (budget 120)", secs);
        return false;
    }
    if (all_ok)
        emit(7, true,
             "20 random-parameter gof draws all p > 0.001 (min %.4f); vacuum "
             "variances within 1%% at three efficiencies; %.1f s",
             min_p, secs);
    return all_ok;
}

// 8: bitwise determinism of outputs and worker-count invariance
bool criterion8() {
    Timer timer;
    RunConfig cfg;
    cfg.run.params = {{0.5, 0.0}, pi};
    cfg.run.angles = kStandard;
    cfg.run.eta = {0.85};
    cfg.run.n_samples = 50000;
    cfg.run.n_blocks = 5;
    cfg.run.seed = kMasterSeed;
    cfg.workers = 1;

    SweepSpec spec;
    spec.axis = SweepSpec::Axis::phi;
    spec.start = 0.0;
    spec.stop = pi;
    spec.steps = 3;

    const std::string csv_a = sweep_to_csv(run_sweep(cfg, spec));
    const std::string csv_b = sweep_to_csv(run_sweep(cfg, spec));
    cfg.workers = 8;
    const std::string csv_c = sweep_to_csv(run_sweep(cfg, spec));

    const auto est1 = estimate_bell(cfg.run.params, cfg.run.angles, cfg.run.eta,
                                    cfg.run.n_samples, cfg.run.n_blocks, cfg.run.seed, 1);
    const auto est8 = estimate_bell(cfg.run.params, cfg.run.angles, cfg.run.eta,
                                    cfg.run.n_samples, cfg.run.n_blocks, cfg.run.seed, 8);
    bool ok = csv_a == csv_b && csv_a == csv_c;
    ok = ok && est1.bell.value == est8.bell.value &&
         est1.bell.std_error == est8.bell.std_error &&
         est1.prob_one_pair.value == est8.prob_one_pair.value;
    for (int j = 0; j < 4; ++j)
        ok = ok && est1.correlations[j].value == est8.correlations[j].value &&
             est1.correlations[j].std_error == est8.correlations[j].std_error;
    emit(8, ok,
         "rerun CSV identical: %s; workers 1 vs 8 CSV identical: %s; central values "
         "and errors bitwise equal across worker counts: %s; %.1f s",
         csv_a == csv_b ? "yes" : "NO", csv_a == csv_c ? "yes" : "NO",
         ok ? "yes" : "NO", timer.seconds());
    return ok;
}

}  // namespace

int main(int argc, char** argv) {
    bool (*criteria[8])() = {criterion1, criterion2, criterion3, criterion4,
                             criterion5, criterion6, criterion7, criterion8};
    int failures = 0;
    if (argc > 1) {
        const int crit = std::atoi(argv[1]);
        if (crit < 1 || crit > 8) {
            std::fprintf(stderr, "usage: acceptance [1-8]\n");
            return 2;
        }
        if (!criteria[crit - 1]()) ++failures;
    } else {
        for (int c = 0; c < 8; ++c)
            if (!criteria[c]()) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
