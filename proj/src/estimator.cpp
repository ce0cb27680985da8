#include "belltomo/estimator.hpp"

#include <atomic>
#include <cmath>
#include <thread>

#include "belltomo/sampler.hpp"

namespace belltomo {

namespace {

// 2 g_i g_j cos(φ_i - φ_j) without touching the phases again
double offdiag_pair(const KernelValues& a, const KernelValues& b) {
    return 2.0 * std::real(a.k_plus * std::conj(b.k_plus));
}

// beam a spans modes (1,3) = kv[0], kv[2]; rotation sense gives K₁K₀ - K₀K₁
double bracket_beam_a(const std::array<KernelValues, 4>& kv, double cos2a, double sin2a) {
    return cos2a * (kv[0].k1 * kv[2].k0 - kv[0].k0 * kv[2].k1) +
           sin2a * offdiag_pair(kv[0], kv[2]);
}

// beam b spans modes (2,4) = kv[1], kv[3]; opposite rotation sense flips
// the diagonal difference
double bracket_beam_b(const std::array<KernelValues, 4>& kv, double cos2b, double sin2b) {
    return cos2b * (kv[1].k0 * kv[3].k1 - kv[1].k1 * kv[3].k0) +
           sin2b * offdiag_pair(kv[1], kv[3]);
}

struct AnglePrecomp {
    double cos2a, sin2a, cos2ap, sin2ap;
    double cos2b, sin2b, cos2bp, sin2bp;

    explicit AnglePrecomp(const BellAngles& ang)
        : cos2a(std::cos(2 * ang.alpha)),
          sin2a(std::sin(2 * ang.alpha)),
          cos2ap(std::cos(2 * ang.alpha_prime)),
          sin2ap(std::sin(2 * ang.alpha_prime)),
          cos2b(std::cos(2 * ang.beta)),
          sin2b(std::sin(2 * ang.beta)),
          cos2bp(std::cos(2 * ang.beta_prime)),
          sin2bp(std::sin(2 * ang.beta_prime)) {}
};

std::array<double, 5> integrands_precomp(const std::array<KernelValues, 4>& kv,
                                         const AnglePrecomp& pc) {
    const double ba = bracket_beam_a(kv, pc.cos2a, pc.sin2a);
    const double bap = bracket_beam_a(kv, pc.cos2ap, pc.sin2ap);
    const double bb = bracket_beam_b(kv, pc.cos2b, pc.sin2b);
    const double bbp = bracket_beam_b(kv, pc.cos2bp, pc.sin2bp);
    const double p11 = (kv[0].k1 * kv[2].k0 + kv[0].k0 * kv[2].k1) *
                       (kv[1].k1 * kv[3].k0 + kv[1].k0 * kv[3].k1);
    return {ba * bb, ba * bbp, bap * bbp, bap * bb, p11};
}

double safe_ratio(double num, double den) { return num / den; }

BlockedEstimate make_estimate(double value, const std::vector<double>& block_values,
                              long long n_samples) {
    BlockedEstimate e;
    e.value = value;
    e.n_blocks = static_cast<int>(block_values.size());
    e.n_samples = n_samples;
    e.std_error = std::sqrt(variance(block_values) / e.n_blocks);
    return e;
}

}  // namespace

double p11_integrand(const std::array<KernelValues, 4>& kv) {
    return (kv[0].k1 * kv[2].k0 + kv[0].k0 * kv[2].k1) *
           (kv[1].k1 * kv[3].k0 + kv[1].k0 * kv[3].k1);
}

double c_numerator_integrand(const std::array<KernelValues, 4>& kv, double alpha,
                             double beta) {
    return bracket_beam_a(kv, std::cos(2 * alpha), std::sin(2 * alpha)) *
           bracket_beam_b(kv, std::cos(2 * beta), std::sin(2 * beta));
}

double c_numerator_checked(const QuadSample& sample, Efficiency eta, double alpha,
                           double beta) {
    const auto kv = kernel_event(sample, eta);
    std::array<std::complex<double>, 4> kp, km;
    for (int m = 0; m < 4; ++m) {
        kp[m] = kernel_offdiag(sample.x[m], sample.phase[m], eta);
        km[m] = kernel_offdiag_minus(sample.x[m], sample.phase[m], eta);
    }
    return c_numerator_checked(kp, km, kv, alpha, beta);
}

double c_numerator_checked(const std::array<std::complex<double>, 4>& kp,
                           const std::array<std::complex<double>, 4>& km,
                           const std::array<KernelValues, 4>& kv, double alpha,
                           double beta) {
    const std::complex<double> off_a = kp[0] * km[2] + km[0] * kp[2];
    const std::complex<double> off_b = kp[1] * km[3] + km[1] * kp[3];
    const std::complex<double> ba =
        std::cos(2 * alpha) * (kv[0].k1 * kv[2].k0 - kv[0].k0 * kv[2].k1) +
        std::sin(2 * alpha) * off_a;
    const std::complex<double> bb =
        std::cos(2 * beta) * (kv[1].k0 * kv[3].k1 - kv[1].k1 * kv[3].k0) +
        std::sin(2 * beta) * off_b;
    const std::complex<double> num = ba * bb;
    const double scale = std::max(1.0, std::abs(num.real()));
    if (std::abs(num.imag()) > 1e-9 * scale)
        throw convention_violation(
            "imaginary residue in conjugate-pair kernel combination");
    return num.real();
}

std::array<double, 5> event_integrands(const std::array<KernelValues, 4>& kv,
                                       const BellAngles& angles) {
    return integrands_precomp(kv, AnglePrecomp(angles));
}

std::vector<EventAccumulator> accumulate_blocked(const NopaParams& params,
                                                 const BellAngles& angles, Efficiency eta,
                                                 long long n_samples, int n_blocks,
                                                 std::uint64_t seed, int workers) {
    params.validate();
    angles.validate();
    eta.validate();
    if (n_blocks < 2) throw invalid_parameter("n_blocks must be >= 2");
    if (n_samples < n_blocks) throw invalid_parameter("n_samples must be >= n_blocks");

    const long long block_size = n_samples / n_blocks;
    const long long remainder = n_samples % n_blocks;
    const int n_units = n_blocks + (remainder > 0 ? 1 : 0);

    std::vector<EventAccumulator> slots(n_units);
    const AnglePrecomp pc(angles);

    int n_workers = workers > 0 ? workers
                                : static_cast<int>(std::thread::hardware_concurrency());
    if (n_workers < 1) n_workers = 1;
    if (n_workers > n_units) n_workers = n_units;

    std::atomic<int> next_unit{0};
    auto run_units = [&]() {
        const EventSampler sampler(params, eta);
        for (;;) {
            const int unit = next_unit.fetch_add(1);
            if (unit >= n_units) return;
            const long long count = unit < n_blocks ? block_size : remainder;
            RngStream rng(sub_seed(seed, static_cast<std::uint64_t>(unit)));
            EventAccumulator acc;
            for (long long i = 0; i < count; ++i) {
                const auto ev = sampler.sample(rng);
                const auto kv = kernel_event(ev, eta);
                acc.add(integrands_precomp(kv, pc));
            }
            slots[unit] = acc;
        }
    };

    if (n_workers == 1) {
        run_units();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_workers);
        for (int w = 0; w < n_workers; ++w) pool.emplace_back(run_units);
        for (auto& t : pool) t.join();
    }
    return slots;
}

BellEstimate reduce_blocks(const std::vector<EventAccumulator>& slots, int n_blocks) {
    if (static_cast<int>(slots.size()) < n_blocks || n_blocks < 2)
        throw invalid_parameter("reduce_blocks needs at least n_blocks >= 2 slots");

    // full sums in slot order: identical for any worker count
    EventAccumulator total;
    for (const auto& s : slots) total.merge(s);

    const double den_total = total.sums[4].value();
    if (!(den_total > 0.0))
        throw degenerate_denominator(
            "one-photon-pair denominator is not positive on the full data set");

    std::array<double, 4> c_full;
    for (int j = 0; j < 4; ++j) c_full[j] = total.sums[j].value() / den_total;
    const double b_full =
        std::abs(c_full[0] - c_full[1]) + std::abs(c_full[2] + c_full[3]);

    // per-block ratio statistics over the equal-size blocks only
    std::array<std::vector<double>, 4> c_blocks;
    std::vector<double> b_blocks, p11_blocks;
    for (int b = 0; b < n_blocks; ++b) {
        const auto& s = slots[b];
        const double den = s.sums[4].value();
        std::array<double, 4> c{};
        for (int j = 0; j < 4; ++j) {
            c[j] = safe_ratio(s.sums[j].value(), den);
            c_blocks[j].push_back(c[j]);
        }
        b_blocks.push_back(std::abs(c[0] - c[1]) + std::abs(c[2] + c[3]));
        p11_blocks.push_back(den / static_cast<double>(s.n));
    }

    BellEstimate est;
    est.bell = make_estimate(b_full, b_blocks, total.n);
    for (int j = 0; j < 4; ++j)
        est.correlations[j] = make_estimate(c_full[j], c_blocks[j], total.n);
    est.prob_one_pair =
        make_estimate(den_total / static_cast<double>(total.n), p11_blocks, total.n);
    return est;
}

BellEstimate estimate_bell(const NopaParams& params, const BellAngles& angles,
                           Efficiency eta, long long n_samples, int n_blocks,
                           std::uint64_t seed, int workers) {
    const auto slots =
        accumulate_blocked(params, angles, eta, n_samples, n_blocks, seed, workers);
    return reduce_blocks(slots, n_blocks);
}

BlockedEstimate estimate_correlation(const NopaParams& params, double alpha, double beta,
                                     Efficiency eta, long long n_samples, int n_blocks,
                                     std::uint64_t seed, int workers) {
    const BellAngles angles{alpha, beta, alpha, beta};
    return estimate_bell(params, angles, eta, n_samples, n_blocks, seed, workers)
        .correlations[0];
}

}  // namespace belltomo
