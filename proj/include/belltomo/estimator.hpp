#pragma once
// Monte-Carlo estimation of the photon-pair correlation and the Bell
// statistic from homodyne events.
//
// Every event contributes five pattern-function products: one common
// denominator (the one-photon-pair projector) and one numerator per angle
// pair. Each correlation is the ratio of numerator and denominator
// averages, so the error is estimated from per-block ratio values while
// the central value always uses the full sums. Events split into n_blocks
// equal blocks plus an optional remainder that enters only the full sums;
// each block has its own derived seed, so results are independent of the
// worker count and of how blocks are scheduled.

#include <array>
#include <cstdint>
#include <vector>

#include "belltomo/core.hpp"
#include "belltomo/kernel.hpp"
#include "belltomo/stats.hpp"

namespace belltomo {

// denominator: projector onto one photon per beam,
// (K₁¹K₀³ + K₀¹K₁³)(K₁²K₀⁴ + K₀²K₁⁴)
double p11_integrand(const std::array<KernelValues, 4>& kv);

// numerator of C(α, β): product of per-beam polarization-analyzer brackets;
// the off-diagonal parts reduce to 2 Re(K₊ K̄₊) between the beam's two modes
double c_numerator_integrand(const std::array<KernelValues, 4>& kv, double alpha,
                             double beta);

// same combination assembled from independent K₊ and K₋ patterns as a
// complex product; throws convention_violation if the imaginary residue
// exceeds 1e-9 relative. Test/selftest path, not the hot loop.
double c_numerator_checked(const QuadSample& sample, Efficiency eta, double alpha,
                           double beta);

// core of the checked path with the per-mode patterns supplied explicitly,
// so a deliberately inconsistent K₋ can be shown to trip the check
double c_numerator_checked(const std::array<std::complex<double>, 4>& k_plus,
                           const std::array<std::complex<double>, 4>& k_minus,
                           const std::array<KernelValues, 4>& kv, double alpha,
                           double beta);

// per-event contributions in fixed order:
// num(α,β), num(α,β'), num(α',β'), num(α',β), p11
std::array<double, 5> event_integrands(const std::array<KernelValues, 4>& kv,
                                       const BellAngles& angles);

struct EventAccumulator {
    long long n = 0;
    std::array<CompensatedSum, 5> sums;

    void add(const std::array<double, 5>& integrands) {
        for (int i = 0; i < 5; ++i) sums[i].add(integrands[i]);
        ++n;
    }
    void merge(const EventAccumulator& other) {
        for (int i = 0; i < 5; ++i) sums[i].add(other.sums[i].value());
        n += other.n;
    }
};

// n_blocks equal blocks (block b seeded with sub_seed(seed, b)) plus, when
// n_samples is not divisible, one remainder unit seeded with
// sub_seed(seed, n_blocks); slots are returned in block order
std::vector<EventAccumulator> accumulate_blocked(const NopaParams& params,
                                                 const BellAngles& angles, Efficiency eta,
                                                 long long n_samples, int n_blocks,
                                                 std::uint64_t seed, int workers = 0);

struct BellEstimate {
    BlockedEstimate bell;
    // C(α,β), C(α,β'), C(α',β'), C(α',β)
    std::array<BlockedEstimate, 4> correlations;
    BlockedEstimate prob_one_pair;
};

// central values from full sums (remainder included), errors from the
// spread of per-block ratios; throws degenerate_denominator if the full
// denominator average is <= 0
BellEstimate reduce_blocks(const std::vector<EventAccumulator>& slots, int n_blocks);

BellEstimate estimate_bell(const NopaParams& params, const BellAngles& angles,
                           Efficiency eta, long long n_samples, int n_blocks,
                           std::uint64_t seed, int workers = 0);

BlockedEstimate estimate_correlation(const NopaParams& params, double alpha, double beta,
                                     Efficiency eta, long long n_samples, int n_blocks,
                                     std::uint64_t seed, int workers = 0);

}  // namespace belltomo
