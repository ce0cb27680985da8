#pragma once
// Homodyne event generation. For a twin beam with amplitude λ_eff measured
// at local-oscillator phases (φ_i, φ_j), the joint quadrature density
// factorizes in the rotated coordinates s = x_i + x_j, t = x_i - x_j into
// two independent zero-mean Gaussians whose variances depend on
// z = e^{-i(φ_i+φ_j)} λ_eff. Detection efficiency η < 1 adds Gaussian
// smoothing of variance Δ² = (1-η)/(4η) per quadrature, which in (s,t)
// coordinates widens each variance by 4Δ²/2.

#include <complex>
#include <cstdint>
#include <random>
#include <utility>

#include "belltomo/core.hpp"

namespace belltomo {

// stateless seed derivation: index-salted splitmix64 finalizer, so derived
// streams never overlap for distinct (master, index)
std::uint64_t sub_seed(std::uint64_t master, std::uint64_t index);

class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : gen_(seed) {}

    // in (0, 1]: zero is excluded so log(u) below is always finite
    double u01() {
        return (static_cast<double>(gen_() >> 11) + 1.0) * 0x1.0p-53;
    }

    double uniform_phase() { return 2.0 * pi * (u01() - 0x1.0p-53); }

    // Box-Muller, cos/sin form: exactly two engine draws per call
    std::pair<double, double> normal_pair() {
        const double r = std::sqrt(-2.0 * std::log(u01()));
        const double theta = 2.0 * pi * u01();
        return {r * std::cos(theta), r * std::sin(theta)};
    }

private:
    std::mt19937_64 gen_;
};

// precomputed per-(λ_eff, phases, η) quantities for one beam pair
struct PairPdfParams {
    std::complex<double> z;  // e^{-i(φ_i+φ_j)} λ_eff
    double var_sum;          // Var(s) = (d²_{+z} + 4Δ²)/2
    double var_diff;         // Var(t) = (d²_{-z} + 4Δ²)/2
};

PairPdfParams pair_pdf_params(std::complex<double> lambda_eff, double phase_i,
                              double phase_j, Efficiency eta);

double joint_pdf(const PairPdfParams& p, double x_i, double x_j);

// exact draw: consumes one normal_pair (two engine draws)
std::pair<double, double> sample_pair(const PairPdfParams& p, RngStream& rng);

// four-mode event for the product of twin beams (1,2) and (3,4); every
// event consumes exactly eight engine draws in fixed order (four phases,
// then pair (1,2), then pair (3,4)), so streams can be split by event count
class EventSampler {
public:
    EventSampler(const NopaParams& params, Efficiency eta);

    QuadSample sample(RngStream& rng) const;

private:
    std::complex<double> lambda12_;
    std::complex<double> lambda34_;
    Efficiency eta_;
};

// single-mode reference distributions with uniformly random LO phase, used
// to exercise the reconstruction kernels against known density matrices
struct SingleModeSample {
    double x;
    double phase;
};

SingleModeSample sample_vacuum(Efficiency eta, RngStream& rng);
SingleModeSample sample_coherent(std::complex<double> amplitude, Efficiency eta,
                                 RngStream& rng);
SingleModeSample sample_one_photon(Efficiency eta, RngStream& rng);
SingleModeSample sample_thermal(double mean_photon, Efficiency eta, RngStream& rng);

}  // namespace belltomo
