#pragma once
// Pattern functions for reconstructing single-mode density-matrix elements
// from phase-averaged homodyne data: averaging K over samples (x, φ) drawn
// with uniformly random LO phase gives an unbiased estimate of the matrix
// element, for any state, as long as η > 1/2.
//
// Closed forms in the span {0,1} photons, with a = (2η-1)/(8η),
// v = x/(2√a) and F = dawson(v):
//   ⟨0|ρ|0⟩:  K₀ = (1 - 2vF) / (4a)
//   ⟨1|ρ|1⟩:  K₁ = K₀ + [(v²-1) + vF(3-2v²)] / (16a²)
//   ⟨0|ρ|1⟩:  K₊ = e^{-iφ} g,  g = [v + (1-2v²)F] / (8a^{3/2})
//   ⟨1|ρ|0⟩:  K₋ = conj(K₊)
// As η → 1/2⁺, a → 0 and all three blow up: the method has a hard
// efficiency floor at 1/2.

#include <array>
#include <complex>

#include "belltomo/core.hpp"

namespace belltomo {

struct KernelValues {
    double k0 = 0.0;                    // ⟨0|ρ|0⟩ estimator
    double k1 = 0.0;                    // ⟨1|ρ|1⟩ estimator
    std::complex<double> k_plus{0, 0};  // ⟨0|ρ|1⟩ estimator
    // g = |K₊| with the sign carried, so e^{-iφ}g recovers k_plus
    double g = 0.0;
};

// n ∈ {0, 1}
double kernel_diag(int n, double x, Efficiency eta);

std::complex<double> kernel_offdiag(double x, double phase, Efficiency eta);

// independently assembled ⟨1|ρ|0⟩ pattern (not conj(kernel_offdiag)); the
// estimator's checked path verifies conj-consistency against this
std::complex<double> kernel_offdiag_minus(double x, double phase, Efficiency eta);

KernelValues kernel_values(double x, double phase, Efficiency eta);

std::array<KernelValues, 4> kernel_event(const QuadSample& sample, Efficiency eta);

}  // namespace belltomo
