#pragma once
// Exact truncated-Fock-space ground truth for the Monte-Carlo estimator.
//
// The source state is a product of two twin beams: pair (1,2) with
// amplitude c_n = sqrt(1-|Λ|²) Λ^n on |n,n⟩, pair (3,4) the same with
// Λe^{iφ}. Polarizer rotations mix modes (1,3) by angle α and (2,4) by β.
// Both rotations conserve the photon number of their mode pair, so the
// joint amplitudes decompose into independent total-photon sectors k and
// every probability in the one-pair sector (k = 1 on both pairs) is exact
// for any truncation n_max >= 1.

#include <complex>
#include <map>
#include <tuple>
#include <vector>

#include "belltomo/core.hpp"

namespace belltomo {
namespace oracle {

using cplx = std::complex<double>;

// one twin-beam factor: amplitudes c_n for |n,n⟩, n = 0..n_max
struct TwinBeamAmplitudes {
    cplx lambda_eff;
    std::vector<cplx> coeffs;

    // probability mass lost to truncation: 1 - Σ|c_n|² = |λ|^{2(n_max+1)}
    double deficit() const;
};

struct TwinBeamPair {
    TwinBeamAmplitudes pair12;  // λ_eff = Λ
    TwinBeamAmplitudes pair34;  // λ_eff = Λ e^{iφ}
    // deficit of the four-mode product state
    double deficit() const { return 1.0 - (1.0 - pair12.deficit()) * (1.0 - pair34.deficit()); }
};

TwinBeamPair build_state(const NopaParams& params, int n_max);

using Occupation = std::tuple<int, int, int, int>;  // modes (1,2,3,4) = (a_v,b_h,a_h,b_v)

// q(i,l,m,n) = |⟨i,l,m,n| U₁₃(α) U₂₄(β) |ψ⟩|² on the truncated space
struct RotatedJointProbabilities {
    std::map<Occupation, double> q;
    double alpha = 0.0;
    double beta = 0.0;

    double at(int i, int l, int m, int n) const {
        auto it = q.find({i, l, m, n});
        return it == q.end() ? 0.0 : it->second;
    }
    double total() const;
};

// rotation matrix of U₁₃(α) = exp[α(a₁†a₃ - a₁a₃†)] restricted to the
// total-photon-k sector, basis index = mode-1 occupation; built by
// numerically exponentiating the antisymmetric generator
std::vector<std::vector<double>> rotation_13(int k, double alpha);
// same for U₂₄(β) = exp[β(a₄†a₂ - a₂†a₄)], basis index = mode-2 occupation
std::vector<std::vector<double>> rotation_24(int k, double beta);

// independent closed-form path (beam-splitter combinatorics) used to
// cross-check the exponentials
std::vector<std::vector<double>> rotation_13_reference(int k, double alpha);
std::vector<std::vector<double>> rotation_24_reference(int k, double beta);

RotatedJointProbabilities rotate_and_project(const TwinBeamPair& state, double alpha,
                                             double beta, int n_max);

// conditional photon-pair probabilities given exactly one photon per beam,
// and their correlation C = p(1,1)+p(0,0)-p(0,1)-p(1,0)
struct PairCorrelation {
    double p11 = 0.0, p10 = 0.0, p01 = 0.0, p00 = 0.0;  // conditional, sum to 1
    double prob_one_pair = 0.0;                          // absolute P(1,1)
    double correlation = 0.0;
};

PairCorrelation correlation_detail(const NopaParams& params, double alpha, double beta,
                                   int n_max);
double correlation_exact(const NopaParams& params, double alpha, double beta, int n_max);

double bell_exact(const NopaParams& params, const BellAngles& angles, int n_max);

// ideal-state closed forms the exact computation must reproduce
inline double correlation_formula(double phi, double alpha, double beta) {
    return std::cos(phi) * std::sin(2 * alpha) * std::sin(2 * beta) -
           std::cos(2 * alpha) * std::cos(2 * beta);
}
inline double bell_formula(double phi, const BellAngles& a) {
    const double c1 = correlation_formula(phi, a.alpha, a.beta);
    const double c2 = correlation_formula(phi, a.alpha, a.beta_prime);
    const double c3 = correlation_formula(phi, a.alpha_prime, a.beta_prime);
    const double c4 = correlation_formula(phi, a.alpha_prime, a.beta);
    return std::abs(c1 - c2) + std::abs(c3 + c4);
}
// absolute one-pair probability of the ideal state, angle independent
inline double prob_one_pair_formula(const NopaParams& params) {
    const double r = std::norm(params.lambda);
    return 2.0 * r * (1.0 - r) * (1.0 - r);
}

inline constexpr int default_n_max = 8;

}  // namespace oracle
}  // namespace belltomo
