#pragma once
// Shared domain types and parameter conversions.
//
// Conventions fixed here and used by every module:
//   quadrature  x̂_φ = (a e^{-iφ} + a† e^{iφ})/2,  vacuum variance 1/4
//   mode order  1..4 = (a_v, b_h, a_h, b_v): beams a,b each carry two
//               polarization modes; twin pairs are (1,2) and (3,4)
//   efficiency  η ∈ (1/2, 1]; below 1/2 the pattern-function method
//               has divergent kernels and no estimator exists

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace belltomo {

struct invalid_parameter : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct kernel_divergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};
// full-data one-pair probability estimate came out <= 0 (Λ=0 or far too little data)
struct degenerate_denominator : std::runtime_error {
    using std::runtime_error::runtime_error;
};
// imaginary residue in a conjugate-pair kernel combination: phase convention bug
struct convention_violation : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct io_failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr double pi = 3.14159265358979323846;

// squeezing amplitude Λ (complex, |Λ| < 1) and tunable crystal phase φ;
// pair (1,2) squeezes with Λ, pair (3,4) with Λe^{iφ}
struct NopaParams {
    std::complex<double> lambda{0.0, 0.0};
    double phi = 0.0;

    void validate() const {
        if (!(std::abs(lambda) < 1.0) || !std::isfinite(std::abs(lambda)))
            throw invalid_parameter("non-normalizable state: |lambda| must be < 1");
        if (!std::isfinite(phi))
            throw invalid_parameter("crystal phase must be finite");
    }
    // mean photon number per mode N = |Λ|²/(1-|Λ|²)
    double mean_photon() const {
        const double r = std::norm(lambda);
        return r / (1.0 - r);
    }
};

// polarizer rotation parameters; all derived quantities depend on them
// only through cos2θ, sin2θ, so θ and θ+π are equivalent
struct BellAngles {
    double alpha = 0.0;
    double beta = 0.0;
    double alpha_prime = 0.0;
    double beta_prime = 0.0;

    void validate() const {
        for (double a : {alpha, beta, alpha_prime, beta_prime})
            if (!std::isfinite(a)) throw invalid_parameter("angles must be finite");
    }
};

struct Efficiency {
    double eta = 1.0;

    void validate() const {
        if (!(eta > 0.5) || !(eta <= 1.0))
            throw kernel_divergence("kernel divergence: eta must be in (0.5, 1]");
    }
    // Gaussian smoothing variance added to every quadrature by inefficiency
    double delta2() const { return (1.0 - eta) / (4.0 * eta); }
};

// one detection event: four quadrature outcomes with their LO phases
struct QuadSample {
    std::array<double, 4> x{};
    std::array<double, 4> phase{};
};

// nonlinear (ratio) statistic with block-based error:
// value always comes from the full data set, std_error from the spread
// of per-block values over n_blocks equal blocks
struct BlockedEstimate {
    double value = 0.0;
    double std_error = 0.0;
    int n_blocks = 0;
    long long n_samples = 0;
};

// |Λ| = sqrt(N/(1+N)); inverse of NopaParams::mean_photon on [0,1)
inline double lambda_from_mean_photon(double n_mean) {
    if (!(n_mean >= 0.0) || !std::isfinite(n_mean))
        throw invalid_parameter("mean photon number must be finite and >= 0");
    return std::sqrt(n_mean / (1.0 + n_mean));
}

inline double reduce_phase_2pi(double phi) {
    double p = std::fmod(phi, 2.0 * pi);
    if (p < 0.0) p += 2.0 * pi;
    return p;
}

struct RunParams {
    NopaParams params;
    BellAngles angles;
    Efficiency eta;
    long long n_samples = 0;
    int n_blocks = 0;
    std::uint64_t seed = 0;
};

struct ValidationResult {
    bool ok = false;
    std::vector<std::string> violations;  // complete list, not first-failure
    RunParams normalized;                 // phases reduced to [0, 2π); valid only if ok
};

// collects every violation instead of throwing on the first, so a CLI or
// config loader can report them all at once
inline ValidationResult validate_run_config(const NopaParams& params, const BellAngles& angles,
                                            const Efficiency& eta, long long n_samples,
                                            int n_blocks, std::uint64_t seed) {
    ValidationResult r;
    if (!(std::abs(params.lambda) < 1.0) || !std::isfinite(std::abs(params.lambda)))
        r.violations.push_back("non-normalizable state: |lambda| must be < 1");
    if (!std::isfinite(params.phi))
        r.violations.push_back("crystal phase must be finite");
    for (double a : {angles.alpha, angles.beta, angles.alpha_prime, angles.beta_prime})
        if (!std::isfinite(a)) {
            r.violations.push_back("angles must be finite");
            break;
        }
    if (!(eta.eta > 0.5) || !(eta.eta <= 1.0))
        r.violations.push_back("kernel divergence: eta must be in (0.5, 1]");
    if (n_blocks < 2) r.violations.push_back("n_blocks must be >= 2");
    if (n_samples < n_blocks)
        r.violations.push_back("n_samples must be >= n_blocks");
    r.ok = r.violations.empty();
    if (r.ok) {
        r.normalized.params = params;
        r.normalized.params.phi = reduce_phase_2pi(params.phi);
        r.normalized.angles = angles;
        r.normalized.eta = eta;
        r.normalized.n_samples = n_samples;
        r.normalized.n_blocks = n_blocks;
        r.normalized.seed = seed;
    }
    return r;
}

}  // namespace belltomo
