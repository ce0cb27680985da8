#include "belltomo/sampler.hpp"

#include <cmath>
#include <tuple>

namespace belltomo {

std::uint64_t sub_seed(std::uint64_t master, std::uint64_t index) {
    // splitmix64 finalizer applied to the index-salted master; the salt
    // (index+1)·golden-ratio keeps index 0 from passing master through
    std::uint64_t z = master + (index + 1) * 0x9E3779B97F4A7C15ULL;
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
}

PairPdfParams pair_pdf_params(std::complex<double> lambda_eff, double phase_i,
                              double phase_j, Efficiency eta) {
    eta.validate();
    if (std::abs(lambda_eff) >= 1.0)
        throw invalid_parameter("non-normalizable state: |lambda| must be < 1");
    PairPdfParams p;
    p.z = lambda_eff * std::polar(1.0, -(phase_i + phase_j));
    const double one_minus = 1.0 - std::norm(p.z);
    const double smear = 4.0 * eta.delta2();
    p.var_sum = (std::norm(1.0 + p.z) / one_minus + smear) / 2.0;
    p.var_diff = (std::norm(1.0 - p.z) / one_minus + smear) / 2.0;
    return p;
}

double joint_pdf(const PairPdfParams& p, double x_i, double x_j) {
    const double s = x_i + x_j;
    const double t = x_i - x_j;
    return std::exp(-s * s / (2.0 * p.var_sum) - t * t / (2.0 * p.var_diff)) /
           (pi * std::sqrt(p.var_sum * p.var_diff));
}

std::pair<double, double> sample_pair(const PairPdfParams& p, RngStream& rng) {
    const auto [g0, g1] = rng.normal_pair();
    const double s = g0 * std::sqrt(p.var_sum);
    const double t = g1 * std::sqrt(p.var_diff);
    return {(s + t) / 2.0, (s - t) / 2.0};
}

EventSampler::EventSampler(const NopaParams& params, Efficiency eta)
    : lambda12_(params.lambda),
      lambda34_(params.lambda * std::polar(1.0, params.phi)),
      eta_(eta) {
    params.validate();
    eta.validate();
}

QuadSample EventSampler::sample(RngStream& rng) const {
    QuadSample ev;
    for (auto& ph : ev.phase) ph = rng.uniform_phase();
    const auto p12 = pair_pdf_params(lambda12_, ev.phase[0], ev.phase[1], eta_);
    std::tie(ev.x[0], ev.x[1]) = sample_pair(p12, rng);
    const auto p34 = pair_pdf_params(lambda34_, ev.phase[2], ev.phase[3], eta_);
    std::tie(ev.x[2], ev.x[3]) = sample_pair(p34, rng);
    return ev;
}

SingleModeSample sample_vacuum(Efficiency eta, RngStream& rng) {
    const double phase = rng.uniform_phase();
    const double sigma = std::sqrt(0.25 + eta.delta2());
    return {sigma * rng.normal_pair().first, phase};
}

SingleModeSample sample_coherent(std::complex<double> amplitude, Efficiency eta,
                                 RngStream& rng) {
    const double phase = rng.uniform_phase();
    const double mean = std::real(amplitude * std::polar(1.0, -phase));
    const double sigma = std::sqrt(0.25 + eta.delta2());
    return {mean + sigma * rng.normal_pair().first, phase};
}

SingleModeSample sample_one_photon(Efficiency eta, RngStream& rng) {
    // phase-independent quadrature density 8x²e^{-2x²}·(2/π)^{1/2}: the
    // radial law of three iid N(0, 1/4) components with a random sign,
    // then detector smoothing
    const double phase = rng.uniform_phase();
    const auto [g0, g1] = rng.normal_pair();
    const auto [g2, g3] = rng.normal_pair();
    const double r = 0.5 * std::sqrt(g0 * g0 + g1 * g1 + g2 * g2);
    const double sign = rng.u01() <= 0.5 ? -1.0 : 1.0;
    return {sign * r + std::sqrt(eta.delta2()) * g3, phase};
}

SingleModeSample sample_thermal(double mean_photon, Efficiency eta, RngStream& rng) {
    if (mean_photon < 0.0) throw invalid_parameter("mean photon number must be >= 0");
    const double phase = rng.uniform_phase();
    const double sigma = std::sqrt((2.0 * mean_photon + 1.0) / 4.0 + eta.delta2());
    return {sigma * rng.normal_pair().first, phase};
}

}  // namespace belltomo
