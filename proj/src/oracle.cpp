#include "belltomo/oracle.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <cstdlib>

namespace belltomo {
namespace oracle {

namespace {

// exact in double up to the sector sizes used here (k <= 22)
double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

double binomial(int n, int r) {
    if (r < 0 || r > n) return 0.0;
    double b = 1.0;
    for (int i = 0; i < r; ++i) b = b * (n - i) / (i + 1);
    return b;
}

std::vector<std::vector<double>> to_rows(const Eigen::MatrixXd& m) {
    std::vector<std::vector<double>> rows(m.rows(), std::vector<double>(m.cols()));
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) rows[i][j] = m(i, j);
    return rows;
}

}  // namespace

double TwinBeamAmplitudes::deficit() const {
    const int n_max = static_cast<int>(coeffs.size()) - 1;
    return std::pow(std::norm(lambda_eff), n_max + 1);
}

TwinBeamPair build_state(const NopaParams& params, int n_max) {
    params.validate();
    if (n_max < 1) throw invalid_parameter("truncation n_max must be >= 1");
    const double mag = std::abs(params.lambda);
    const double norm_factor = std::sqrt(1.0 - mag * mag);

    TwinBeamPair state;
    state.pair12.lambda_eff = params.lambda;
    state.pair34.lambda_eff = params.lambda * std::polar(1.0, params.phi);
    for (auto* factor : {&state.pair12, &state.pair34}) {
        factor->coeffs.resize(n_max + 1);
        cplx power = 1.0;
        for (int n = 0; n <= n_max; ++n) {
            factor->coeffs[n] = norm_factor * power;
            power *= factor->lambda_eff;
        }
    }
    return state;
}

// generator of exp[α(a₁†a₃ - a₁a₃†)] in the k-photon sector, basis index =
// mode-1 occupation j (mode 3 holds k-j)
std::vector<std::vector<double>> rotation_13(int k, double alpha) {
    Eigen::MatrixXd gen = Eigen::MatrixXd::Zero(k + 1, k + 1);
    for (int j = 0; j + 1 <= k; ++j) {
        const double amp = alpha * std::sqrt(double(j + 1) * double(k - j));
        gen(j + 1, j) = amp;   // a₁†a₃ raises mode-1 occupation
        gen(j, j + 1) = -amp;  // a₁a₃† lowers it
    }
    return to_rows(gen.exp());
}

// exp[β(a₄†a₂ - a₂†a₄)] in the k-photon sector, basis index = mode-2
// occupation j (mode 4 holds k-j); a₄†a₂ lowers mode-2 occupation
std::vector<std::vector<double>> rotation_24(int k, double beta) {
    Eigen::MatrixXd gen = Eigen::MatrixXd::Zero(k + 1, k + 1);
    for (int j = 0; j <= k; ++j) {
        if (j - 1 >= 0) gen(j - 1, j) = beta * std::sqrt(double(j) * double(k - j + 1));
        if (j + 1 <= k) gen(j + 1, j) = -beta * std::sqrt(double(j + 1) * double(k - j));
    }
    return to_rows(gen.exp());
}

// beam-splitter combinatorics for the same matrix elements, independent of
// the exponential: ⟨p, k-p| U₁₃ |n, k-n⟩ with c = cos α, s = sin α
std::vector<std::vector<double>> rotation_13_reference(int k, double alpha) {
    const double c = std::cos(alpha), s = std::sin(alpha);
    std::vector<std::vector<double>> rows(k + 1, std::vector<double>(k + 1, 0.0));
    for (int p = 0; p <= k; ++p) {
        for (int n = 0; n <= k; ++n) {
            const int m = k - n, q = k - p;
            const double scale =
                std::sqrt(factorial(p) * factorial(q) / (factorial(n) * factorial(m)));
            double sum = 0.0;
            for (int r = std::max(0, p - m); r <= std::min(n, p); ++r) {
                const int t = p - r;
                sum += binomial(n, r) * binomial(m, t) * std::pow(c, r) *
                       std::pow(-s, n - r) * std::pow(s, t) * std::pow(c, m - t);
            }
            rows[p][n] = scale * sum;
        }
    }
    return rows;
}

std::vector<std::vector<double>> rotation_24_reference(int k, double beta) {
    const double c = std::cos(beta), s = std::sin(beta);
    std::vector<std::vector<double>> rows(k + 1, std::vector<double>(k + 1, 0.0));
    for (int p = 0; p <= k; ++p) {
        for (int n = 0; n <= k; ++n) {
            const int m = k - n, q = k - p;
            const double scale =
                std::sqrt(factorial(p) * factorial(q) / (factorial(n) * factorial(m)));
            double sum = 0.0;
            for (int r = std::max(0, p - m); r <= std::min(n, p); ++r) {
                const int t = p - r;
                sum += binomial(n, r) * binomial(m, t) * std::pow(c, r + m - t) *
                       std::pow(s, n - r) * std::pow(-s, t);
            }
            rows[p][n] = scale * sum;
        }
    }
    return rows;
}

double RotatedJointProbabilities::total() const {
    double sum = 0.0;
    for (const auto& [occ, prob] : q) sum += prob;
    return sum;
}

RotatedJointProbabilities rotate_and_project(const TwinBeamPair& state, double alpha,
                                             double beta, int n_max) {
    RotatedJointProbabilities out;
    out.alpha = alpha;
    out.beta = beta;

    // both rotations conserve their pair's photon number, and the source
    // puts n photons in pair (1,3) and n in pair (2,4) for each |n,n,m,m⟩
    // term with n+m = k, so sectors decouple
    for (int k = 0; k <= 2 * n_max; ++k) {
        const auto r13 = rotation_13(k, alpha);
        const auto r24 = rotation_24(k, beta);
        const int n_lo = std::max(0, k - n_max);
        const int n_hi = std::min(k, n_max);
        for (int i = 0; i <= k; ++i) {
            for (int l = 0; l <= k; ++l) {
                cplx amp = 0.0;
                for (int n = n_lo; n <= n_hi; ++n) {
                    const cplx weight = state.pair12.coeffs[n] * state.pair34.coeffs[k - n];
                    amp += weight * r13[i][n] * r24[l][n];
                }
                const double prob = std::norm(amp);
                if (prob > 0.0) out.q[{i, l, k - i, k - l}] = prob;
            }
        }
    }
    return out;
}

PairCorrelation correlation_detail(const NopaParams& params, double alpha, double beta,
                                   int n_max) {
    const auto state = build_state(params, n_max);
    const auto joint = rotate_and_project(state, alpha, beta, n_max);

    // exactly one photon per beam: beam a spans modes (1,3), beam b (2,4);
    // outcome (v,v) puts the photons in modes 1 and 4, etc.
    PairCorrelation res;
    const double q_vv = joint.at(1, 0, 0, 1);
    const double q_hh = joint.at(0, 1, 1, 0);
    const double q_vh = joint.at(1, 1, 0, 0);
    const double q_hv = joint.at(0, 0, 1, 1);
    res.prob_one_pair = q_vv + q_hh + q_vh + q_hv;
    if (res.prob_one_pair <= 0.0)
        throw degenerate_denominator(
            "one-photon-pair probability vanishes, correlation undefined");
    res.p11 = q_vv / res.prob_one_pair;
    res.p00 = q_hh / res.prob_one_pair;
    res.p10 = q_vh / res.prob_one_pair;
    res.p01 = q_hv / res.prob_one_pair;
    res.correlation = res.p11 + res.p00 - res.p10 - res.p01;
    return res;
}

double correlation_exact(const NopaParams& params, double alpha, double beta, int n_max) {
    return correlation_detail(params, alpha, beta, n_max).correlation;
}

double bell_exact(const NopaParams& params, const BellAngles& angles, int n_max) {
    angles.validate();
    const double c1 = correlation_exact(params, angles.alpha, angles.beta, n_max);
    const double c2 = correlation_exact(params, angles.alpha, angles.beta_prime, n_max);
    const double c3 = correlation_exact(params, angles.alpha_prime, angles.beta_prime, n_max);
    const double c4 = correlation_exact(params, angles.alpha_prime, angles.beta, n_max);
    return std::abs(c1 - c2) + std::abs(c3 + c4);
}

}  // namespace oracle
}  // namespace belltomo
