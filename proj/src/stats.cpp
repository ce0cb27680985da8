#include "belltomo/stats.hpp"

#include <cmath>
#include <stdexcept>

#include "belltomo/core.hpp"

namespace belltomo {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

namespace {

// Acklam's rational approximation, |relative error| < 1.15e-9
double quantile_acklam(double p) {
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    if (p < plow) {
        const double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p > 1.0 - plow) {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double q = p - 0.5, r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace

double normal_quantile(double p) {
    if (!(p > 0.0) || !(p < 1.0)) throw invalid_parameter("normal_quantile needs p in (0,1)");
    double x = quantile_acklam(p);
    // one Halley step against the exact erfc-based CDF reaches ~2e-15
    const double e = normal_cdf(x) - p;
    const double u = e * std::sqrt(2.0 * pi) * std::exp(x * x / 2.0);
    x -= u / (1.0 + x * u / 2.0);
    return x;
}

namespace {

double gamma_p_series(double a, double x) {
    // lower series: P(a,x) = x^a e^{-x}/Γ(a) Σ x^n / (a(a+1)...(a+n))
    double ap = a, sum = 1.0 / a, del = sum;
    for (int n = 0; n < 500; ++n) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * 1e-16)
            return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
    throw std::runtime_error("gamma series failed to converge");
}

double gamma_q_contfrac(double a, double x) {
    // modified Lentz continued fraction for Q(a,x), stable for x > a+1
    const double tiny = 1e-300;
    double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
    for (int i = 1; i <= 500; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-16)
            return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
    }
    throw std::runtime_error("gamma continued fraction failed to converge");
}

}  // namespace

double gamma_q(double a, double x) {
    if (!(a > 0.0) || x < 0.0) throw invalid_parameter("gamma_q needs a > 0, x >= 0");
    if (x == 0.0) return 1.0;
    return x < a + 1.0 ? 1.0 - gamma_p_series(a, x) : gamma_q_contfrac(a, x);
}

double chi2_pvalue(double chi2, int dof) { return gamma_q(0.5 * dof, 0.5 * chi2); }

Chi2Result gof_normal_pairs(const std::vector<double>& u, const std::vector<double>& v,
                            int n_bins) {
    if (u.size() != v.size() || u.empty() || n_bins < 2)
        throw invalid_parameter("gof_normal_pairs: need equal nonempty samples, n_bins >= 2");
    // chi-square approximation needs a few expected counts per cell
    if (u.size() < 5.0 * n_bins * n_bins)
        throw invalid_parameter("gof_normal_pairs: too few samples for this bin count");
    // interior edges at the exact equiprobable quantiles
    std::vector<double> edges(n_bins - 1);
    for (int i = 1; i < n_bins; ++i)
        edges[i - 1] = normal_quantile(static_cast<double>(i) / n_bins);
    // per-bin probability recomputed from the CDF at the same edges
    std::vector<double> prob(n_bins);
    double prev = 0.0;
    for (int i = 0; i < n_bins; ++i) {
        const double cdf = i + 1 < n_bins ? normal_cdf(edges[i]) : 1.0;
        prob[i] = cdf - prev;
        prev = cdf;
    }
    auto bin_of = [&](double x) {
        int lo = 0, hi = n_bins - 1;
        while (lo < hi) {
            const int mid = (lo + hi) / 2;
            if (x < edges[mid])
                hi = mid;
            else
                lo = mid + 1;
        }
        return lo;
    };
    std::vector<long long> count(static_cast<std::size_t>(n_bins) * n_bins, 0);
    for (std::size_t k = 0; k < u.size(); ++k)
        ++count[static_cast<std::size_t>(bin_of(u[k])) * n_bins + bin_of(v[k])];
    const double n = static_cast<double>(u.size());
    Chi2Result r;
    for (int i = 0; i < n_bins; ++i)
        for (int j = 0; j < n_bins; ++j) {
            const double expd = n * prob[i] * prob[j];
            const double diff = count[static_cast<std::size_t>(i) * n_bins + j] - expd;
            r.chi2 += diff * diff / expd;
        }
    r.dof = n_bins * n_bins - 1;  // fully specified null, no fitted parameters
    r.p_value = chi2_pvalue(r.chi2, r.dof);
    return r;
}

double mean(const std::vector<double>& xs) {
    CompensatedSum s;
    for (double x : xs) s.add(x);
    return s.value() / static_cast<double>(xs.size());
}

double variance(const std::vector<double>& xs) {
    const double m = mean(xs);
    CompensatedSum s;
    for (double x : xs) s.add((x - m) * (x - m));
    return s.value() / static_cast<double>(xs.size() - 1);
}

}  // namespace belltomo
