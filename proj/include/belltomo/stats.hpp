#pragma once
// Small statistics toolbox: normal CDF/quantile, regularized upper
// incomplete gamma (for chi-square p-values), compensated summation,
// and the equiprobable-bin 2D goodness-of-fit test used by the sampler
// checks and the selftest command.

#include <cmath>
#include <cstddef>
#include <vector>

namespace belltomo {

// Neumaier variant of Kahan summation; long oscillating kernel sums lose
// several digits under naive accumulation
struct CompensatedSum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double v) {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v))
            comp += (sum - t) + v;
        else
            comp += (v - t) + sum;
        sum = t;
    }
    double value() const { return sum + comp; }
};

double normal_cdf(double x);

// inverse of normal_cdf, |error| < 2e-15 via rational approximation plus
// one Halley refinement; p in (0,1)
double normal_quantile(double p);

// regularized upper incomplete gamma Q(a,x); p-value of a chi-square
// statistic with k dof is Q(k/2, chi2/2)
double gamma_q(double a, double x);

double chi2_pvalue(double chi2, int dof);

struct Chi2Result {
    double chi2 = 0.0;
    int dof = 0;
    double p_value = 0.0;
};

// chi-square test of iid standard-normal pairs (u,v) against N(0,1)⊗N(0,1)
// on an n_bins×n_bins grid with equiprobable edges; expected counts come
// from the exact CDF on the same edges, so quantile error cannot bias it
Chi2Result gof_normal_pairs(const std::vector<double>& u, const std::vector<double>& v,
                            int n_bins);

double mean(const std::vector<double>& xs);
double variance(const std::vector<double>& xs);  // ddof = 1

}  // namespace belltomo
