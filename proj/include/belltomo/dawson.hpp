#pragma once
// Dawson integral F(x) = e^{-x²} ∫₀ˣ e^{t²} dt, double precision.
// Three regimes: Maclaurin series for small |x|, Rybicki's exponentially
// sampled series in the middle, asymptotic series for large |x|.
// The sampling step h = 1/4 bounds the Rybicki truncation error by
// exp(-(π/2h)²) ≈ 7e-18, below double rounding noise.

namespace belltomo {

double dawson(double x);

}  // namespace belltomo
