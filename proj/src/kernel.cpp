#include "belltomo/kernel.hpp"

#include <cmath>

#include "belltomo/dawson.hpp"

namespace belltomo {

namespace {

struct KernelInputs {
    double a;
    double v;
    double f;  // dawson(v)
};

KernelInputs kernel_inputs(double x, Efficiency eta) {
    eta.validate();
    const double a = (2.0 * eta.eta - 1.0) / (8.0 * eta.eta);
    const double v = x / (2.0 * std::sqrt(a));
    return {a, v, dawson(v)};
}

double diag0(const KernelInputs& in) {
    return (1.0 - 2.0 * in.v * in.f) / (4.0 * in.a);
}

double diag1(const KernelInputs& in) {
    const double v2 = in.v * in.v;
    return diag0(in) +
           ((v2 - 1.0) + in.v * in.f * (3.0 - 2.0 * v2)) / (16.0 * in.a * in.a);
}

double offdiag_magnitude(const KernelInputs& in) {
    return (in.v + (1.0 - 2.0 * in.v * in.v) * in.f) /
           (8.0 * in.a * std::sqrt(in.a));
}

}  // namespace

double kernel_diag(int n, double x, Efficiency eta) {
    const auto in = kernel_inputs(x, eta);
    switch (n) {
        case 0: return diag0(in);
        case 1: return diag1(in);
        default: throw invalid_parameter("kernel_diag supports photon numbers 0 and 1");
    }
}

std::complex<double> kernel_offdiag(double x, double phase, Efficiency eta) {
    return std::polar(1.0, -phase) * offdiag_magnitude(kernel_inputs(x, eta));
}

std::complex<double> kernel_offdiag_minus(double x, double phase, Efficiency eta) {
    return std::polar(1.0, phase) * offdiag_magnitude(kernel_inputs(x, eta));
}

KernelValues kernel_values(double x, double phase, Efficiency eta) {
    const auto in = kernel_inputs(x, eta);
    KernelValues kv;
    kv.k0 = diag0(in);
    kv.k1 = diag1(in);
    kv.g = offdiag_magnitude(in);
    kv.k_plus = std::polar(1.0, -phase) * kv.g;
    return kv;
}

std::array<KernelValues, 4> kernel_event(const QuadSample& sample, Efficiency eta) {
    return {kernel_values(sample.x[0], sample.phase[0], eta),
            kernel_values(sample.x[1], sample.phase[1], eta),
            kernel_values(sample.x[2], sample.phase[2], eta),
            kernel_values(sample.x[3], sample.phase[3], eta)};
}

}  // namespace belltomo
