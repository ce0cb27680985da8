#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "belltomo/dawson.hpp"

using belltomo::dawson;

namespace {

// reference values cross-checked against two independent high-precision
// evaluations of D(x) = e^{-x^2} \int_0^x e^{t^2} dt
struct Ref {
    double x, value;
};
constexpr Ref kReference[] = {
    {0, 0},
    {0.01, 0.0099993333599992396},
    {0.050000000000000003, 0.049916749940509222},
    {0.10000000000000001, 0.099335992397852901},
    {0.19, 0.18549268702269875},
    {0.20000000000000001, 0.19475103336802793},
    {0.20999999999999999, 0.20393355044308947},
    {0.5, 0.42443638350202229},
    {0.92413887299999997, 0.54104422463518176},  // near the maximum
    {1, 0.5380795069127684},
    {1.5, 0.42824907108539867},
    {2, 0.301340388923792},
    {3, 0.17827103061055827},
    {5, 0.10213407442427686},
    {8, 0.063000198707553384},
    {11.9, 0.042166760562027797},
    {12, 0.041812876453988262},
    {12.1, 0.041464903615754611},
    {20, 0.025031367926403651},
    {50, 0.010002001201201684},
    {-0.69999999999999996, -0.51050405755923178},
    {-3.2999999999999998, -0.15978858047449507},
    {-12.050000000000001, -0.041638160455409107},
};

}  // namespace

TEST_CASE("matches reference values across all three regimes") {
    for (const auto& r : kReference) {
        INFO("x = ", r.x);
        CHECK(std::abs(dawson(r.x) - r.value) < 5e-15);
    }
}

TEST_CASE("odd function") {
    for (double x : {1e-8, 0.15, 0.7, 3.0, 11.99, 12.5, 40.0})
        CHECK(dawson(-x) == -dawson(x));
    CHECK(dawson(0.0) == 0.0);
}

TEST_CASE("continuous across regime boundaries") {
    for (double b : {0.2, 12.0}) {
        const double lo = dawson(b * (1 - 1e-12));
        const double hi = dawson(b * (1 + 1e-12));
        CHECK(std::abs(hi - lo) < 1e-10);
    }
}

TEST_CASE("asymptotic tail: 2x D(x) -> 1") {
    for (double x : {20.0, 50.0, 300.0, 1e4})
        CHECK(2 * x * dawson(x) == doctest::Approx(1.0).epsilon(1e-2));
    CHECK(2 * 1e8 * dawson(1e8) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("small-x series: D(x) ~ x - 2x^3/3") {
    for (double x : {1e-5, 1e-3, 0.05}) {
        const double series = x - 2 * x * x * x / 3;
        CHECK(std::abs(dawson(x) - series) < 4 * std::pow(x, 5));
    }
}

TEST_CASE("derivative sign structure: single interior maximum") {
    // D rises to its unique maximum near x = 0.9241 and decays after
    const double peak = 0.92413887300459572;
    CHECK(dawson(peak) > dawson(peak - 0.05));
    CHECK(dawson(peak) > dawson(peak + 0.05));
    double prev = dawson(1.0);
    for (double x = 1.5; x < 30.0; x += 0.5) {
        const double cur = dawson(x);
        CHECK(cur < prev);
        CHECK(cur > 0.0);
        prev = cur;
    }
}
