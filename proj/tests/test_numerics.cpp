#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "reslab/numerics.hpp"

using namespace reslab;

namespace {

// exp(u^2) erfc(u) at points spread over all regimes, 30-digit reference
struct ErfcxRef { Complex u, v; };
const ErfcxRef kErfcxRefs[] = {
    {{0.29999999999999999, 0.20000000000000001}, {0.713801052983651898, -0.134738594708294436}},
    {{1.5, -0.69999999999999996}, {0.287273659632316573, 0.1040539098885183}},
    {{3, 3.8999999999999999}, {0.0720610592814119254, -0.0898264654761045883}},
    {{-1.5, 1.5}, {-0.622706716388411641, 1.79071165397990662}},
    {{-2, -1}, {-26.4760587781992069, -30.3085711167433073}},
    {{0.10000000000000001, 3.7999999999999998}, {0.00440595189829005932, -0.154140147185519257}},
    {{4.5, 0.29999999999999999}, {0.121999409117787783, -0.00777506051261198562}},
    {{5, 23}, {0.00510497277457665259, -0.0234403854295281287}},
    {{-3, 9}, {-0.019083588990414826, -0.05660671018406751}},
    {{10, -14}, {0.0191135490789046138, 0.0266685238410304558}},
    {{0.20000000000000001, 6.5}, {0.00276880278367095049, -0.0877759238740301552}},
    {{0.5, -6.9000000000000004}, {0.00608780603481401617, 0.0821977858842463437}},
    {{24, 0.5}, {0.0234774001498122499, -0.000488267374273611264}},
    {{26, -1}, {0.0216516734173325071, 0.000831531108097870266}},
    {{40, 30}, {0.00902782636582354207, -0.00676816257540474676}},
    {{-20, 45}, {-0.00465535643898514528, -0.0104702310879702577}},
    {{0.050000000000000003, 4.2000000000000002}, {0.00175945395012468012, -0.138497496314138946}},
    {{1, 0}, {0.427583576155807004, 0.0}},
    {{-4, 6}, {-0.0441409260625140264, -0.0649325419628247395}},
    {{6.9000000000000004, 0.10000000000000001}, {0.0809174566014520107, -0.00114929125782353656}},
};

}  // namespace

TEST_CASE("erfcx basic values") {
    CHECK(std::abs(erfcx(Complex(0, 0)) - 1.0) < 1e-15);
    // large real argument: the summed asymptotic series 1/(u sqrt(pi)) sum (-1)^m (2m-1)!!/(2u^2)^m
    double u = 20.0;
    double term = 1.0, sum = 1.0;
    for (int mm = 1; mm < 30; ++mm) {
        term *= -(2.0 * mm - 1.0) / (2.0 * u * u);
        if (std::abs(term) < 1e-18) break;
        sum += term;
    }
    double asym = sum / (u * std::sqrt(kPi));
    CHECK(std::abs(erfcx(Complex(u, 0)).real() - asym) < 1e-10 * asym);
}

TEST_CASE("erfcx against high-precision reference") {
    for (const auto& ref : kErfcxRefs) {
        Complex v = erfcx(ref.u);
        CHECK(std::abs(v - ref.v) <= 1e-12 * std::abs(ref.v));
    }
}

TEST_CASE("erfcx against brute-force quadrature oracle") {
    // u = -e^{-i pi/4} * 3 * sqrt(0.5): the form the decay law produces
    Complex u = -std::exp(Complex(0, -kPi / 4)) * 3.0 * std::sqrt(0.5);
    Complex ours = erfcx(u);
    Complex brute = oracle::erfcx_trapezoid(-u);
    // reflection erfcx(u) = 2 exp(u^2) - erfcx(-u); -u has Re > 0
    Complex expect = 2.0 * std::exp(u * u) - brute;
    CHECK(std::abs(ours - expect) < 1e-9 * std::abs(expect));
}

TEST_CASE("erfcx conjugation symmetry is exact") {
    const Complex pts[] = {{0.3, 0.2}, {4.4, 1.0}, {-2.0, 5.0}, {17.0, 3.0}, {0.1, 6.0}};
    for (Complex u : pts) {
        Complex a = erfcx(std::conj(u));
        Complex b = std::conj(erfcx(u));
        CHECK(std::abs(a - b) <= 1e-13 * std::abs(b));
    }
}

TEST_CASE("quartic roots: exact factorizations") {
    // (k^2-1)(k^2+1) = k^4 - 1
    auto r = quartic_roots(-1.0, 0.0, 0.0, 0.0, 1.0);
    std::vector<Complex> expect = {{-1, 0}, {0, -1}, {0, 1}, {1, 0}};
    for (size_t i = 0; i < 4; ++i) CHECK(std::abs(r[i] - expect[i]) < 1e-12);
}

TEST_CASE("quartic roots: quadruple root via clustering") {
    // (k-2)^4 = k^4 - 8k^3 + 24k^2 - 32k + 16
    auto r = quartic_roots(16.0, -32.0, 24.0, -8.0, 1.0);
    auto clusters = cluster_points({r.begin(), r.end()}, 1e-2);
    REQUIRE(clusters.size() == 1);
    CHECK(clusters[0].second == 4);
    // a quadruple root carries the eps^(1/4) forward-error law; the cluster
    // mean recovers part of it
    CHECK(std::abs(clusters[0].first - 2.0) < 5e-4);
    for (Complex root : r)
        CHECK(std::abs(std::pow(root - 2.0, 4)) < 1e-10 * 32.0 * 16.0);  // backward error
}

TEST_CASE("quartic roots: coefficient reconstruction property") {
    std::mt19937 rng(1234);
    std::uniform_real_distribution<double> uni(-2.0, 2.0);
    for (int trial = 0; trial < 50; ++trial) {
        Complex c[5];
        for (auto& x : c) x = Complex(uni(rng), uni(rng));
        if (std::abs(c[4]) < 0.1) c[4] += 1.0;
        auto r = quartic_roots(c[0], c[1], c[2], c[3], c[4]);
        // rebuild monic coefficients from the roots
        Complex e1 = 0, e2 = 0, e3 = 0, e4 = 1;
        e1 = r[0] + r[1] + r[2] + r[3];
        e2 = r[0] * r[1] + r[0] * r[2] + r[0] * r[3] + r[1] * r[2] + r[1] * r[3] + r[2] * r[3];
        e3 = r[0] * r[1] * r[2] + r[0] * r[1] * r[3] + r[0] * r[2] * r[3] + r[1] * r[2] * r[3];
        e4 = r[0] * r[1] * r[2] * r[3];
        double norm = 0;
        for (auto& x : c) norm = std::max(norm, std::abs(x));
        CHECK(std::abs(-e1 - c[3] / c[4]) < 1e-9 * norm / std::abs(c[4]) * 10);
        CHECK(std::abs(e2 - c[2] / c[4]) < 1e-8 * norm / std::abs(c[4]) * 10);
        CHECK(std::abs(-e3 - c[1] / c[4]) < 1e-8 * norm / std::abs(c[4]) * 10);
        CHECK(std::abs(e4 - c[0] / c[4]) < 1e-8 * norm / std::abs(c[4]) * 10);
    }
}

TEST_CASE("principal value: exponential-integral identity") {
    // PV int_0^inf e^{-x}/(1-x) dx = e^{-1} Ei(1); Ei(1) by its series
    double gamma = 0.57721566490153286;
    double Ei1 = gamma;  // Ei(1) = gamma + sum 1/(n n!)
    double term = 1.0;
    for (int n = 1; n < 25; ++n) {
        term /= n;
        Ei1 += term / n;
    }
    double expect = std::exp(-1.0) * Ei1;
    auto f = [](double x) { return Complex(std::exp(-x), 0); };
    auto pv = principal_value(f, 1.0, 0.0, std::numeric_limits<double>::infinity());
    CHECK(std::abs(pv.value.real() - expect) < 1e-9);
    auto pv2 = principal_value_subtracted(f, 1.0, 0.0, std::numeric_limits<double>::infinity());
    CHECK(std::abs(pv2.value.real() - expect) < 1e-10);
}

TEST_CASE("principal value: even numerator integrates to zero") {
    // f even about the singularity makes f(x)/(lambda-x) odd there
    auto f = [](double x) { return Complex(std::cosh(x - 2.0), 0); };
    auto pv = principal_value(f, 2.0, 1.0, 3.0);
    CHECK(std::abs(pv.value) < 1e-9);
}

TEST_CASE("principal value: dual-scheme agreement on the Friedrichs integral") {
    // I(1) for v^2 = xi^2 e^{-2 xi}; closed form -3/4 + e^{-2} Ei(2)
    auto f = [](double x) { return Complex(x * x * std::exp(-2 * x), 0); };
    auto a = principal_value(f, 1.0, 0.0, std::numeric_limits<double>::infinity());
    auto b = principal_value_subtracted(f, 1.0, 0.0, std::numeric_limits<double>::infinity());
    CHECK(std::abs(a.value - b.value) < 1e-9);
    double Ei2 = 0.57721566490153286 + std::log(2.0);
    double term = 1.0;
    for (int n = 1; n < 40; ++n) {
        term *= 2.0 / n;
        Ei2 += term / n;
    }
    double expect = -0.75 + std::exp(-2.0) * Ei2;
    CHECK(std::abs(b.value.real() - expect) < 1e-10);
}

TEST_CASE("semi-infinite quadrature") {
    auto gauss = [](double z) { return Complex(std::exp(-z * z), 0); };
    auto r = integrate_semi_infinite(gauss, 0.0);
    CHECK(std::abs(r.value.real() - std::sqrt(kPi) / 2) < 1e-12);

    // dual transformation agreement on a rational-damped integrand
    auto f = [](double z) {
        return z * z * std::exp(-z * z) / Complex(z * z, 1.0);
    };
    QuadratureSpec alg, expn;
    expn.map = QuadratureSpec::Map::exponential;
    auto va = integrate_semi_infinite(f, 0.0, alg);
    auto ve = integrate_semi_infinite(f, 0.0, expn);
    CHECK(std::abs(va.value - ve.value) < 1e-9);

    // monotone decrease of the heat-kernel-like family
    double prev = 1e9;
    for (double t : {1.0, 2.0, 4.0}) {
        auto g = [t](double z) { return z * z * std::exp(-z * z * t) / Complex(z * z, 1.0); };
        double cur = std::abs(integrate_semi_infinite(g, 0.0).value);
        CHECK(cur < prev);
        prev = cur;
    }
}

TEST_CASE("oscillatory quadrature against the exact exponential moment") {
    for (double t : {0.3, 7.0, 250.0, 8000.0}) {
        auto g = [](double x) { return 1.0 + x * (1.0 - x); };
        auto r = integrate_oscillatory(g, 0.0, 1.0, t);
        // exact: int_0^1 (1 + x - x^2) e^{-ixt} dx via antiderivatives
        Complex it(0, t);
        auto m0 = (1.0 - std::exp(-it)) / it;
        auto m1 = (std::exp(-it) * Complex(-1, 0) * (1.0 + it) + 1.0) / (it * it);
        auto m2 = (2.0 - std::exp(-it) * (it * it + 2.0 * it + 2.0)) / (it * it * it);
        Complex expect = m0 + m1 - m2;
        CHECK(std::abs(r.value - expect) < 1e-9);
    }
}
