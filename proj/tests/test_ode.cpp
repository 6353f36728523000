#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "fpspec/ode.hpp"

#include <cmath>
#include <complex>

using namespace fpspec;

namespace {

CoeffFn constant_coeff(Cplx c) {
    CoeffFn f;
    f.q = [c](double) { return c; };
    f.dq = [](double) { return Cplx(0, 0); };
    f.d2q = [](double) { return Cplx(0, 0); };
    return f;
}

} // namespace

TEST_CASE("integrate reproduces cosh/sinh for q = +1") {
    auto curve = integrate(constant_coeff(Cplx(1, 0)), 0.0, 3.0, Cplx(1, 0), Cplx(0, 0), 1e-12);
    REQUIRE(curve.grid.size() > 2);
    CHECK(curve.front() == doctest::Approx(0.0));
    CHECK(curve.back() == doctest::Approx(3.0));

    for (double v : {0.37, 1.0, 1.93, 2.51, 3.0}) {
        Cplx y, dy;
        curve.eval(v, y, dy);
        CHECK(std::abs(y - std::cosh(v)) <= 1e-9 * std::cosh(v));
        CHECK(std::abs(dy - std::sinh(v)) <= 1e-9 * std::cosh(v));
    }
}

TEST_CASE("integrate reproduces cos/sin for q = -1") {
    auto curve = integrate(constant_coeff(Cplx(-1, 0)), 0.0, 20.0, Cplx(0, 0), Cplx(1, 0), 1e-12);
    for (double v : {0.5, 4.71, 9.42, 15.0, 20.0}) {
        Cplx y, dy;
        curve.eval(v, y, dy);
        CHECK(std::abs(y - std::sin(v)) <= 2e-8);
        CHECK(std::abs(dy - std::cos(v)) <= 2e-8);
    }
}

TEST_CASE("integrate handles q = 0 and backward sweeps") {
    auto fwd = integrate(constant_coeff(Cplx(0, 0)), -1.0, 2.0, Cplx(2, 0), Cplx(3, 0));
    CHECK(std::abs(fwd.eval_value(1.5) - Cplx(2 + 3 * 2.5, 0)) <= 1e-10);

    auto bwd = integrate(constant_coeff(Cplx(1, 0)), 3.0, 0.0, Cplx(std::cosh(3.0), 0),
                         Cplx(std::sinh(3.0), 0), 1e-12);
    CHECK(bwd.front() == doctest::Approx(0.0));
    CHECK(bwd.back() == doctest::Approx(3.0));
    Cplx y, dy;
    bwd.eval(0.0, y, dy);
    CHECK(std::abs(y - Cplx(1, 0)) <= 1e-9);
    CHECK(std::abs(dy) <= 1e-9);
}

TEST_CASE("quintic Hermite interpolation holds between nodes") {
    // Complex constant coefficient so value and derivative are genuinely
    // complex; reference is cosh(sqrt(q) v) continued analytically.
    Cplx q0(0.3, 0.4);
    Cplx rt = std::sqrt(q0);
    auto curve = integrate(constant_coeff(q0), 0.0, 4.0, Cplx(1, 0), Cplx(0, 0), 1e-11);
    REQUIRE(curve.second.size() == curve.grid.size());

    double worst = 0;
    for (int i = 0; i <= 200; ++i) {
        double v = 4.0 * i / 200.0;
        Cplx ref = std::cosh(rt * v);
        worst = std::max(worst, std::abs(curve.eval_value(v) - ref) / std::abs(ref));
    }
    CHECK(worst <= 1e-8);
}

TEST_CASE("taylor_step matches a tight integration over one small step") {
    CoeffFn coeff;
    coeff.q = [](double v) { return Cplx(std::cos(v), 0.3 * std::sin(v)); };
    coeff.dq = [](double v) { return Cplx(-std::sin(v), 0.3 * std::cos(v)); };
    coeff.d2q = [](double v) { return Cplx(-std::cos(v), -0.3 * std::sin(v)); };

    double v0 = 0.4, h = 1e-3;
    Cplx y0(0.7, -0.2), dy0(0.1, 0.5);
    Cplx y_t, dy_t;
    taylor_step(coeff, v0, y0, dy0, h, y_t, dy_t);

    auto ref = integrate(coeff, v0, v0 + h, y0, dy0, 1e-13, h / 4);
    Cplx y_r, dy_r;
    ref.eval(v0 + h, y_r, dy_r);
    CHECK(std::abs(y_t - y_r) <= 1e-13);
    CHECK(std::abs(dy_t - dy_r) <= 1e-11);
}

TEST_CASE("wronskian_drift is tiny for an independent pair") {
    Cplx q0(0, 1);
    auto a = integrate(constant_coeff(q0), 0.0, 6.0, Cplx(1, 0), Cplx(0, 0), 1e-12);
    auto b = integrate(constant_coeff(q0), 0.0, 6.0, Cplx(0, 0), Cplx(1, 0), 1e-12);
    CHECK(wronskian_drift(a, b) <= 1e-9);
}

TEST_CASE("frobenius_seed follows the documented recurrence") {
    // gamma = 1.5, growing root rho = gamma + 1 = 2.5. Brackets
    // (rho+k)(rho+k-1) - gamma(gamma+1) evaluate to 5, 12, 21 for k = 1..3,
    // so with lambda = 0: b1 = b2 = 0, b3 = i/21.
    auto seed = frobenius_seed(2.5, 1.5, Cplx(0, 0), 1e-2, 24);
    REQUIRE(seed.coeffs.size() >= 4);
    CHECK(std::abs(seed.coeffs[0] - Cplx(1, 0)) == 0.0);
    CHECK(std::abs(seed.coeffs[1]) == 0.0);
    CHECK(std::abs(seed.coeffs[2]) == 0.0);
    CHECK(std::abs(seed.coeffs[3] - Cplx(0, 1) / 21.0) <= 1e-18);

    auto shifted = frobenius_seed(2.5, 1.5, Cplx(0.05, 0), 1e-2, 24);
    CHECK(std::abs(shifted.coeffs[2] - Cplx(-0.05 / 12.0, 0)) <= 1e-18);

    CHECK(std::abs(seed.value - seed.value_at(seed.s_start)) == 0.0);
    CHECK(std::abs(seed.derivative - seed.derivative_at(seed.s_start)) == 0.0);
    CHECK(seed.truncation_estimate <= 1e-14);
}

TEST_CASE("frobenius_seed satisfies its own equation") {
    auto seed = frobenius_seed(2.5, 1.5, Cplx(0.03, 0), 5e-2, 30);
    double s = seed.s_start;
    double h = 1e-4 * s;
    // Five-point central second difference of value_at.
    Cplx d2 = (-seed.value_at(s - 2 * h) + 16.0 * seed.value_at(s - h) - 30.0 * seed.value_at(s)
               + 16.0 * seed.value_at(s + h) - seed.value_at(s + 2 * h))
              / (12.0 * h * h);
    Cplx rhs = (Cplx(1.5 * 2.5, 0) / (s * s) + Cplx(0, s) - seed.lambda) * seed.value_at(s);
    CHECK(std::abs(d2 - rhs) <= 1e-6 * std::abs(rhs));
}

TEST_CASE("frobenius_seed refuses a genuine logarithmic case") {
    // gamma = 2 puts the decaying root rho = -2 at resonance with k = 5;
    // the right side i b2 - lambda b3 vanishes only when lambda = 0.
    CHECK_NOTHROW(frobenius_seed(-2.0, 2.0, Cplx(0, 0), 1e-2, 24));
    CHECK_THROWS_AS(frobenius_seed(-2.0, 2.0, Cplx(0.01, 0), 1e-2, 24), std::runtime_error);
}
