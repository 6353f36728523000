#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "fpspec/detail/quad.hpp"
#include "fpspec/model.hpp"

using namespace fpspec;

TEST_CASE("derived constants for beta = 3") {
    const ModelParams p = make_params(3.0);
    CHECK(p.gamma == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(p.alpha == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
    // int (1+v^2)^(-3/2) dv = 2 exactly
    CHECK(p.c_beta_sq == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("derived constants for beta = 4") {
    const ModelParams p = make_params(4.0);
    CHECK(p.alpha == doctest::Approx(5.0 / 3.0).epsilon(1e-15));
    // int (1+v^2)^(-2) dv = pi/2
    CHECK(p.c_beta_sq == doctest::Approx(2.0 / M_PI).epsilon(1e-12));
}

TEST_CASE("normalization against direct quadrature") {
    for (const double beta : {1.5, 3.0, 4.0, 4.5}) {
        const ModelParams p = make_params(beta);
        // split off the analytic tail beyond v = 50: int_50^inf v^-2g (1+..) ~ power law
        const double body = detail::adaptive_gk(
            [&](double v) {
                const double m = equilibrium(p, v);
                return m * m;
            },
            0.0, 50.0, 1e-13);
        const double tail = std::pow(50.0, 1.0 - 2.0 * p.gamma) / (2.0 * p.gamma - 1.0);
        CHECK(1.0 / p.c_beta_sq ==
              doctest::Approx(2.0 * (body + tail)).epsilon(1e-4));
    }
}

TEST_CASE("admissibility window") {
    CHECK_THROWS_AS(make_params(2.0), std::invalid_argument);
    CHECK_THROWS_AS(make_params(1.0), std::invalid_argument);
    CHECK_THROWS_AS(make_params(5.0), std::invalid_argument);
    CHECK_THROWS_AS(make_params(0.5), std::invalid_argument);
    CHECK_THROWS_AS(make_params(7.0), std::invalid_argument);
    CHECK_NOTHROW(make_params(1.9));
    CHECK_NOTHROW(make_params(2.1));
}

TEST_CASE("equilibrium shape") {
    const ModelParams p = make_params(3.0);
    CHECK(equilibrium(p, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(equilibrium(p, 2.0) == doctest::Approx(std::pow(5.0, -0.75)).epsilon(1e-14));
    CHECK(equilibrium(p, -2.0) == equilibrium(p, 2.0));
}

TEST_CASE("W is the logarithmic curvature of the equilibrium") {
    // W = M'' / M by construction; check against five-point differences
    for (const double beta : {3.0, 4.0}) {
        const ModelParams p = make_params(beta);
        for (const double v : {0.0, 0.35, 1.2, 3.7, 9.0}) {
            const double h = 1e-3;
            const auto m = [&](double u) { return equilibrium(p, u); };
            const double d2 = (-m(v + 2 * h) + 16 * m(v + h) - 30 * m(v) + 16 * m(v - h)
                               - m(v - 2 * h))
                              / (12 * h * h);
            const PotentialEval pe = potentials(p, v);
            CHECK(pe.w == doctest::Approx(d2 / m(v)).epsilon(1e-8));
        }
    }
}

TEST_CASE("potential split") {
    const ModelParams p = make_params(3.0);
    for (const double v : {0.0, 0.8, 2.5, 14.0}) {
        const PotentialEval pe = potentials(p, v);
        const double s = 1.0 + v * v;
        CHECK(pe.w_tilde == doctest::Approx(p.gamma * (p.gamma + 1.0) / s).epsilon(1e-13));
        CHECK(pe.v_split ==
              doctest::Approx(p.gamma * (p.gamma + 2.0) / (s * s)).epsilon(1e-13));
        CHECK(pe.w_tilde - pe.w == doctest::Approx(pe.v_split).epsilon(1e-12));
    }
}
