#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "fpspec/kappa.hpp"
#include "fpspec/model.hpp"

#include <cmath>
#include <complex>

using namespace fpspec;

TEST_CASE("diffusion coefficient regression, beta = 3 and 4") {
    auto p3 = make_params(3.0);
    auto h3 = solve_h0(p3);
    auto k3 = compute_kappa(h3, p3);
    CHECK(k3.kappa > 0);
    CHECK(std::abs(k3.kappa - 0.364505506034) <= 1e-9 * k3.kappa);

    auto p4 = make_params(4.0);
    auto h4 = solve_h0(p4);
    auto k4 = compute_kappa(h4, p4);
    CHECK(k4.kappa > 0);
    CHECK(std::abs(k4.kappa - 0.378134733149) <= 1e-9 * k4.kappa);

    for (const auto* rep : {&k3, &k4}) {
        CHECK(rep->err_series >= 0);
        CHECK(rep->err_series + rep->err_mid + rep->err_far <= 1e-3 * rep->kappa);
        CHECK(rep->piece_series + rep->piece_mid + rep->piece_far < 0);
    }
    CHECK(k3.kappa
          == doctest::Approx(-2.0 * p3.c_beta_sq
                             * (k3.piece_series + k3.piece_mid + k3.piece_far)));
}

TEST_CASE("connection solution has no growing far component") {
    for (double beta : {3.0, 4.0}) {
        auto params = make_params(beta);
        auto h0 = solve_h0(params);
        CHECK(std::abs(h0.far_b) <= 1e-8 * std::abs(h0.far_a));
    }
}

TEST_CASE("origin structure: s^gamma H0 -> 1 with cubic error") {
    for (double beta : {3.0, 4.0}) {
        auto params = make_params(beta);
        auto h0 = solve_h0(params);
        double c_sup = 0;
        for (int i = 0; i <= 100; ++i) {
            double s = 1e-3 * std::pow(100.0, i / 100.0);
            Cplx val = h0.eval(s);
            double defect = std::abs(std::pow(s, params.gamma) * val - Cplx(1, 0));
            c_sup = std::max(c_sup, defect / (s * s * s));
        }
        CHECK(c_sup <= 1.0);
    }
}

TEST_CASE("imaginary part at gamma = 2 matches the leading series term") {
    // At gamma = 2 the first imaginary correction of the origin series is
    // -s/6 relative to the s^-gamma profile, so Im H0(0.05) ~ -8.333e-3.
    auto params = make_params(4.0);
    auto h0 = solve_h0(params);
    double im = std::imag(h0.eval(0.05));
    CHECK(std::abs(im - (-8.333e-3)) <= 0.05 * 8.333e-3);
}

TEST_CASE("result is insensitive to the matching window") {
    auto params = make_params(3.0);
    auto base = solve_h0(params);
    auto wide = solve_h0(params, 1e-2, 16.0);
    auto shifted = solve_h0(params, 5e-3, 14.0);

    CHECK(std::abs(wide.a_mix - base.a_mix) <= 1e-6 * std::abs(base.a_mix));

    double k_base = compute_kappa(base, params).kappa;
    double k_wide = compute_kappa(wide, params).kappa;
    double k_shift = compute_kappa(shifted, params).kappa;
    CHECK(std::abs(k_wide - k_base) <= 1e-3 * k_base);
    CHECK(std::abs(k_shift - k_base) <= 1e-3 * k_base);
}

TEST_CASE("window validation") {
    auto params = make_params(3.0);
    CHECK_THROWS_AS(solve_h0(params, 0.0, 14.0), std::invalid_argument);
    CHECK_THROWS_AS(solve_h0(params, 1e-2, 0.5), std::invalid_argument);
}
