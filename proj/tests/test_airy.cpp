#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "fpspec/airy.hpp"

using namespace fpspec;

TEST_CASE("values at the origin against the closed form") {
    const AiryValue a0 = ai(Cplx(0, 0));
    const double ai0 = std::pow(3.0, -2.0 / 3.0) / std::tgamma(2.0 / 3.0);
    const double aip0 = -std::pow(3.0, -1.0 / 3.0) / std::tgamma(1.0 / 3.0);
    CHECK(std::abs(a0.ai - ai0) <= 1e-10);
    CHECK(std::abs(a0.ai_prime - aip0) <= 1e-10);
}

TEST_CASE("series and asymptotic branches agree on the overlap annulus") {
    const double r = airy_switch_radius();
    for (int k = 0; k < 12; ++k) {
        // stay away from the anti-Stokes rays where the asymptotic form degrades
        const double arg = -0.55 * M_PI + 1.1 * M_PI * k / 11.0;
        const Cplx z = std::polar(r, arg);
        const AiryValue s = ai_series_branch(z);
        const AiryValue a = ai_asymptotic_branch(z);
        CHECK(std::abs(s.ai - a.ai) / std::abs(s.ai) <= 1e-11);
        CHECK(std::abs(s.ai_prime - a.ai_prime) / std::abs(s.ai_prime) <= 1e-11);
    }
}

TEST_CASE("rotated pair wronskian") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> us(-12.0, 12.0), ul(-0.05, 0.05);
    for (int k = 0; k < 200; ++k) {
        const RotatedPair pair(Cplx(ul(rng), ul(rng)));
        const double s = us(rng);
        const RaySolution a = pair.a(s), b = pair.b(s);
        const Cplx w = a.val * b.der - a.der * b.val;
        CHECK(std::abs(w - RotatedPair::wronskian()) <= 1e-9);
    }
}

TEST_CASE("three-solution identity on random points") {
    // Ai(z) + j Ai(jz) + j^2 Ai(j^2 z) = 0 with j = exp(2 pi i / 3); the
    // defect is measured against the largest term since two of the three
    // solutions grow exponentially for s > 0.
    const Cplx j = std::polar(1.0, 2.0 * M_PI / 3.0);
    std::mt19937 rng(20240817);
    std::uniform_real_distribution<double> us(-10.0, 10.0), ul(-0.05, 0.05);
    double worst = 0;
    for (int k = 0; k < 1000; ++k) {
        const RotatedPair pair(Cplx(ul(rng), ul(rng)));
        const double s = us(rng);
        const RaySolution a = pair.a(s), b = pair.b(s), c = pair.c(s);
        const double scale = std::max(
            {1.0, std::abs(a.val), std::abs(b.val), std::abs(c.val)});
        const double dscale = std::max(
            {1.0, std::abs(a.der), std::abs(b.der), std::abs(c.der)});
        worst = std::max(worst, std::abs(a.val + j * b.val + j * j * c.val) / scale);
        worst = std::max(worst, std::abs(a.der + j * b.der + j * j * c.der) / dscale);
    }
    CHECK(worst <= 1e-10);
}

TEST_CASE("rotated solutions solve u'' = (i s - lambda) u") {
    const Cplx lambda(0.03, -0.02);
    const RotatedPair pair(lambda);
    const double h = 1e-3;
    for (const double s : {-6.0, -1.3, 0.0, 2.4, 7.5}) {
        const Cplx upp =
            (pair.a(s + h).val - 2.0 * pair.a(s).val + pair.a(s - h).val) / (h * h);
        const Cplx rhs = (Cplx(0, 1) * s - lambda) * pair.a(s).val;
        CHECK(std::abs(upp - rhs) <= 1e-6 * (1.0 + std::abs(rhs)));
    }
}

TEST_CASE("product modulus approaches the asymptotic law") {
    const Cplx lambda(0.01, 0.02);
    CHECK(product_modulus_check(lambda, 30.0) == doctest::Approx(1.0).epsilon(2e-2));
    CHECK(product_modulus_check(lambda, 60.0) == doctest::Approx(1.0).epsilon(1e-2));
}

TEST_CASE("airy-basis decomposition round trip") {
    const Cplx lambda(-0.01, 0.04);
    const RotatedPair pair(lambda);
    const Cplx ca_ref(0.7, -0.2), cb_ref(-0.1, 0.5);
    for (const double s : {-3.0, 0.5, 4.0}) {
        const RaySolution a = pair.a(s), b = pair.b(s);
        const Cplx val = ca_ref * a.val + cb_ref * b.val;
        const Cplx der = ca_ref * a.der + cb_ref * b.der;
        const auto [ca, cb] = decompose_in_airy_basis(val, der, s, lambda);
        CHECK(std::abs(ca - ca_ref) <= 1e-9);
        CHECK(std::abs(cb - cb_ref) <= 1e-9);
    }
}
