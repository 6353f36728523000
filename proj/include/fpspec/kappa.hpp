#ifndef FPSPEC_KAPPA_HPP
#define FPSPEC_KAPPA_HPP

#include <vector>

#include "fpspec/eigenpair.hpp"
#include "fpspec/model.hpp"
#include "fpspec/ode.hpp"

namespace fpspec {

/// Connection solution H0 of -H'' + gamma(gamma+1) s^-2 H + i s H = 0 with
/// H ~ s^-gamma as s -> 0+ and no growing Airy component as s -> +infinity.
struct H0Solution {
    SolutionCurve curve;        // combined solution on [s_start, S_max]
    double s_start = 0;
    double s_max = 0;
    double s_fit = 0;           // where far_coeffs were extracted
    Cplx a_mix;                 // admixture of the s^(gamma+1) branch
    Cplx far_a, far_b;          // rotated-Airy coefficients at s_fit
    std::vector<Cplx> series_particular;  // Frobenius coefficients, rho = -gamma
    std::vector<Cplx> series_homogeneous; // Frobenius coefficients, rho = gamma+1
    double gamma = 0;

    /// H0(s) for s in [s_start, s_max]; below s_start the Frobenius series.
    Cplx eval(double s) const;
};

H0Solution solve_h0(const ModelParams& params, double s_start = 1e-2, double s_max = 14.0);

struct KappaReport {
    double kappa = 0;           // -2 C_beta^2 int_0^inf s^(1-gamma) Im H0 ds
    double piece_series = 0;    // [0, s_start] from the Frobenius series
    double piece_mid = 0;       // [s_start, s_fit] from the curve
    double piece_far = 0;       // [s_fit, inf) from far_a against the Airy decay
    double err_series = 0;      // magnitude of the first dropped series term
    double err_mid = 0;         // change under cell doubling
    double err_far = 0;         // magnitude of the closing tail bound
};

KappaReport compute_kappa(const H0Solution& h0, const ModelParams& params);

struct ScanFit {
    double kappa = 0;           // exponent pinned to (beta+1)/3
    double free_slope = 0;      // unconstrained log-log slope
    bool in_regime = false;     // |free_slope - (beta+1)/3| <= 0.05
};

/// Log-space fit of Re mu = kappa eta^alpha over a scan; requires at least
/// five valid points spanning 1.5 decades.
ScanFit kappa_from_scan(const std::vector<EigenResult>& points, const ModelParams& params);

} // namespace fpspec

#endif
