#ifndef FPSPEC_BASIS_ETA_HPP
#define FPSPEC_BASIS_ETA_HPP

#include <functional>

#include "fpspec/airy.hpp"
#include "fpspec/basis0.hpp"
#include "fpspec/detail/green.hpp"
#include "fpspec/model.hpp"
#include "fpspec/ode.hpp"

namespace fpspec {

/// Basis of -d^2/dv^2 + W~ + i eta v - lambda eta^(2/3) built from the even
/// Cauchy solution psi_le, in exact analogy with Basis0; psi1 decays toward
/// +inf along the rotated-Airy profile, psi2 toward -inf, and the pair is
/// scaled by the complex sqrt of N = int (psi_le)^-2 so W{psi1, psi2} = 1.
struct BasisEta {
    ModelParams params;
    Cplx lambda;
    double eta = 0;
    double s0 = 3.0;            // matching abscissa in the rescaled variable
    SolutionCurve psi_le;
    SolutionCurve psi1;
    SolutionCurve psi2;
    Cplx c_lambda;              // eta^((gamma+1)/3) times the b-coefficient at s0
    double a_rel = 0;           // |ca a| / |cb b| at s0, structure diagnostic
    Cplx wronskian_target;      // complex N used for the sqrt normalization
    double v_max = 0;

    CoeffFn coeff() const;
    green::KernelData kernel() const;
};

/// Piecewise weights: p2 follows <v>^-gamma through the bulk and the modulus
/// of the decaying rotated-Airy solution on each Airy zone; p1 divides by
/// <v>^(2+delta). eta = 0 collapses both to pure power laws.
struct WeightProfile {
    double eta = 0;
    Cplx lambda;
    double delta = 1.0;
    double gamma = 0;
    double s0 = 3.0;

    double p1(double v) const;
    double p2(double v) const;
    /// Ratio of the Airy branch to the power branch at the right seam.
    double seam_ratio() const;
};

/// Integrate the complex Cauchy problem outward from v = 0 in both
/// directions and extract c_lambda by an Airy-basis decomposition at
/// v = s0 eta^(-1/3). Fills everything except psi1/psi2.
BasisEta solve_psi_eta(const ModelParams& params, Cplx lambda, double eta, double v_max);

/// Completes the pair: complex quadrature of psi_le^-2 with closed-form
/// Airy tails (int_s^inf b^-2 = 2 pi a(s)/b(s) and its mirror image).
BasisEta build_basis_eta(BasisEta basis);

green::ApplyResult apply_t_eta(const std::function<Cplx(double)>& f, const BasisEta& basis);

WeightProfile weight(const ModelParams& params, Cplx lambda, double eta, double delta);

/// sup_v int |K_(lambda,eta)(v,w)| p1(w) dw / p2(v) over the basis grid.
double weighted_kernel_bound(const BasisEta& basis, const WeightProfile& weights);

} // namespace fpspec

#endif
