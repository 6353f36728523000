#ifndef FPSPEC_BASIS0_HPP
#define FPSPEC_BASIS0_HPP

#include <functional>

#include "fpspec/detail/green.hpp"
#include "fpspec/model.hpp"
#include "fpspec/ode.hpp"

namespace fpspec {

/// Basis of the limiting operator -d^2/dv^2 + W~ built from the even Cauchy
/// solution psi: psi1 = psi int_v^inf psi^-2 decays like c1 v^-gamma at +inf,
/// psi2 is its mirror image, and both are scaled by sqrt(N), N = int psi^-2,
/// so that the pair has Wronskian exactly 1.
struct Basis0 {
    ModelParams params;
    SolutionCurve psi;
    SolutionCurve psi1;
    SolutionCurve psi2;
    SolutionCurve z_curve;  // Z = M int_0^v M^-2, the growing companion of M
    double c = 0;           // psi ~ c v^(gamma+1)
    double c1 = 0;
    double c2 = 0;
    double norm = 0;        // N before the sqrt scaling
    double v_max = 0;

    /// int_v^inf psi^-2 (unscaled), with the analytic power tail beyond the grid.
    double inv_psi_sq_tail(double v) const;
    /// q = W~ with analytic first and second derivatives.
    CoeffFn coeff() const;
    green::KernelData kernel() const;
};

/// Even solution of psi'' = W~ psi with psi(0) = 1, psi'(0) = 0 on
/// [-v_max, v_max]; positivity is checked on the grid.
SolutionCurve solve_psi(const ModelParams& params, double v_max = 100.0);

Basis0 build_basis(const ModelParams& params, SolutionCurve psi);

/// T0 f with respect to the basis kernel; residual measured by centered
/// differences (see green::apply).
green::ApplyResult apply_t0(const std::function<Cplx(double)>& f, const Basis0& basis);

/// Empirical constant sup_v int |K0(v,w)| <w>^(-gamma-2-delta) dw / <v>^-gamma.
double kernel_bound_check(const Basis0& basis, double delta);

/// Z(v) = M(v) int_0^v M^-2 dw, the kernel companion growing like v^(gamma+1);
/// satisfies M Z' - M' Z = 1 identically.
SolutionCurve companion_z(const ModelParams& params, double v_max = 100.0);

} // namespace fpspec

#endif
