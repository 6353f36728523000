#ifndef FPSPEC_ODE_HPP
#define FPSPEC_ODE_HPP

#include <complex>
#include <functional>
#include <vector>

namespace fpspec {

using Cplx = std::complex<double>;

/// Coefficient of the scalar equation psi'' = q(v) psi, with optional
/// analytic derivatives (needed by the Taylor-step residual probes).
struct CoeffFn {
    std::function<Cplx(double)> q;
    std::function<Cplx(double)> dq;   // may be empty
    std::function<Cplx(double)> d2q;  // may be empty
};

/// Adaptively sampled solution of a second-order Cauchy problem.
/// Grid strictly increasing; value/derivative stored at every accepted step.
/// `second` holds q(v_i) y_i when the producer knows the equation, which
/// upgrades interpolation from cubic to quintic Hermite (~1e-9 between
/// nodes instead of ~1e-6 at h = 0.25).
struct SolutionCurve {
    std::vector<double> grid;
    std::vector<Cplx> value;
    std::vector<Cplx> derivative;
    std::vector<Cplx> second;  // optional; same length as grid when present
    struct Meta {
        std::size_t steps = 0;
        std::size_t rejected = 0;
        double max_local_error = 0;
    } meta;

    /// Hermite interpolation: quintic when `second` is populated, else cubic.
    void eval(double v, Cplx& val, Cplx& der) const;
    Cplx eval_value(double v) const;
    std::size_t cell_index(double v) const;
    double front() const { return grid.front(); }
    double back() const { return grid.back(); }
};

/// Embedded Dormand-Prince 5(4) with PI step control for psi'' = q psi.
/// Integrates from `from` to `to` (either direction); the returned grid is
/// stored increasing. Throws std::runtime_error when the step size underflows.
SolutionCurve integrate(const CoeffFn& q, double from, double to, Cplx y0, Cplx dy0,
                        double tol = 1e-10, double h_max = 0.25);

/// Truncated Frobenius solution of H'' = (gamma(gamma+1)/s^2 + i s - lambda) H
/// around the regular singular point s = 0:
///   H = sum_k b_k s^(rho+k),  b_0 = 1,
///   b_k [ (rho+k)(rho+k-1) - gamma(gamma+1) ] = i b_{k-3} - lambda b_{k-2}.
/// Indicial roots rho = -gamma and rho = gamma+1. When the bracket vanishes
/// with a nonzero right side the series needs a logarithm and we refuse; a
/// vanishing right side (the case at half-integer/integer gamma with
/// lambda = 0) is benign and fixes b_k = 0.
struct FrobeniusSeed {
    double rho = 0;
    double gamma = 0;
    Cplx lambda;
    double s_start = 0;
    std::vector<Cplx> coeffs;
    Cplx value;       // H(s_start)
    Cplx derivative;  // H'(s_start)
    double truncation_estimate = 0;

    Cplx value_at(double s) const;
    Cplx derivative_at(double s) const;
};

FrobeniusSeed frobenius_seed(double rho, double gamma, Cplx lambda, double s_start = 1e-2,
                             int K = 24);

/// Max relative drift of the pairwise Wronskian a b' - a' b over the common
/// grid, measured against its value at the middle node. Falls back to the
/// absolute drift when the mid value vanishes.
double wronskian_drift(const SolutionCurve& a, const SolutionCurve& b);

/// Degree-4 Taylor step from exact nodal data using the equation itself:
/// psi(v0+h) from (psi, psi', q, q', q''). Used by finite-difference residual
/// probes, where Hermite interpolation error divided by h^2 would dominate.
void taylor_step(const CoeffFn& q, double v0, Cplx y, Cplx dy, double h, Cplx& y_out,
                 Cplx& dy_out);

} // namespace fpspec

#endif
