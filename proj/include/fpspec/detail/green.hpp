#ifndef FPSPEC_DETAIL_GREEN_HPP
#define FPSPEC_DETAIL_GREEN_HPP

#include <functional>
#include <vector>

#include "fpspec/ode.hpp"

namespace fpspec::green {

/// Kernel factor pair normalized to W{psi1, psi2} = 1, psi1 decaying toward
/// +inf, psi2 toward -inf, both sampled on one common grid, plus the
/// coefficient of the underlying equation psi'' = q psi (with dq, d2q set,
/// needed by the residual probes).
struct KernelData {
    const SolutionCurve* psi1 = nullptr;
    const SolutionCurve* psi2 = nullptr;
    CoeffFn coeff;
    bool power_tails = false;  // extend integrals past the grid ends assuming
                               // psi1 ~ v^-gamma, psi2 mirrored (eta = 0 case)
    double gamma = 0;
};

struct ApplyResult {
    SolutionCurve curve;        // (T f)(v) on the kernel grid
    double residual = 0;        // max |L[Tf] - f| over interior probe nodes
    double tail_fraction = 0;   // |added tails| / max |cumulative|, diagnostic
};

/// Cumulative cell-by-cell Gauss-4 integrals of integrand(v, psi(v)) along
/// the curve; out[i] = integral from grid.front() to grid[i].
std::vector<Cplx> cumulative_on_curve(const SolutionCurve& psi,
                                      const std::function<Cplx(double, Cplx)>& integrand);

/// Decay exponent p of |f| ~ v^-p estimated from samples at v_end/2 and
/// v_end; returns 0 when |f(v_end)| is negligible (no tail needed).
double tail_exponent(const std::function<double(double)>& absf, double v_end);

/// T f = psi1(v) int_{-inf}^v psi2 f + psi2(v) int_v^{+inf} psi1 f, by
/// product quadrature on the common grid; the residual is measured by
/// re-applying the operator with centered differences built from
/// Taylor-stepped kernel factors (interpolation-free).
ApplyResult apply(const KernelData& kernel, const std::function<Cplx(double)>& f);

/// sup over grid nodes of int |K(v,w)| p1(w) dw / p2(v).
double kernel_bound(const KernelData& kernel, const std::function<double(double)>& p1,
                    const std::function<double(double)>& p2);

} // namespace fpspec::green

#endif
