#include "fpspec/basis0.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fpspec/detail/quad.hpp"

namespace fpspec {

namespace {

/// Even/odd mirror of a half-line curve computed on [0, v_max]; sign = +1
/// mirrors the value evenly (derivative flips), sign = -1 the other way.
SolutionCurve mirror_curve(const SolutionCurve& half, int sign) {
    const std::size_t n = half.grid.size();
    SolutionCurve full;
    full.grid.resize(2 * n - 1);
    full.value.resize(2 * n - 1);
    full.derivative.resize(2 * n - 1);
    full.second.resize(2 * n - 1);
    const double s = sign;
    for (std::size_t i = 0; i < n; ++i) {
        full.grid[n - 1 + i] = half.grid[i];
        full.value[n - 1 + i] = half.value[i];
        full.derivative[n - 1 + i] = half.derivative[i];
        full.second[n - 1 + i] = half.second[i];
        full.grid[n - 1 - i] = -half.grid[i];
        full.value[n - 1 - i] = s * half.value[i];
        full.derivative[n - 1 - i] = -s * half.derivative[i];
        full.second[n - 1 - i] = s * half.second[i];
    }
    full.meta = half.meta;
    return full;
}

/// Least-squares fit of y ~ a + b v^-2 over the nodes with v in [v_lo, v_hi];
/// returns a (the limit constant).
double fit_tail_constant(const SolutionCurve& c, double gp1, double v_lo, double v_hi) {
    double s00 = 0, s01 = 0, s11 = 0, r0 = 0, r1 = 0;
    for (std::size_t i = 0; i < c.grid.size(); ++i) {
        const double v = c.grid[i];
        if (v < v_lo || v > v_hi)
            continue;
        const double x = 1.0 / (v * v);
        const double y = c.value[i].real() / std::pow(v, gp1);
        s00 += 1;
        s01 += x;
        s11 += x * x;
        r0 += y;
        r1 += x * y;
    }
    const double det = s00 * s11 - s01 * s01;
    if (s00 < 4 || std::abs(det) < 1e-14 * s00 * s11)
        throw std::runtime_error("basis0: too few nodes for the tail fit");
    return (s11 * r0 - s01 * r1) / det;
}

} // namespace

double Basis0::inv_psi_sq_tail(double v) const {
    if (v >= psi.grid.back()) {
        const double pe = psi.value.back().real();
        const double g21 = 2 * params.gamma + 1;
        /* psi ~ psi(v_max) (v/v_max)^(gamma+1) beyond the grid */
        return (v_max / (pe * pe * g21)) * std::pow(v / v_max, -g21);
    }
    /* norm - tail(-v) would also work; integrate down from the right end */
    const std::size_t i = psi.cell_index(v);
    double acc = 0;
    for (std::size_t j = i + 1; j + 1 < psi.grid.size(); ++j) {
        acc += detail::gauss4([this](double w) { return 1.0 / std::norm(psi.eval_value(w)); },
                              psi.grid[j], psi.grid[j + 1]);
    }
    acc += detail::gauss4([this](double w) { return 1.0 / std::norm(psi.eval_value(w)); }, v,
                          psi.grid[i + 1]);
    const double pe = psi.value.back().real();
    return acc + v_max / (pe * pe * (2 * params.gamma + 1));
}

CoeffFn Basis0::coeff() const {
    const double g = params.gamma;
    const double gg = g * (g + 1);
    CoeffFn cf;
    cf.q = [gg](double v) { return Cplx(gg / (1 + v * v)); };
    cf.dq = [gg](double v) {
        const double u = 1 + v * v;
        return Cplx(-2 * gg * v / (u * u));
    };
    cf.d2q = [gg](double v) {
        const double u = 1 + v * v;
        return Cplx(gg * (6 * v * v - 2) / (u * u * u));
    };
    return cf;
}

green::KernelData Basis0::kernel() const {
    green::KernelData k;
    k.psi1 = &psi1;
    k.psi2 = &psi2;
    k.coeff = coeff();
    k.power_tails = true;
    k.gamma = params.gamma;
    return k;
}

SolutionCurve solve_psi(const ModelParams& params, double v_max) {
    if (v_max < 50)
        throw std::invalid_argument("solve_psi: v_max must be at least 50");
    const double gg = params.gamma * (params.gamma + 1);
    CoeffFn cf;
    cf.q = [gg](double v) { return Cplx(gg / (1 + v * v)); };
    auto half = integrate(cf, 0.0, v_max, Cplx(1), Cplx(0), params.tol.ode);
    for (const Cplx& y : half.value)
        if (!(y.real() > 0))
            throw std::runtime_error("solve_psi: positivity lost on the grid");
    return mirror_curve(half, +1);
}

Basis0 build_basis(const ModelParams& params, SolutionCurve psi) {
    Basis0 b;
    b.params = params;
    b.v_max = psi.grid.back();
    const double g = params.gamma;
    const double g21 = 2 * g + 1;

    /* asymptotic constant of psi, with a stability check across two windows */
    const double c_outer = fit_tail_constant(psi, g + 1, b.v_max / 10, b.v_max);
    const double c_inner = fit_tail_constant(psi, g + 1, b.v_max / 4, b.v_max);
    if (!(c_outer > 0) || std::abs(c_outer - c_inner) > 1e-3 * c_outer)
        throw std::runtime_error("build_basis: asymptotic constant of psi not stabilized");
    b.c = c_outer;

    /* Per-cell integrals of psi^-2, then prefix sums for I2 and suffix sums
       for I1: both stay cancellation-free at their small end, which matters
       because interpolation differentiates the nodal jitter by 1/h. */
    const std::size_t n = psi.grid.size();
    std::vector<double> cell(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i)
        cell[i] = detail::gauss4(
            [&psi](double w) {
                const double pv = psi.eval_value(w).real();
                return 1.0 / (pv * pv);
            },
            psi.grid[i], psi.grid[i + 1]);
    const double pe = psi.value.back().real();
    const double tail = b.v_max / (pe * pe * g21);
    std::vector<double> i1v(n), i2v(n);
    i1v[n - 1] = tail;
    for (std::size_t i = n - 1; i-- > 0;)
        i1v[i] = i1v[i + 1] + cell[i];
    i2v[0] = tail;
    for (std::size_t i = 1; i < n; ++i)
        i2v[i] = i2v[i - 1] + cell[i - 1];
    b.norm = i1v[0] + tail;  // adds the left tail, mirroring I2's start
    const double rn = std::sqrt(b.norm);

    SolutionCurve p1, p2;
    p1.grid = p2.grid = psi.grid;
    p1.value.resize(n);
    p1.derivative.resize(n);
    p1.second.resize(n);
    p2.value.resize(n);
    p2.derivative.resize(n);
    p2.second.resize(n);
    const double gg = g * (g + 1);
    for (std::size_t i = 0; i < n; ++i) {
        const double ps = psi.value[i].real(), dps = psi.derivative[i].real();
        const double i1 = i1v[i];
        const double i2 = i2v[i];
        p1.value[i] = ps * i1 / rn;
        p1.derivative[i] = (dps * i1 - 1.0 / ps) / rn;
        p2.value[i] = ps * i2 / rn;
        p2.derivative[i] = (dps * i2 + 1.0 / ps) / rn;
        const double q = gg / (1 + psi.grid[i] * psi.grid[i]);
        p1.second[i] = q * p1.value[i];
        p2.second[i] = q * p2.value[i];
    }
    b.psi1 = std::move(p1);
    b.psi2 = std::move(p2);
    b.c1 = 1.0 / (b.c * g21 * rn);
    b.c2 = b.c * rn;
    b.z_curve = companion_z(params, b.v_max);
    b.psi = std::move(psi);
    return b;
}

green::ApplyResult apply_t0(const std::function<Cplx(double)>& f, const Basis0& basis) {
    return green::apply(basis.kernel(), f);
}

double kernel_bound_check(const Basis0& basis, double delta) {
    if (!(delta > 0 && delta < 2))
        throw std::invalid_argument("kernel_bound_check: delta must lie in (0,2)");
    const double g = basis.params.gamma;
    auto p1 = [g, delta](double v) { return std::pow(1 + v * v, -(g + 2 + delta) / 2); };
    auto p2 = [g](double v) { return std::pow(1 + v * v, -g / 2); };
    return green::kernel_bound(basis.kernel(), p1, p2);
}

SolutionCurve companion_z(const ModelParams& params, double v_max) {
    const double g = params.gamma;
    const double h = 0.05;
    const std::size_t n = static_cast<std::size_t>(std::ceil(v_max / h)) + 1;
    SolutionCurve half;
    half.grid.resize(n);
    half.value.resize(n);
    half.derivative.resize(n);
    half.second.resize(n);
    auto minv2 = [g](double v) { return std::pow(1 + v * v, g); };
    double cum = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double v = std::min(i * h, v_max);
        if (i > 0)
            cum += detail::gauss4(minv2, half.grid[i - 1], v);
        const double u = 1 + v * v;
        const double m = std::pow(u, -g / 2);
        const double dm = -g * v * std::pow(u, -g / 2 - 1);
        const double w = (g * (g + 2) * v * v / u - g) / u;  // full potential W
        half.grid[i] = v;
        half.value[i] = m * cum;
        half.derivative[i] = dm * cum + 1.0 / m;
        half.second[i] = w * m * cum;
    }
    return mirror_curve(half, -1);
}

} // namespace fpspec
