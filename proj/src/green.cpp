#include "fpspec/detail/green.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fpspec/detail/quad.hpp"

namespace fpspec::green {

namespace {

const double kProbeStep = 5e-4;

/// Gauss-3 integral of integrand(w, psi(w)) over [a, b] with psi obtained by
/// Taylor-stepping from exact nodal data at v0 (stays interpolation-free).
Cplx local_piece(const CoeffFn& coeff, double v0, Cplx y, Cplx dy, double a, double b,
                 const std::function<Cplx(double)>& f) {
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    Cplx acc = 0;
    for (int g = 0; g < 3; ++g) {
        const double w = mid + half * detail::gl3_x[g];
        Cplx pv, pd;
        taylor_step(coeff, v0, y, dy, w - v0, pv, pd);
        acc += detail::gl3_w[g] * pv * f(w);
    }
    return acc * half;
}

} // namespace

std::vector<Cplx> cumulative_on_curve(const SolutionCurve& psi,
                                      const std::function<Cplx(double, Cplx)>& integrand) {
    const std::size_t n = psi.grid.size();
    std::vector<Cplx> out(n, Cplx(0));
    auto fn = [&psi, &integrand](double v) {
        Cplx pv, pd;
        psi.eval(v, pv, pd);
        return integrand(v, pv);
    };
    for (std::size_t i = 0; i + 1 < n; ++i)
        out[i + 1] = out[i] + detail::gauss4(fn, psi.grid[i], psi.grid[i + 1]);
    return out;
}

double tail_exponent(const std::function<double(double)>& absf, double v_end) {
    const double fe = absf(v_end);
    if (!(fe > 1e-280))
        return 0;
    const double fh = absf(0.5 * v_end);
    if (!(fh > fe))
        throw std::invalid_argument("green: source does not decay toward the grid end");
    return std::log(fh / fe) / std::log(2.0);
}

ApplyResult apply(const KernelData& kernel, const std::function<Cplx(double)>& f) {
    const SolutionCurve& p1 = *kernel.psi1;
    const SolutionCurve& p2 = *kernel.psi2;
    if (p1.grid.size() != p2.grid.size() || p1.grid.front() != p2.grid.front() ||
        p1.grid.back() != p2.grid.back())
        throw std::invalid_argument("green::apply: kernel factors must share a grid");
    const std::size_t n = p1.grid.size();
    const double vl = p1.grid.front(), vr = p1.grid.back();

    Cplx tail_a = 0, tail_b = 0;
    if (kernel.power_tails) {
        auto absf = [&f](double v) { return std::abs(f(v)); };
        const double pr = tail_exponent(absf, vr);
        const double pl = tail_exponent([&absf](double v) { return absf(-v); }, -vl);
        if ((pr > 0 && pr <= kernel.gamma + 2) || (pl > 0 && pl <= kernel.gamma + 2))
            throw std::invalid_argument(
                "green::apply: source decay exponent must exceed gamma + 2");
        if (pr > 0)
            tail_b = p1.value.back() * f(vr) * vr / (kernel.gamma + pr - 1);
        if (pl > 0)
            tail_a = p2.value.front() * f(vl) * (-vl) / (kernel.gamma + pl - 1);
    }

    /* av[i] = int_{-inf}^{v_i} psi2 f as a prefix sum, bv[i] = int_{v_i}^{inf}
       psi1 f as a suffix sum; summing each from its own small end avoids
       cancellation jitter that interpolation would amplify by 1/h. */
    std::vector<Cplx> cell_a(n - 1), cell_b(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        cell_a[i] = detail::gauss4(
            [&p2, &f](double v) { return p2.eval_value(v) * f(v); }, p1.grid[i],
            p1.grid[i + 1]);
        cell_b[i] = detail::gauss4(
            [&p1, &f](double v) { return p1.eval_value(v) * f(v); }, p1.grid[i],
            p1.grid[i + 1]);
    }

    ApplyResult out;
    out.curve.grid = p1.grid;
    out.curve.value.resize(n);
    out.curve.derivative.resize(n);
    out.curve.second.resize(n);
    std::vector<Cplx> av(n), bv(n), fv(n);
    av[0] = tail_a;
    for (std::size_t i = 1; i < n; ++i)
        av[i] = av[i - 1] + cell_a[i - 1];
    bv[n - 1] = tail_b;
    for (std::size_t i = n - 1; i-- > 0;)
        bv[i] = bv[i + 1] + cell_b[i];
    double cum_scale = 0;
    for (std::size_t i = 0; i < n; ++i) {
        fv[i] = f(p1.grid[i]);
        out.curve.value[i] = p1.value[i] * av[i] + p2.value[i] * bv[i];
        out.curve.derivative[i] = p1.derivative[i] * av[i] + p2.derivative[i] * bv[i];
        out.curve.second[i] = kernel.coeff.q(p1.grid[i]) * out.curve.value[i] - fv[i];
        cum_scale = std::max(cum_scale, std::max(std::abs(av[i]), std::abs(bv[i])));
    }
    out.tail_fraction = (std::abs(tail_a) + std::abs(tail_b)) / std::max(cum_scale, 1e-300);

    /* interior residual probes with Taylor-stepped kernel factors */
    const double h = kProbeStep;
    const std::size_t stride = std::max<std::size_t>(1, n / 600);
    for (std::size_t i = 1; i + 1 < n; i += stride) {
        const double v = p1.grid[i];
        Cplx p1p, d1p, p1m, d1m, p2p, d2p, p2m, d2m;
        taylor_step(kernel.coeff, v, p1.value[i], p1.derivative[i], h, p1p, d1p);
        taylor_step(kernel.coeff, v, p1.value[i], p1.derivative[i], -h, p1m, d1m);
        taylor_step(kernel.coeff, v, p2.value[i], p2.derivative[i], h, p2p, d2p);
        taylor_step(kernel.coeff, v, p2.value[i], p2.derivative[i], -h, p2m, d2m);
        const Cplx da_p = local_piece(kernel.coeff, v, p2.value[i], p2.derivative[i], v, v + h, f);
        const Cplx da_m = local_piece(kernel.coeff, v, p2.value[i], p2.derivative[i], v - h, v, f);
        const Cplx db_p = local_piece(kernel.coeff, v, p1.value[i], p1.derivative[i], v, v + h, f);
        const Cplx db_m = local_piece(kernel.coeff, v, p1.value[i], p1.derivative[i], v - h, v, f);
        const Cplx tf_p = p1p * (av[i] + da_p) + p2p * (bv[i] - db_p);
        const Cplx tf_m = p1m * (av[i] - da_m) + p2m * (bv[i] + db_m);
        const Cplx d2 = (tf_p - 2.0 * out.curve.value[i] + tf_m) / (h * h);
        const Cplx res = -d2 + kernel.coeff.q(v) * out.curve.value[i] - fv[i];
        out.residual = std::max(out.residual, std::abs(res));
    }
    return out;
}

double kernel_bound(const KernelData& kernel, const std::function<double(double)>& p1w,
                    const std::function<double(double)>& p2w) {
    const SolutionCurve& p1 = *kernel.psi1;
    const SolutionCurve& p2 = *kernel.psi2;
    const std::size_t n = p1.grid.size();
    const double vl = p1.grid.front(), vr = p1.grid.back();

    auto cum_l = cumulative_on_curve(
        p2, [&p1w](double v, Cplx pv) { return Cplx(std::abs(pv) * p1w(v)); });
    auto cum_r = cumulative_on_curve(
        p1, [&p1w](double v, Cplx pv) { return Cplx(std::abs(pv) * p1w(v)); });

    double tail_l = 0, tail_r = 0;
    if (kernel.power_tails) {
        const double pr = tail_exponent(p1w, vr);
        const double pl = tail_exponent([&p1w](double v) { return p1w(-v); }, -vl);
        if (pr > kernel.gamma + 1)
            tail_r = std::abs(p1.value.back()) * p1w(vr) * vr / (kernel.gamma + pr - 1);
        if (pl > kernel.gamma + 1)
            tail_l = std::abs(p2.value.front()) * p1w(vl) * (-vl) / (kernel.gamma + pl - 1);
    }

    const double total_r = cum_r.back().real();
    double bound = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double left = cum_l[i].real() + tail_l;
        const double right = total_r - cum_r[i].real() + tail_r;
        const double num = std::abs(p1.value[i]) * left + std::abs(p2.value[i]) * right;
        bound = std::max(bound, num / p2w(p1.grid[i]));
    }
    return bound;
}

} // namespace fpspec::green
