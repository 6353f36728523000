#include "fpspec/kappa.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fpspec/airy.hpp"
#include "fpspec/detail/quad.hpp"

namespace fpspec {

namespace {

CoeffFn h0_coeff(double gamma) {
    const double gg = gamma * (gamma + 1.0);
    CoeffFn c;
    c.q = [gg](double s) { return Cplx(gg / (s * s), s); };
    c.dq = [gg](double s) { return Cplx(-2.0 * gg / (s * s * s), 1.0); };
    c.d2q = [gg](double s) { return Cplx(6.0 * gg / (s * s * s * s), 0.0); };
    return c;
}

Cplx series_value(const std::vector<Cplx>& coeffs, double rho, double s) {
    Cplx sum = 0;
    double p = std::pow(s, rho);
    for (const Cplx& c : coeffs) {
        sum += c * p;
        p *= s;
    }
    return sum;
}

/* int_0^s0 s^(1-gamma) * s^(rho+k) ds summed over the series, term by term.
   Coefficients that are exactly zero are skipped before the denominator
   check, so the benign resonances (gamma = 3/2, 2 on the rho = -gamma
   branch) never divide by zero. */
Cplx series_integral(const std::vector<Cplx>& coeffs, double rho, double gamma, double s0,
                     double& last_term) {
    Cplx sum = 0;
    last_term = 0;
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        if (std::abs(coeffs[k]) == 0.0)
            continue;
        const double expo = 2.0 - gamma + rho + static_cast<double>(k);
        if (std::abs(expo) < 1e-9)
            throw std::runtime_error("compute_kappa: resonant series exponent, integral diverges");
        const Cplx term = coeffs[k] * std::pow(s0, expo) / expo;
        sum += term;
        last_term = std::abs(term);
    }
    return sum;
}

} // namespace

Cplx H0Solution::eval(double s) const {
    if (s <= 0)
        throw std::domain_error("H0Solution::eval: s must be positive");
    if (s < s_start)
        return series_value(series_particular, -gamma, s) +
               a_mix * series_value(series_homogeneous, gamma + 1.0, s);
    Cplx val, der;
    curve.eval(s, val, der);
    return val;
}

H0Solution solve_h0(const ModelParams& params, double s_start, double s_max) {
    if (!(s_start > 0) || !(s_max > s_start + 2.0))
        throw std::invalid_argument("solve_h0: need 0 < s_start and s_max well above it");

    const double g = params.gamma;
    const CoeffFn coeff = h0_coeff(g);

    const FrobeniusSeed fp = frobenius_seed(-g, g, Cplx(0, 0), s_start, 24);
    const FrobeniusSeed fh = frobenius_seed(g + 1.0, g, Cplx(0, 0), s_start, 24);

    // Both branches are integrated outward, the direction in which the
    // oscillatory-growing component dominates, so each curve is accurate
    // relative to its own size.
    const double tol = 1e-12, h_max = 0.1;
    const SolutionCurve hp = integrate(coeff, s_start, s_max, fp.value, fp.derivative, tol, h_max);
    const SolutionCurve hh = integrate(coeff, s_start, s_max, fh.value, fh.derivative, tol, h_max);

    const auto [ca_p, cb_p] =
        decompose_in_airy_basis(hp.value.back(), hp.derivative.back(), s_max, Cplx(0, 0));
    const auto [ca_h, cb_h] =
        decompose_in_airy_basis(hh.value.back(), hh.derivative.back(), s_max, Cplx(0, 0));
    (void)ca_p;
    (void)ca_h;
    if (std::abs(cb_h) == 0.0)
        throw std::runtime_error("solve_h0: homogeneous branch has no growing component");

    H0Solution out;
    out.s_start = s_start;
    out.s_max = s_max;
    out.s_fit = std::min(7.0, s_max - 1.0);
    out.a_mix = -cb_p / cb_h;
    out.series_particular = fp.coeffs;
    out.series_homogeneous = fh.coeffs;
    out.gamma = g;

    // Superpose nodal values on the particular grid. The growing components
    // cancel pointwise, so the relative accuracy of the sum degrades like
    // tol * exp(2 chi(s)) with chi = (sqrt(2)/3) s^(3/2); past s ~ 9 the
    // combined values are noise. Everything downstream therefore reads the
    // curve only up to s_fit and switches to the decaying-ray coefficient.
    out.curve.grid = hp.grid;
    out.curve.value.resize(hp.grid.size());
    out.curve.derivative.resize(hp.grid.size());
    out.curve.second.resize(hp.grid.size());
    for (std::size_t i = 0; i < hp.grid.size(); ++i) {
        Cplx vh, dh;
        hh.eval(hp.grid[i], vh, dh);
        out.curve.value[i] = hp.value[i] + out.a_mix * vh;
        out.curve.derivative[i] = hp.derivative[i] + out.a_mix * dh;
        out.curve.second[i] = coeff.q(hp.grid[i]) * out.curve.value[i];
    }

    Cplx vf, df;
    out.curve.eval(out.s_fit, vf, df);
    const auto [fa, fb] = decompose_in_airy_basis(vf, df, out.s_fit, Cplx(0, 0));
    out.far_a = fa;
    out.far_b = fb;
    return out;
}

KappaReport compute_kappa(const H0Solution& h0, const ModelParams& params) {
    const double g = params.gamma;
    KappaReport rep;

    double tp = 0, th = 0;
    const Cplx sp = series_integral(h0.series_particular, -g, g, h0.s_start, tp);
    const Cplx sh = series_integral(h0.series_homogeneous, g + 1.0, g, h0.s_start, th);
    rep.piece_series = std::imag(sp + h0.a_mix * sh);
    rep.err_series = tp + std::abs(h0.a_mix) * th;

    // [s_start, s_fit] cell by cell on the curve; halving every cell gives
    // the quadrature error estimate.
    const auto& grid = h0.curve.grid;
    auto integrand = [&](double s) {
        Cplx val, der;
        h0.curve.eval(s, val, der);
        return std::pow(s, 1.0 - g) * std::imag(val);
    };
    auto mid_integral = [&](int split) {
        double total = 0;
        for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
            const double a = grid[i];
            const double b = std::min(grid[i + 1], h0.s_fit);
            if (b <= a)
                break;
            const double step = (b - a) / split;
            for (int j = 0; j < split; ++j)
                total += detail::gauss4(integrand, a + j * step, a + (j + 1) * step);
        }
        return total;
    };
    rep.piece_mid = mid_integral(1);
    rep.err_mid = std::abs(mid_integral(2) - rep.piece_mid);

    // Beyond s_fit the solution is far_a times the decaying rotated ray.
    const RotatedPair pair(Cplx(0, 0));
    auto far_integrand = [&](double s) {
        return std::pow(s, 1.0 - g) * std::imag(h0.far_a * pair.a(s).val);
    };
    const double s_hi = h0.s_fit + 13.0;
    rep.piece_far = detail::adaptive_gk(far_integrand, h0.s_fit, s_hi, 1e-13);
    rep.err_far = std::abs(far_integrand(s_hi)) / (0.7071 * std::sqrt(s_hi));

    const double total = rep.piece_series + rep.piece_mid + rep.piece_far;
    rep.kappa = -2.0 * params.c_beta_sq * total;
    return rep;
}

ScanFit kappa_from_scan(const std::vector<EigenResult>& points, const ModelParams& params) {
    std::vector<double> x, y;
    for (const EigenResult& p : points) {
        if (!p.ok || !(p.eta > 0) || !(p.mu.real() > 0))
            continue;
        x.push_back(std::log(p.eta));
        y.push_back(std::log(p.mu.real()));
    }
    if (x.size() < 5)
        throw std::invalid_argument("kappa_from_scan: need at least five valid points");
    const auto [xmin, xmax] = std::minmax_element(x.begin(), x.end());
    if (*xmax - *xmin < 1.5 * std::log(10.0))
        throw std::invalid_argument("kappa_from_scan: need at least 1.5 decades of eta");

    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }

    ScanFit fit;
    fit.free_slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    fit.kappa = std::exp((sy - params.alpha * sx) / n);
    fit.in_regime = std::abs(fit.free_slope - params.alpha) <= 0.05;
    return fit;
}

} // namespace fpspec
