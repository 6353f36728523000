#include "fpspec/diffusion.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fpspec/detail/quad.hpp"
#include "fpspec/detail/tridiag.hpp"

namespace fpspec {

DensityProfile evolve_rho_hat(const DensityProfile& initial, double dt, double kappa,
                              double alpha) {
    if (!(kappa > 0))
        throw std::invalid_argument("evolve_rho_hat: kappa must be positive");
    if (!(alpha > 2.0 / 3.0 && alpha < 2.0))
        throw std::invalid_argument("evolve_rho_hat: alpha outside (2/3, 2)");
    if (initial.xi_grid.size() != initial.rho_hat.size())
        throw std::invalid_argument("evolve_rho_hat: grid/sample size mismatch");

    DensityProfile out = initial;
    out.t = initial.t + dt;
    for (std::size_t j = 0; j < out.rho_hat.size(); ++j)
        out.rho_hat[j] *= std::exp(-kappa * std::pow(std::abs(out.xi_grid[j]), alpha) * dt);
    return out;
}

double frac_laplacian_pv(const std::function<double(double)>& rho, double x, double alpha,
                         double r_cut) {
    if (!(alpha > 0 && alpha < 2))
        throw std::invalid_argument("frac_laplacian_pv: alpha outside (0, 2)");
    if (!(r_cut > 1.0))
        throw std::invalid_argument("frac_laplacian_pv: r_cut too small");

    const double f0 = rho(x);
    const auto sym = [&](double r) { return 2.0 * f0 - rho(x + r) - rho(x - r); };

    // below r0 the second difference is pure cancellation; substitute its Taylor
    // expansion, with the two derivatives taken by five-point differences
    const double r0 = 1e-2;
    const double h = 2e-3;
    const double fp1 = rho(x + h), fm1 = rho(x - h);
    const double fp2 = rho(x + 2 * h), fm2 = rho(x - 2 * h);
    const double d2 = (-fp2 + 16 * fp1 - 30 * f0 + 16 * fm1 - fm2) / (12 * h * h);
    const double d4 = (fp2 - 4 * fp1 + 6 * f0 - 4 * fm1 + fm2) / (h * h * h * h);
    const double inner = -d2 * std::pow(r0, 2 - alpha) / (2 - alpha)
                         - d4 * std::pow(r0, 4 - alpha) / (12 * (4 - alpha));

    /* The difference sym(r) carries ~1e-16 absolute rounding noise, which the
       r^(-1-alpha) factor inflates into a noise density spanning many decades,
       so error-driven bisection would churn on it. Fixed geometric cells
       resolve the power-law profile to the rounding floor instead. */
    const auto graded = [](const auto& f, double a, double b, double ratio) {
        double acc = 0, lo = a;
        while (lo < b) {
            const double hi = std::min(lo * ratio, b);
            double r, e;
            detail::gk15_panel(f, lo, hi, r, e);
            acc += r;
            lo = hi;
        }
        return acc;
    };
    const double mid =
        graded([&](double r) { return sym(r) * std::pow(r, -1 - alpha); }, r0, r_cut, 1.4);

    // r > r_cut through u = r_cut / r, so a constant profile integrates to exactly
    // zero instead of leaning on a decay assumption
    const double tail = std::pow(r_cut, -alpha)
                        * graded([&](double u) { return sym(r_cut / u) * std::pow(u, alpha - 1); },
                                 1e-10, 1.0, 2.0);

    const double c_alpha = std::pow(2.0, alpha) * std::tgamma((1 + alpha) / 2)
                           * std::sin(M_PI * alpha / 2) * std::tgamma(1 + alpha / 2)
                           / std::pow(M_PI, 1.5);
    return c_alpha * (inner + mid + tail);
}

ModeDecay kinetic_mode_decay(const ModelParams& params, double eta, double horizon,
                             std::size_t steps) {
    if (!(horizon > 0))
        throw std::invalid_argument("kinetic_mode_decay: horizon must be positive");

    double v_cut = 25.0;
    if (eta != 0)
        v_cut = std::max(4.0 / std::cbrt(std::abs(eta)), 25.0);
    int n = std::max(4000, static_cast<int>(std::ceil(100.0 * v_cut)));
    if (n % 2)
        ++n;

    const auto ground_pair = [&](int nn, detail::Tridiag& a_out, std::vector<Cplx>& vec) {
        a_out = detail::discretize(eta, params, v_cut, nn);
        detail::Tridiag lu = a_out;
        lu.factor();
        vec.resize(a_out.diag.size());
        for (std::size_t j = 0; j < vec.size(); ++j)
            vec[j] = equilibrium(params, a_out.vgrid[j]);
        int it = 0;
        return detail::inverse_power(lu, vec, nullptr, 60, it);
    };

    detail::Tridiag a;
    std::vector<Cplx> ground;
    Cplx mu_d = ground_pair(n, a, ground);

    /* The h^2 truncation of the grid eigenvalue is roughly 0.06 h^2 in absolute
       terms, while mu shrinks with eta, so the default grid can be too coarse
       at small eta. Re-mesh so the truncation stays under ~0.4% of mu; below
       mu ~ 1e-5 the wall at v_cut dominates instead and refining h buys nothing. */
    if (std::abs(mu_d) > 1e-5) {
        const double h_req = std::sqrt(4e-3 * std::abs(mu_d) / 0.06);
        int n_req = static_cast<int>(std::ceil(2.0 * v_cut / h_req));
        n_req = std::min(n_req, 60000);
        if (n_req % 2)
            ++n_req;
        if (n_req > n) {
            n = n_req;
            mu_d = ground_pair(n, a, ground);
        }
    }
    const double h = 2.0 * v_cut / n;
    const std::size_t m = a.diag.size();

    if (steps == 0) {
        const double guess = horizon * std::abs(mu_d) / 2.5e-3;
        steps = static_cast<std::size_t>(std::clamp(guess, 200.0, 20000.0));
    }
    const double dt = horizon / static_cast<double>(steps);

    detail::Tridiag stepper = a;
    for (Cplx& d : stepper.diag)
        d = 1.0 + dt * d;
    stepper.off = dt * a.off;
    stepper.factor();

    std::vector<Cplx> g(m);
    for (std::size_t j = 0; j < m; ++j)
        g[j] = equilibrium(params, a.vgrid[j]);

    const auto project = [&]() {
        Cplx p = 0;
        for (std::size_t j = 0; j < m; ++j)
            p += g[j] * ground[j];
        return h * p;
    };

    std::vector<double> tau, logp;
    tau.reserve(steps + 1);
    logp.reserve(steps + 1);
    tau.push_back(0);
    logp.push_back(std::log(std::abs(project())));
    for (std::size_t k = 1; k <= steps; ++k) {
        stepper.solve(g);
        tau.push_back(dt * static_cast<double>(k));
        logp.push_back(std::log(std::abs(project())));
    }

    // regression over the final half of the horizon
    const std::size_t lo = steps / 2;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double cnt = static_cast<double>(steps + 1 - lo);
    for (std::size_t k = lo; k <= steps; ++k) {
        sx += tau[k];
        sy += logp[k];
        sxx += tau[k] * tau[k];
        sxy += tau[k] * logp[k];
    }
    const double slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
    const double icept = (sy - slope * sx) / cnt;
    double rss = 0;
    for (std::size_t k = lo; k <= steps; ++k) {
        const double d = logp[k] - (icept + slope * tau[k]);
        rss += d * d;
    }

    ModeDecay out;
    out.rate = -slope;
    out.fit_residual = std::sqrt(rss / cnt);
    out.mu_discrete = mu_d.real();
    out.dt = dt;
    out.steps = steps;
    if (out.fit_residual > 1e-5 * (1.0 + std::abs(slope) * horizon))
        throw std::runtime_error("kinetic_mode_decay: horizon too short, decay not exponential");
    return out;
}

} // namespace fpspec
