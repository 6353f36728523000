#include "fpspec/model.hpp"
#include "fpspec/detail/quad.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fpspec {

double c_beta_squared(double gamma) {
    if (!(gamma > 0.5))
        throw std::invalid_argument("c_beta_squared: integral diverges for gamma <= 1/2");
    const double vstar = 50.0;
    auto f = [gamma](double v) { return std::pow(1.0 + v * v, -gamma); };
    const double core = 2.0 * detail::adaptive_gk(f, 0.0, vstar, 1e-13);

    /* tail: expand (1+v^2)^(-gamma) = v^(-2g) * sum_k binom(-g,k) v^(-2k) */
    double tail = 0.0, coef = 1.0;
    for (int k = 0; k < 30; ++k) {
        const double term = coef * std::pow(vstar, 1.0 - 2.0 * gamma - 2.0 * k) /
                            (2.0 * gamma + 2.0 * k - 1.0);
        tail += term;
        if (std::abs(term) < 1e-18 * (core + tail))
            break;
        coef *= -(gamma + k) / (k + 1.0);
    }
    return 1.0 / (core + 2.0 * tail);
}

ModelParams make_params(double beta) {
    if (!(beta > 1.0) || !(beta < 5.0))
        throw std::invalid_argument("make_params: beta must lie in (1,5), got " + std::to_string(beta));
    if (beta == 2.0)
        throw std::invalid_argument("make_params: beta = 2 is excluded (logarithmic resonance)");
    ModelParams p;
    p.beta = beta;
    p.gamma = beta / 2.0;
    p.alpha = (beta + 1.0) / 3.0;
    p.c_beta_sq = c_beta_squared(p.gamma);
    return p;
}

double equilibrium(const ModelParams& p, double v) {
    return std::pow(1.0 + v * v, -p.gamma / 2.0);
}

PotentialEval potentials(const ModelParams& p, double v) {
    const double g = p.gamma;
    const double u = 1.0 + v * v;
    PotentialEval e;
    e.v = v;
    e.m = std::pow(u, -g / 2.0);
    e.w = (g * (g + 1.0) * v * v - g) / (u * u);
    e.w_tilde = g * (g + 1.0) / u;
    e.v_split = g * (g + 2.0) / (u * u);
    return e;
}

} // namespace fpspec
