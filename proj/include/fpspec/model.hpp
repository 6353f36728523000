#ifndef FPSPEC_MODEL_HPP
#define FPSPEC_MODEL_HPP

#include <complex>
#include <cstddef>

namespace fpspec {

using Cplx = std::complex<double>;

/// Numerical tolerances shared across the library.
struct ToleranceSet {
    double scalar_rel = 1e-10;   // relative tolerance for scalar identities
    double ode = 1e-10;          // per-step ODE tolerance
    double quad = 1e-11;         // adaptive quadrature tolerance
};

/// Model constants derived from the tail exponent beta.
struct ModelParams {
    double beta = 0;        // tail exponent of the equilibrium, beta in (1,5)\{2}
    double gamma = 0;       // gamma = beta/2
    double alpha = 0;       // anomalous exponent alpha = (beta+1)/3 = (2*gamma+1)/3
    double c_beta_sq = 0;   // 1 / integral of (1+v^2)^(-gamma)
    double eta0 = 0.05;     // largest Fourier parameter the basis construction accepts
    double lambda0 = 0.75;  // radius of the admissible spectral-parameter disc
    ToleranceSet tol;
};

/// Potentials evaluated at a single velocity.
struct PotentialEval {
    double v = 0;
    double m = 0;        // equilibrium (1+v^2)^(-gamma/2)
    double w = 0;        // potential of the conjugated operator
    double w_tilde = 0;  // its nonnegative companion gamma*(gamma+1)/(1+v^2)
    double v_split = 0;  // difference w_tilde - w = gamma*(gamma+2)/(1+v^2)^2
};

/// Validates beta and fills all derived constants. Throws std::invalid_argument
/// outside (1,5) or at the excluded value beta = 2.
ModelParams make_params(double beta);

/// Equilibrium profile M(v).
double equilibrium(const ModelParams& p, double v);

/// All potentials at v in one pass.
PotentialEval potentials(const ModelParams& p, double v);

/// Normalization constant: inverse of the full-line integral of (1+v^2)^(-gamma),
/// adaptive quadrature plus a closed-form power tail. Throws for gamma <= 1/2.
double c_beta_squared(double gamma);

} // namespace fpspec

#endif
