#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "fpspec/model.hpp"

namespace fpspec {

/* Fourier-side density snapshot: rho_hat[i] is the mode at xi_grid[i]. */
struct DensityProfile {
    std::vector<double> xi_grid;
    std::vector<Cplx> rho_hat;
    double t = 0;
};

/* Advances every mode by the fractional heat multiplier exp(-kappa |xi|^alpha dt).
   Exact per mode, so the semigroup law and the conjugate-pair symmetry of a real
   density survive to the last bit. */
DensityProfile evolve_rho_hat(const DensityProfile& initial, double dt, double kappa,
                              double alpha);

/* Principal-value fractional Laplacian of a smooth decaying profile at one point,
   through the symmetric second difference
       c_alpha * int_0^inf (2 rho(x) - rho(x+r) - rho(x-r)) r^(-1-alpha) dr.
   The r < r0 piece is summed analytically from finite-difference derivatives at x;
   past r_cut the integral continues in the substitution u = r_cut / r, which keeps
   constants mapping to exactly zero. */
double frac_laplacian_pv(const std::function<double(double)>& rho, double x, double alpha,
                         double r_cut = 40.0);

struct ModeDecay {
    double rate = 0;         // fitted decay rate of |<g, m_eta>|
    double fit_residual = 0; // rms deviation of log|P| from the fitted line
    double mu_discrete = 0;  // ground eigenvalue of the stepping matrix, for reference
    double dt = 0;
    std::size_t steps = 0;
};

/* Implicit-Euler march of dg/dtau = -(- d^2/dv^2 + W + i eta v) g from g(0) = M on
   the oracle's velocity grid; returns the late-time exponential decay rate of the
   bilinear projection onto the discrete ground mode. steps = 0 picks a step size
   with dtau * mu about 2.5e-3. */
ModeDecay kinetic_mode_decay(const ModelParams& params, double eta, double horizon,
                             std::size_t steps = 0);

} // namespace fpspec
