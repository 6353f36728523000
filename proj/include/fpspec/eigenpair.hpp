#ifndef FPSPEC_EIGENPAIR_HPP
#define FPSPEC_EIGENPAIR_HPP

#include <functional>
#include <vector>

#include "fpspec/basis0.hpp"
#include "fpspec/basis_eta.hpp"
#include "fpspec/model.hpp"

namespace fpspec {

/// Even, nonnegative penalty with compact support normalized to <Phi, M> = 1.
/// Built as <v>^-sigma p1(v) times a smooth bump cutoff at |v| = R, so the
/// support stays inside the bulk zone for every eta <= eta0.
struct PenaltyFunction {
    double sigma = 2.0;
    double R = 6.0;
    std::function<double(double)> phi;
};

PenaltyFunction make_phi(const ModelParams& params, double sigma = 2.0, double R = 6.0);

/// Solution of the penalized fixed point h = (1/p2) T[V p2 h - <p2 h - M, Phi> Phi]
/// on the product-quadrature grid, together with its defect diagnostics.
struct PenalizedSolution {
    Cplx lambda;
    double eta = 0;
    std::vector<double> nodes;   // Gauss nodes, symmetric about 0
    std::vector<double> wq;      // quadrature weights
    std::vector<Cplx> h;
    std::vector<Cplx> m;         // M_(lambda,eta) = p2 h at the nodes
    Cplx b;                      // <M_(lambda,eta) - M, Phi>
    Cplx m_at_zero;
    Cplx i_mm;                   // int M_(lambda,eta) M dv
    Cplx i_vmm;                  // int v M_(lambda,eta) M dv
    double residual = 0;         // sup-norm defect of the penalized equation
    double defect_l2 = 0;        // ||L_eta M - eta^(2/3) lambda M||_2 / ||M||_2
    double l2_gap = 0;           // ||M_(lambda,eta)/M(0) - M||_2
    double m_over_m = 0;         // sup |M_(lambda,eta)| / M after M(0)=1 scaling

    /// B(lambda, eta) = b / eta^(2/3), the rescaled constraint.
    Cplx constraint() const;
};

PenalizedSolution solve_penalized(Cplx lambda, double eta, const ModelParams& params,
                                  const PenaltyFunction& phi);

/// B recomputed through the bilinear identity
/// B = lambda int M_(l,e) M - i eta^(1/3) int v M_(l,e) M; agreement with
/// constraint() validates the solve end to end.
Cplx constraint_b(const PenalizedSolution& sol, const ModelParams& params);

struct EigenResult {
    double eta = 0;
    Cplx lambda_star;
    Cplx mu;
    double b_residual = 0;      // |B| at the accepted root
    Cplx oracle = {0, 0};       // filled by oracle_mu when requested
    double rel_gap = 0;         // |mu - oracle| / |mu|
    int iterations = 0;
    double l2_gap = 0;          // ||M_eta - M||_2 at the root
    double defect_l2 = 0;
    bool ok = false;
};

/// Secant root of lambda -> B(lambda, eta); mu = eta^(2/3) lambda*.
/// Negative eta is handled by conjugation symmetry, eta = 0 returns the
/// kernel couple (0, M). The seed defaults to kappa_est eta^(alpha - 2/3)
/// with kappa_est from the shooting route when not supplied.
EigenResult solve_mu(double eta, const ModelParams& params, const PenaltyFunction& phi,
                     Cplx lambda_seed = Cplx(0, 0), bool with_oracle = false);

struct OracleResult {
    Cplx mu;                    // Richardson-extrapolated over (n/2, n)
    Cplx mu_coarse, mu_fine;
    Cplx mu_second;             // next eigenvalue, for the cluster check
    double cosine = 0;          // |<x, M>| / (|x| |M|) similarity
    bool clustered = false;     // |mu_second| < 10 |mu|
    int iterations = 0;
};

/// Brute-force check: central-difference discretization of
/// -d^2/dv^2 + W + i eta v on [-v_cut, v_cut] with zero endpoint values,
/// smallest-modulus eigenvalue by shifted inverse power iteration.
/// v_cut = 0 or n = 0 pick defaults from eta.
OracleResult oracle_mu(double eta, const ModelParams& params, double v_cut = 0, int n = 0);

struct ScanResult {
    std::vector<EigenResult> points;
    double slope = 0;       // free-exponent fit of log Re mu vs log eta
    double intercept = 0;   // log kappa from the same fit
};

/// Descending-eta continuation: two serial seed points, then parallel over
/// the rest (jobs threads); every point carries its oracle cross-check.
ScanResult scan(const std::vector<double>& etas, const ModelParams& params,
                const PenaltyFunction& phi, int jobs = 1, bool with_oracle = true);

} // namespace fpspec

#endif
