#include "fpspec/eigenpair.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "fpspec/detail/quad.hpp"
#include "fpspec/detail/tridiag.hpp"
#include "fpspec/kappa.hpp"

namespace fpspec {

namespace {

constexpr double kS0 = 3.0;
constexpr double kDelta = 1.0;

double bump(double x) {
    const double r = 1.0 - x * x;
    if (r <= 0)
        return 0.0;
    return std::exp(1.0 - 1.0 / r);
}

/* Product-quadrature grid: three Gauss nodes per cell, cells uniform through
   the bulk, geometric through the intermediate zone and uniform in the
   rescaled variable s = eta^(1/3) v across the Airy zone. The seam
   v = s0 eta^(-1/3), where the weight switches branch, is always a cell edge. */
struct Quadrature {
    std::vector<double> edges;
    std::vector<double> nodes;
    std::vector<double> w;
    std::size_t cells = 0;

    std::size_t cell_of(std::size_t node) const { return node / 3; }
};

Quadrature build_grid(double eta) {
    std::vector<double> right;
    const double bulk_h = 0.15, log_ratio = 1.03;
    double v_seam, v_end;
    if (eta > 0) {
        const double cb = std::cbrt(eta);
        v_seam = kS0 / cb;
        v_end = (kS0 + 2.0) / cb;
    } else {
        v_seam = 20.0;
        v_end = 60.0;
    }

    const double bulk_end = std::min(20.0, v_seam);
    const int nb = static_cast<int>(std::ceil(bulk_end / bulk_h));
    for (int j = 1; j <= nb; ++j)
        right.push_back(bulk_end * j / nb);
    const double log_end = (eta > 0) ? v_seam : v_end;
    if (log_end > bulk_end + 1e-12) {
        const int nl = std::max(
            1, static_cast<int>(std::ceil(std::log(log_end / bulk_end) / std::log(log_ratio))));
        const double r = std::pow(log_end / bulk_end, 1.0 / nl);
        double e = bulk_end;
        for (int j = 1; j <= nl; ++j) {
            e = (j == nl) ? log_end : e * r;
            right.push_back(e);
        }
    }
    if (eta > 0) {
        const int na = 40;
        for (int j = 1; j <= na; ++j)
            right.push_back(v_seam + (v_end - v_seam) * j / na);
    }

    Quadrature q;
    q.edges.reserve(2 * right.size() + 1);
    for (auto it = right.rbegin(); it != right.rend(); ++it)
        q.edges.push_back(-*it);
    q.edges.push_back(0.0);
    for (double e : right)
        q.edges.push_back(e);
    q.cells = q.edges.size() - 1;
    q.nodes.reserve(3 * q.cells);
    q.w.reserve(3 * q.cells);
    for (std::size_t m = 0; m < q.cells; ++m) {
        const double c = 0.5 * (q.edges[m] + q.edges[m + 1]);
        const double hw = 0.5 * (q.edges[m + 1] - q.edges[m]);
        for (int g = 0; g < 3; ++g) {
            q.nodes.push_back(c + hw * detail::gl3_x[g]);
            q.w.push_back(hw * detail::gl3_w[g]);
        }
    }
    return q;
}

/* Everything solve_penalized needs from either basis, sampled on the grid. */
struct Sampled {
    const SolutionCurve* psi1 = nullptr;
    const SolutionCurve* psi2 = nullptr;
    CoeffFn coeff;
    std::vector<Cplx> p1v, p2v;  // psi1, psi2 at the nodes
    std::vector<double> p2w;     // weight p2 at the nodes
    std::vector<double> vsplit;  // potential difference V
    std::vector<double> meq;     // equilibrium M
    std::vector<double> phiv;    // penalty Phi
    // split weights of the node's own cell: a-side integrates psi2 against
    // the Lagrange basis over [cell left, node], b-side psi1 over [node,
    // cell right]
    std::vector<std::array<Cplx, 3>> da, db;
};

std::array<double, 3> lagrange_at(const double* x, double y) {
    std::array<double, 3> l;
    l[0] = (y - x[1]) * (y - x[2]) / ((x[0] - x[1]) * (x[0] - x[2]));
    l[1] = (y - x[0]) * (y - x[2]) / ((x[1] - x[0]) * (x[1] - x[2]));
    l[2] = (y - x[0]) * (y - x[1]) / ((x[2] - x[0]) * (x[2] - x[1]));
    return l;
}

Sampled sample_all(const Quadrature& grid, const SolutionCurve& psi1, const SolutionCurve& psi2,
                   CoeffFn coeff, const WeightProfile& prof, const ModelParams& params,
                   const PenaltyFunction& phi) {
    const std::size_t n = grid.nodes.size();
    Sampled s;
    s.psi1 = &psi1;
    s.psi2 = &psi2;
    s.coeff = std::move(coeff);
    s.p1v.resize(n);
    s.p2v.resize(n);
    s.p2w.resize(n);
    s.vsplit.resize(n);
    s.meq.resize(n);
    s.phiv.resize(n);
    s.da.resize(n);
    s.db.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double v = grid.nodes[i];
        Cplx der;
        psi1.eval(v, s.p1v[i], der);
        psi2.eval(v, s.p2v[i], der);
        s.p2w[i] = prof.p2(v);
        const PotentialEval pe = potentials(params, v);
        s.vsplit[i] = pe.v_split;
        s.meq[i] = pe.m;
        s.phiv[i] = phi.phi(v);
    }
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t m = grid.cell_of(i);
        const double* cx = &grid.nodes[3 * m];
        const double v = grid.nodes[i];
        const double a = grid.edges[m], b = grid.edges[m + 1];
        s.da[i] = {Cplx(0, 0), Cplx(0, 0), Cplx(0, 0)};
        s.db[i] = {Cplx(0, 0), Cplx(0, 0), Cplx(0, 0)};
        for (int g = 0; g < 3; ++g) {
            const double ya = 0.5 * (a + v) + 0.5 * (v - a) * detail::gl3_x[g];
            const double wa = 0.5 * (v - a) * detail::gl3_w[g];
            Cplx p2a, der;
            psi2.eval(ya, p2a, der);
            const auto la = lagrange_at(cx, ya);
            const double yb = 0.5 * (v + b) + 0.5 * (b - v) * detail::gl3_x[g];
            const double wb = 0.5 * (b - v) * detail::gl3_w[g];
            Cplx p1b;
            psi1.eval(yb, p1b, der);
            const auto lb = lagrange_at(cx, yb);
            for (int l = 0; l < 3; ++l) {
                s.da[i][l] += wa * p2a * la[l];
                s.db[i][l] += wb * p1b * lb[l];
            }
        }
    }
    return s;
}

/* Assemble (I - A) h = r for the fixed point
     h = (1/p2) T[ V p2 h - (<p2 h, Phi> - <M, Phi>) Phi ]
   and solve it; then rebuild the one-sided integrals of the solved source
   for the finite-difference defect probes. */
PenalizedSolution core_solve(Cplx lambda, double eta, const Quadrature& grid, const Sampled& s,
                             const ModelParams& params) {
    const std::size_t n = grid.nodes.size();
    Eigen::MatrixXcd mat(n, n);
    Eigen::VectorXcd rhs(n);

    double mphi = 0;
    for (std::size_t j = 0; j < n; ++j)
        mphi += grid.w[j] * s.meq[j] * s.phiv[j];

    std::vector<Cplx> krow(n);
    std::vector<Cplx> tphi(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t ci = grid.cell_of(i);
        Cplx tp = 0;
        for (std::size_t j = 0; j < n; ++j) {
            const std::size_t cj = grid.cell_of(j);
            Cplx k;
            if (cj < ci)
                k = s.p1v[i] * s.p2v[j] * grid.w[j];
            else if (cj > ci)
                k = s.p2v[i] * s.p1v[j] * grid.w[j];
            else
                k = s.p1v[i] * s.da[i][j - 3 * ci] + s.p2v[i] * s.db[i][j - 3 * ci];
            krow[j] = k;
            tp += k * s.phiv[j];
        }
        tphi[i] = tp;
        for (std::size_t j = 0; j < n; ++j)
            mat(i, j) = -(krow[j] * s.vsplit[j] * s.p2w[j] - tp * grid.w[j] * s.p2w[j] * s.phiv[j]) /
                        s.p2w[i];
        mat(i, i) += 1.0;
        rhs(i) = tp * mphi / s.p2w[i];
    }

    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(mat);
    Eigen::VectorXcd hv = lu.solve(rhs);

    PenalizedSolution sol;
    sol.lambda = lambda;
    sol.eta = eta;
    sol.nodes = grid.nodes;
    sol.wq = grid.w;
    sol.h.assign(hv.data(), hv.data() + n);
    sol.m.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        sol.m[i] = s.p2w[i] * sol.h[i];

    Cplx b = 0, i_mm = 0, i_vmm = 0;
    for (std::size_t j = 0; j < n; ++j) {
        b += grid.w[j] * (sol.m[j] - s.meq[j]) * s.phiv[j];
        i_mm += grid.w[j] * sol.m[j] * s.meq[j];
        i_vmm += grid.w[j] * grid.nodes[j] * sol.m[j] * s.meq[j];
    }
    sol.b = b;
    sol.i_mm = i_mm;
    sol.i_vmm = i_vmm;

    // value at v = 0 through the quadratic on the cell right of the origin
    {
        const auto mid = std::lower_bound(grid.edges.begin(), grid.edges.end(), 0.0);
        std::size_t m0 = static_cast<std::size_t>(mid - grid.edges.begin());
        if (m0 >= grid.cells)
            m0 = grid.cells - 1;
        const auto l = lagrange_at(&grid.nodes[3 * m0], 0.0);
        sol.m_at_zero = l[0] * sol.m[3 * m0] + l[1] * sol.m[3 * m0 + 1] + l[2] * sol.m[3 * m0 + 2];
    }

    // source of the solved equation and its per-cell one-sided sums
    std::vector<Cplx> g(n);
    for (std::size_t j = 0; j < n; ++j)
        g[j] = s.vsplit[j] * sol.m[j] - b * s.phiv[j];
    std::vector<Cplx> cell_a(grid.cells), cell_b(grid.cells);
    for (std::size_t m = 0; m < grid.cells; ++m) {
        Cplx sa = 0, sb = 0;
        for (int k = 0; k < 3; ++k) {
            sa += grid.w[3 * m + k] * s.p2v[3 * m + k] * g[3 * m + k];
            sb += grid.w[3 * m + k] * s.p1v[3 * m + k] * g[3 * m + k];
        }
        cell_a[m] = sa;
        cell_b[m] = sb;
    }
    std::vector<Cplx> pref(grid.cells + 1), suff(grid.cells + 1);
    pref[0] = 0;
    for (std::size_t m = 0; m < grid.cells; ++m)
        pref[m + 1] = pref[m] + cell_a[m];
    suff[grid.cells] = 0;
    for (std::size_t m = grid.cells; m-- > 0;)
        suff[m] = suff[m + 1] + cell_b[m];

    // centered-difference probes at every node: the A/B parts on the node's
    // own cell are re-integrated locally so the kernel kink is respected
    const double fd = 5e-4;
    double rsup = 0, d2sum = 0, msum = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t ci = grid.cell_of(i);
        const double v = grid.nodes[i];
        const double* cx = &grid.nodes[3 * ci];
        const Cplx* cg = &g[3 * ci];
        auto g_local = [&](double y) {
            const auto l = lagrange_at(cx, y);
            return l[0] * cg[0] + l[1] * cg[1] + l[2] * cg[2];
        };
        auto part_a = [&](double lo, double hi) {
            Cplx r = 0;
            for (int k = 0; k < 3; ++k) {
                const double y = 0.5 * (lo + hi) + 0.5 * (hi - lo) * detail::gl3_x[k];
                Cplx p2y, der;
                s.psi2->eval(y, p2y, der);
                r += 0.5 * (hi - lo) * detail::gl3_w[k] * p2y * g_local(y);
            }
            return r;
        };
        auto part_b = [&](double lo, double hi) {
            Cplx r = 0;
            for (int k = 0; k < 3; ++k) {
                const double y = 0.5 * (lo + hi) + 0.5 * (hi - lo) * detail::gl3_x[k];
                Cplx p1y, der;
                s.psi1->eval(y, p1y, der);
                r += 0.5 * (hi - lo) * detail::gl3_w[k] * p1y * g_local(y);
            }
            return r;
        };
        const Cplx a_i = pref[ci] + part_a(grid.edges[ci], v);
        const Cplx b_i = suff[ci + 1] + part_b(v, grid.edges[ci + 1]);

        Cplx p1n, dp1n, p2n, dp2n;
        s.psi1->eval(v, p1n, dp1n);
        s.psi2->eval(v, p2n, dp2n);
        Cplx p1p, d1p, p1m, d1m, p2p, d2p, p2m, d2m;
        taylor_step(s.coeff, v, p1n, dp1n, fd, p1p, d1p);
        taylor_step(s.coeff, v, p1n, dp1n, -fd, p1m, d1m);
        taylor_step(s.coeff, v, p2n, dp2n, fd, p2p, d2p);
        taylor_step(s.coeff, v, p2n, dp2n, -fd, p2m, d2m);

        const Cplx tf_p = p1p * (a_i + part_a(v, v + fd)) + p2p * (b_i - part_b(v, v + fd));
        const Cplx tf_m = p1m * (a_i - part_a(v - fd, v)) + p2m * (b_i + part_b(v - fd, v));
        const Cplx tf_0 = p1n * a_i + p2n * b_i;
        const Cplx d2 = (tf_p - 2.0 * tf_0 + tf_m) / (fd * fd);
        const Cplx res = -d2 + s.coeff.q(v) * sol.m[i] - g[i];
        rsup = std::max(rsup, std::abs(res));
        d2sum += grid.w[i] * std::norm(res - b * s.phiv[i]);
        msum += grid.w[i] * std::norm(sol.m[i]);
    }
    sol.residual = rsup;
    sol.defect_l2 = std::sqrt(d2sum / msum);

    const double m0 = std::abs(sol.m_at_zero);
    double gap = 0, over = 0;
    for (std::size_t i = 0; i < n; ++i) {
        gap += grid.w[i] * std::norm(sol.m[i] / sol.m_at_zero - s.meq[i]);
        over = std::max(over, std::abs(sol.m[i]) / (m0 * s.meq[i]));
    }
    // beyond the grid the eigenfunction has decayed through the Airy zone,
    // so |M_le - M|^2 integrates to the equilibrium tail mass; at eta = 0 the
    // solution follows M out to infinity and no such term belongs
    if (eta > 0) {
        const double g2 = params.gamma * 2.0;
        gap += 2.0 * std::pow(grid.edges.back(), 1.0 - g2) / (g2 - 1.0);
    }
    sol.l2_gap = std::sqrt(gap);
    sol.m_over_m = over;
    return sol;
}

double kappa_seed(const ModelParams& params) {
    const H0Solution h0 = solve_h0(params);
    return compute_kappa(h0, params).kappa;
}

} // namespace

PenaltyFunction make_phi(const ModelParams& params, double sigma, double R) {
    const double reach = kS0 * std::pow(params.eta0, -1.0 / 3.0);
    if (!(R > 0) || R >= reach)
        throw std::invalid_argument("make_phi: support must stay inside the bulk zone");
    const double expo = sigma + params.gamma + 2.0 + kDelta;
    auto raw = [expo, R](double v) {
        return std::pow(1.0 + v * v, -0.5 * expo) * bump(v / R);
    };
    const double mass = 2.0 * detail::adaptive_gk(
                                  [&](double v) { return raw(v) * std::pow(1.0 + v * v,
                                                                           -0.5 * params.gamma); },
                                  0.0, R, 1e-13);
    const double c = 1.0 / mass;
    PenaltyFunction phi;
    phi.sigma = sigma;
    phi.R = R;
    phi.phi = [raw, c](double v) { return c * raw(v); };
    return phi;
}

Cplx PenalizedSolution::constraint() const {
    if (eta <= 0)
        return b;
    return b * std::pow(eta, -2.0 / 3.0);
}

PenalizedSolution solve_penalized(Cplx lambda, double eta, const ModelParams& params,
                                  const PenaltyFunction& phi) {
    if (eta < 0)
        throw std::invalid_argument("solve_penalized: eta must be nonnegative");
    const Quadrature grid = build_grid(eta);
    const WeightProfile prof = weight(params, lambda, eta, kDelta);
    if (eta == 0) {
        const Basis0 base = build_basis(params, solve_psi(params, 100.0));
        const Sampled s =
            sample_all(grid, base.psi1, base.psi2, base.coeff(), prof, params, phi);
        return core_solve(lambda, 0.0, grid, s, params);
    }
    const double v_max = (kS0 + 2.0) / std::cbrt(eta);
    BasisEta basis = build_basis_eta(solve_psi_eta(params, lambda, eta, v_max));
    const Sampled s =
        sample_all(grid, basis.psi1, basis.psi2, basis.coeff(), prof, params, phi);
    return core_solve(lambda, eta, grid, s, params);
}

Cplx constraint_b(const PenalizedSolution& sol, const ModelParams& params) {
    (void)params;
    return sol.lambda * sol.i_mm - Cplx(0, 1) * std::cbrt(sol.eta) * sol.i_vmm;
}

EigenResult solve_mu(double eta, const ModelParams& params, const PenaltyFunction& phi,
                     Cplx lambda_seed, bool with_oracle) {
    EigenResult out;
    out.eta = eta;
    if (eta == 0) {
        const PenalizedSolution sol = solve_penalized(Cplx(0, 0), 0.0, params, phi);
        out.lambda_star = 0;
        out.mu = 0;
        out.b_residual = std::abs(sol.b);
        out.l2_gap = sol.l2_gap;
        out.defect_l2 = sol.defect_l2;
        out.ok = true;
        return out;
    }
    if (eta < 0) {
        EigenResult pos = solve_mu(-eta, params, phi, std::conj(lambda_seed), with_oracle);
        out = pos;
        out.eta = eta;
        out.lambda_star = std::conj(pos.lambda_star);
        out.mu = std::conj(pos.mu);
        out.oracle = std::conj(pos.oracle);
        return out;
    }
    if (eta > params.eta0)
        throw std::invalid_argument("solve_mu: eta above the admissible window");

    Cplx l0 = lambda_seed;
    if (l0 == Cplx(0, 0))
        l0 = kappa_seed(params) * std::pow(eta, (2.0 * params.gamma - 1.0) / 3.0);
    const double tol_b = 1e-10 / params.c_beta_sq;

    Cplx l1 = l0 * 1.05 + Cplx(1e-6, 0);
    PenalizedSolution s0 = solve_penalized(l0, eta, params, phi);
    Cplx b0 = s0.constraint();
    PenalizedSolution s1 = solve_penalized(l1, eta, params, phi);
    Cplx b1 = s1.constraint();
    int it = 2;
    while (it < 50) {
        if (std::abs(b1) <= tol_b)
            break;
        const Cplx denom = b1 - b0;
        if (denom == Cplx(0, 0))
            break;
        const Cplx l2 = l1 - b1 * (l1 - l0) / denom;
        if (std::abs(l2) > params.lambda0)
            throw std::runtime_error("solve_mu: root left the admissible disc");
        l0 = l1;
        b0 = b1;
        l1 = l2;
        s1 = solve_penalized(l1, eta, params, phi);
        b1 = s1.constraint();
        ++it;
    }
    out.lambda_star = l1;
    out.mu = std::pow(eta, 2.0 / 3.0) * l1;
    out.b_residual = std::abs(b1);
    out.iterations = it;
    out.l2_gap = s1.l2_gap;
    out.defect_l2 = s1.defect_l2;
    out.ok = std::abs(b1) <= tol_b;
    if (with_oracle) {
        const OracleResult orc = oracle_mu(eta, params);
        out.oracle = orc.mu;
        out.rel_gap = std::abs(out.mu - orc.mu) / std::abs(out.mu);
    }
    return out;
}

namespace {

Cplx oracle_single(double eta, const ModelParams& params, double v_cut, int n,
                   std::vector<Cplx>& vec_out, int& iters) {
    detail::Tridiag t = detail::discretize(eta, params, v_cut, n);
    t.factor();
    vec_out.resize(t.diag.size());
    for (std::size_t j = 0; j < vec_out.size(); ++j)
        vec_out[j] = equilibrium(params, t.vgrid[j]);
    return detail::inverse_power(t, vec_out, nullptr, 60, iters);
}

} // namespace

OracleResult oracle_mu(double eta, const ModelParams& params, double v_cut, int n) {
    if (v_cut <= 0)
        v_cut = (eta != 0) ? std::max(4.0 / std::cbrt(std::abs(eta)), 25.0) : 25.0;
    if (n <= 0)
        n = std::max(4000, static_cast<int>(std::ceil(100.0 * v_cut)));
    if (n % 2)
        ++n;

    OracleResult out;
    std::vector<Cplx> x_fine, x_coarse;
    int it_c = 0;
    out.mu_coarse = oracle_single(eta, params, v_cut, n / 2, x_coarse, it_c);
    out.mu_fine = oracle_single(eta, params, v_cut, n, x_fine, out.iterations);
    out.mu = (4.0 * out.mu_fine - out.mu_coarse) / 3.0;

    // similarity against the equilibrium on the fine grid
    {
        detail::Tridiag t = detail::discretize(eta, params, v_cut, n);
        Cplx dot = 0;
        double nx = 0, nm = 0;
        for (std::size_t j = 0; j < x_fine.size(); ++j) {
            const double m = equilibrium(params, t.vgrid[j]);
            dot += std::conj(x_fine[j]) * m;
            nx += std::norm(x_fine[j]);
            nm += m * m;
        }
        out.cosine = std::abs(dot) / std::sqrt(nx * nm);

        // deflated second run for the cluster check
        t.factor();
        std::vector<Cplx> y(t.diag.size());
        for (std::size_t j = 0; j < y.size(); ++j)
            y[j] = (j % 2) ? 1.0 : -0.5;
        int dummy = 0;
        out.mu_second = detail::inverse_power(t, y, &x_fine, 40, dummy);
        out.clustered = std::abs(out.mu_second) < 10.0 * std::abs(out.mu);
    }
    return out;
}

ScanResult scan(const std::vector<double>& etas, const ModelParams& params,
                const PenaltyFunction& phi, int jobs, bool with_oracle) {
    std::vector<double> order(etas);
    std::sort(order.begin(), order.end(), std::greater<double>());
    ScanResult res;
    res.points.resize(order.size());
    if (order.empty())
        return res;

    const double kap = kappa_seed(params);
    const double ex = (2.0 * params.gamma - 1.0) / 3.0;
    auto run_point = [&](std::size_t idx, Cplx seed) {
        try {
            res.points[idx] = solve_mu(order[idx], params, phi, seed, with_oracle);
        } catch (const std::exception&) {
            res.points[idx].eta = order[idx];
            res.points[idx].ok = false;
        }
    };

    const std::size_t serial = std::min<std::size_t>(2, order.size());
    for (std::size_t i = 0; i < serial; ++i) {
        Cplx seed = (i == 0 || !res.points[0].ok)
                        ? Cplx(kap * std::pow(std::abs(order[i]), ex), 0)
                        : res.points[0].lambda_star *
                              std::pow(std::abs(order[i] / order[0]), ex);
        run_point(i, seed);
    }

    const EigenResult& anchor = res.points[serial - 1];
    auto seed_for = [&](std::size_t idx) {
        if (anchor.ok)
            return anchor.lambda_star * std::pow(std::abs(order[idx] / anchor.eta), ex);
        return Cplx(kap * std::pow(std::abs(order[idx]), ex), 0);
    };

    if (jobs <= 1) {
        for (std::size_t i = serial; i < order.size(); ++i)
            run_point(i, seed_for(i));
    } else {
        std::vector<std::thread> pool;
        std::size_t next = serial;
        const std::size_t stride = static_cast<std::size_t>(jobs);
        for (std::size_t tgt = 0; tgt < stride; ++tgt) {
            pool.emplace_back([&, tgt]() {
                for (std::size_t i = next + tgt; i < order.size(); i += stride)
                    run_point(i, seed_for(i));
            });
        }
        for (auto& th : pool)
            th.join();
    }

    double sx = 0, sy = 0, sxx = 0, sxy = 0, cnt = 0;
    for (const EigenResult& p : res.points) {
        if (!p.ok || !(p.eta > 0) || !(p.mu.real() > 0))
            continue;
        const double lx = std::log(p.eta), ly = std::log(p.mu.real());
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        cnt += 1;
    }
    if (cnt >= 2) {
        res.slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
        res.intercept = (sy - res.slope * sx) / cnt;
    }
    return res;
}

} // namespace fpspec
