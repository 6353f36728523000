#include "fpspec/basis_eta.hpp"

#include <cmath>
#include <stdexcept>

#include "fpspec/detail/quad.hpp"

namespace fpspec {

namespace {

CoeffFn make_coeff(const ModelParams& params, Cplx lambda, double eta) {
    const double gg = params.gamma * (params.gamma + 1);
    const Cplx shift = lambda * std::pow(eta, 2.0 / 3.0);
    CoeffFn cf;
    cf.q = [gg, eta, shift](double v) { return Cplx(gg / (1 + v * v), eta * v) - shift; };
    cf.dq = [gg, eta](double v) {
        const double u = 1 + v * v;
        return Cplx(-2 * gg * v / (u * u), eta);
    };
    cf.d2q = [gg](double v) {
        const double u = 1 + v * v;
        return Cplx(gg * (6 * v * v - 2) / (u * u * u));
    };
    return cf;
}

} // namespace

CoeffFn BasisEta::coeff() const { return make_coeff(params, lambda, eta); }

green::KernelData BasisEta::kernel() const {
    green::KernelData k;
    k.psi1 = &psi1;
    k.psi2 = &psi2;
    k.coeff = coeff();
    k.power_tails = false;
    k.gamma = params.gamma;
    return k;
}

BasisEta solve_psi_eta(const ModelParams& params, Cplx lambda, double eta, double v_max) {
    if (!(eta > 0 && eta <= params.eta0))
        throw std::invalid_argument("solve_psi_eta: eta outside (0, eta0]");
    if (std::abs(lambda) > params.lambda0)
        throw std::invalid_argument("solve_psi_eta: |lambda| exceeds lambda0");
    const double cbrt_eta = std::cbrt(eta);
    BasisEta b;
    b.params = params;
    b.lambda = lambda;
    b.eta = eta;
    b.v_max = v_max;
    if (v_max * cbrt_eta < b.s0 + 2 - 1e-9)
        throw std::invalid_argument("solve_psi_eta: v_max below (s0+2) eta^(-1/3)");

    const CoeffFn cf = make_coeff(params, lambda, eta);
    auto right = integrate(cf, 0.0, v_max, Cplx(1), Cplx(0), params.tol.ode);
    auto left = integrate(cf, 0.0, -v_max, Cplx(1), Cplx(0), params.tol.ode);

    const std::size_t nl = left.grid.size(), nr = right.grid.size();
    SolutionCurve& full = b.psi_le;
    full.grid.reserve(nl + nr - 1);
    full.value.reserve(nl + nr - 1);
    full.derivative.reserve(nl + nr - 1);
    full.second.reserve(nl + nr - 1);
    for (std::size_t i = 0; i + 1 < nl; ++i) {
        full.grid.push_back(left.grid[i]);
        full.value.push_back(left.value[i]);
        full.derivative.push_back(left.derivative[i]);
        full.second.push_back(left.second[i]);
    }
    for (std::size_t i = 0; i < nr; ++i) {
        full.grid.push_back(right.grid[i]);
        full.value.push_back(right.value[i]);
        full.derivative.push_back(right.derivative[i]);
        full.second.push_back(right.second[i]);
    }
    full.meta.steps = left.meta.steps + right.meta.steps;
    full.meta.rejected = left.meta.rejected + right.meta.rejected;
    full.meta.max_local_error = std::max(left.meta.max_local_error, right.meta.max_local_error);

    for (const Cplx& y : full.value)
        if (!(std::abs(y) > 0))
            throw std::runtime_error("solve_psi_eta: zero of psi detected on the grid");

    /* matching constant from the Airy decomposition at v = s0 eta^(-1/3) */
    const double v0 = b.s0 / cbrt_eta;
    Cplx val, der;
    full.eval(v0, val, der);
    auto [ca, cb] = decompose_in_airy_basis(val, der / cbrt_eta, b.s0, lambda);
    b.c_lambda = cb * std::pow(eta, (params.gamma + 1) / 3.0);
    RotatedPair rp(lambda);
    b.a_rel = std::abs(ca * rp.a(b.s0).val) / std::abs(cb * rp.b(b.s0).val);
    return b;
}

BasisEta build_basis_eta(BasisEta b) {
    const SolutionCurve& psi = b.psi_le;
    const std::size_t n = psi.grid.size();
    const double cbrt_eta = std::cbrt(b.eta);
    RotatedPair rp(b.lambda);

    /* closed-form tails from the end decompositions: beyond the right end
       psi ~ cb 𝔟 and int_s^inf 𝔟^-2 = 2 pi 𝔞(s)/𝔟(s); mirrored on the left */
    const double sr = cbrt_eta * psi.grid.back();
    const double sl = cbrt_eta * psi.grid.front();
    auto [car, cbr] = decompose_in_airy_basis(psi.value.back(),
                                              psi.derivative.back() / cbrt_eta, sr, b.lambda);
    auto [cal, cbl] = decompose_in_airy_basis(psi.value.front(),
                                              psi.derivative.front() / cbrt_eta, sl, b.lambda);
    const Cplx ar = rp.a(sr).val, br = rp.b(sr).val;
    const Cplx al = rp.a(sl).val, bl = rp.b(sl).val;
    if (std::abs(ar / br) > 0.1 || std::abs(bl / al) > 0.1)
        throw std::runtime_error("build_basis_eta: end decomposition outside the Airy regime");
    const Cplx tail_r = 2 * M_PI * ar / (cbr * cbr * br) / cbrt_eta;
    const Cplx tail_l = 2 * M_PI * bl / (cal * cal * al) / cbrt_eta;

    std::vector<Cplx> cell(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i)
        cell[i] = detail::gauss4(
            [&psi](double w) {
                const Cplx pv = psi.eval_value(w);
                return 1.0 / (pv * pv);
            },
            psi.grid[i], psi.grid[i + 1]);
    std::vector<Cplx> i1v(n), i2v(n);
    i1v[n - 1] = tail_r;
    for (std::size_t i = n - 1; i-- > 0;)
        i1v[i] = i1v[i + 1] + cell[i];
    i2v[0] = tail_l;
    for (std::size_t i = 1; i < n; ++i)
        i2v[i] = i2v[i - 1] + cell[i - 1];
    b.wronskian_target = i1v[0] + tail_l;
    const Cplx rn = std::sqrt(b.wronskian_target);

    const CoeffFn cf = b.coeff();
    SolutionCurve p1, p2;
    p1.grid = p2.grid = psi.grid;
    p1.value.resize(n);
    p1.derivative.resize(n);
    p1.second.resize(n);
    p2.value.resize(n);
    p2.derivative.resize(n);
    p2.second.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Cplx ps = psi.value[i], dps = psi.derivative[i];
        p1.value[i] = ps * i1v[i] / rn;
        p1.derivative[i] = (dps * i1v[i] - 1.0 / ps) / rn;
        p2.value[i] = ps * i2v[i] / rn;
        p2.derivative[i] = (dps * i2v[i] + 1.0 / ps) / rn;
        const Cplx q = cf.q(psi.grid[i]);
        p1.second[i] = q * p1.value[i];
        p2.second[i] = q * p2.value[i];
    }
    b.psi1 = std::move(p1);
    b.psi2 = std::move(p2);
    return b;
}

green::ApplyResult apply_t_eta(const std::function<Cplx(double)>& f, const BasisEta& basis) {
    return green::apply(basis.kernel(), f);
}

double WeightProfile::p2(double v) const {
    if (eta > 0) {
        const double s = std::cbrt(eta) * v;
        if (s > s0)
            return std::pow(eta, gamma / 3.0) * std::abs(RotatedPair(lambda).a(s).val);
        if (s < -s0)
            return std::pow(eta, gamma / 3.0) * std::abs(RotatedPair(lambda).b(s).val);
    }
    return std::pow(1 + v * v, -gamma / 2);
}

double WeightProfile::p1(double v) const { return p2(v) * std::pow(1 + v * v, -(2 + delta) / 2); }

double WeightProfile::seam_ratio() const {
    const double v0 = s0 / std::cbrt(eta);
    return std::pow(eta, gamma / 3.0) * std::abs(RotatedPair(lambda).a(s0).val) /
           std::pow(1 + v0 * v0, -gamma / 2);
}

WeightProfile weight(const ModelParams& params, Cplx lambda, double eta, double delta) {
    if (!(delta > 0 && delta < 2))
        throw std::invalid_argument("weight: delta must lie in (0,2)");
    WeightProfile w;
    w.eta = eta;
    w.lambda = lambda;
    w.delta = delta;
    w.gamma = params.gamma;
    return w;
}

double weighted_kernel_bound(const BasisEta& basis, const WeightProfile& weights) {
    auto p1 = [&weights](double v) { return weights.p1(v); };
    auto p2 = [&weights](double v) { return weights.p2(v); };
    return green::kernel_bound(basis.kernel(), p1, p2);
}

} // namespace fpspec
