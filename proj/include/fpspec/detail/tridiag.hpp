#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "fpspec/model.hpp"

namespace fpspec::detail {

/* Central-difference discretization of -d^2/dv^2 + W(v) + i eta v with
   Dirichlet walls at +-v_cut, on the n-1 interior nodes of a uniform grid.
   The matrix is complex symmetric, so every pairing below is the bilinear
   x.x, no conjugation. */
struct Tridiag {
    std::vector<Cplx> diag, low_u, fact_u;  // LU factors, off-diagonal constant
    double off = 0;
    std::vector<double> vgrid;

    void factor() {
        const std::size_t m = diag.size();
        fact_u.resize(m);
        low_u.resize(m);
        fact_u[0] = diag[0];
        for (std::size_t j = 1; j < m; ++j) {
            low_u[j] = off / fact_u[j - 1];
            fact_u[j] = diag[j] - low_u[j] * off;
        }
    }
    void solve(std::vector<Cplx>& x) const {
        const std::size_t m = diag.size();
        for (std::size_t j = 1; j < m; ++j)
            x[j] -= low_u[j] * x[j - 1];
        x[m - 1] /= fact_u[m - 1];
        for (std::size_t j = m - 1; j-- > 0;)
            x[j] = (x[j] - off * x[j + 1]) / fact_u[j];
    }
    std::vector<Cplx> apply(const std::vector<Cplx>& x) const {
        const std::size_t m = diag.size();
        std::vector<Cplx> y(m);
        for (std::size_t j = 0; j < m; ++j) {
            y[j] = diag[j] * x[j];
            if (j > 0)
                y[j] += off * x[j - 1];
            if (j + 1 < m)
                y[j] += off * x[j + 1];
        }
        return y;
    }
};

inline Tridiag discretize(double eta, const ModelParams& params, double v_cut, int n) {
    Tridiag t;
    const double h = 2.0 * v_cut / n;
    t.off = -1.0 / (h * h);
    t.diag.resize(n - 1);
    t.vgrid.resize(n - 1);
    for (int j = 1; j < n; ++j) {
        const double v = -v_cut + j * h;
        const PotentialEval pe = potentials(params, v);
        t.vgrid[j - 1] = v;
        t.diag[j - 1] = Cplx(2.0 / (h * h) + pe.w, eta * v);
    }
    return t;
}

inline Cplx rayleigh(const Tridiag& t, const std::vector<Cplx>& x) {
    const std::vector<Cplx> ax = t.apply(x);
    Cplx num = 0, den = 0;
    for (std::size_t j = 0; j < x.size(); ++j) {
        num += x[j] * ax[j];
        den += x[j] * x[j];
    }
    return num / den;
}

inline Cplx inverse_power(const Tridiag& t, std::vector<Cplx>& x, const std::vector<Cplx>* deflate,
                          int max_it, int& used) {
    Cplx mu = 0;
    for (int k = 0; k < max_it; ++k) {
        if (deflate) {
            Cplx pr = 0, nn = 0;
            for (std::size_t j = 0; j < x.size(); ++j) {
                pr += x[j] * (*deflate)[j];
                nn += (*deflate)[j] * (*deflate)[j];
            }
            for (std::size_t j = 0; j < x.size(); ++j)
                x[j] -= pr / nn * (*deflate)[j];
        }
        t.solve(x);
        double sup = 0;
        for (const Cplx& c : x)
            sup = std::max(sup, std::abs(c));
        for (Cplx& c : x)
            c /= sup;
        const Cplx mu_new = rayleigh(t, x);
        used = k + 1;
        // the Rayleigh quotient bottoms out at the rounding floor of x.Ax,
        // roughly 1e-16 * h^-2 / |mu|, well above 1e-13 relative
        if (k > 0 && std::abs(mu_new - mu) <= 1e-9 * std::abs(mu_new) + 1e-18)
            return mu_new;
        mu = mu_new;
    }
    return mu;
}

} // namespace fpspec::detail
