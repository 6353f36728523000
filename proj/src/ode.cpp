#include "fpspec/ode.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fpspec {

namespace {

/* Dormand-Prince 5(4) tableau. */
const double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
const double a21 = 1.0 / 5;
const double a31 = 3.0 / 40, a32 = 9.0 / 40;
const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
             a54 = -212.0 / 729;
const double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
             a65 = -5103.0 / 18656;
const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
             b6 = 11.0 / 84;
const double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
             e4 = 125.0 / 192 - 393.0 / 640, e5 = -2187.0 / 6784 + 92097.0 / 339200,
             e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;

struct State {
    Cplx y, dy;
};

inline State axpy(const State& s, double h, const State& k) {
    return {s.y + h * k.y, s.dy + h * k.dy};
}

} // namespace

void SolutionCurve::eval(double v, Cplx& val, Cplx& der) const {
    const std::size_t i = cell_index(v);
    const double x0 = grid[i], x1 = grid[i + 1];
    const double h = x1 - x0;
    const double t = (v - x0) / h;
    const double t2 = t * t, t3 = t2 * t;
    if (second.size() == grid.size()) {
        /* quintic two-point Hermite on (value, derivative, second) */
        const double t4 = t3 * t, t5 = t4 * t;
        const double h0 = 1 - 10 * t3 + 15 * t4 - 6 * t5;
        const double h1 = t - 6 * t3 + 8 * t4 - 3 * t5;
        const double h2 = 0.5 * (t2 - 3 * t3 + 3 * t4 - t5);
        const double k0 = 10 * t3 - 15 * t4 + 6 * t5;
        const double k1 = -4 * t3 + 7 * t4 - 3 * t5;
        const double k2 = 0.5 * (t3 - 2 * t4 + t5);
        val = h0 * value[i] + h * h1 * derivative[i] + h * h * h2 * second[i] +
              k0 * value[i + 1] + h * k1 * derivative[i + 1] + h * h * k2 * second[i + 1];
        const double dh0 = (-30 * t2 + 60 * t3 - 30 * t4) / h;
        const double dh1 = 1 - 18 * t2 + 32 * t3 - 15 * t4;
        const double dh2 = 0.5 * (2 * t - 9 * t2 + 12 * t3 - 5 * t4);
        const double dk0 = (30 * t2 - 60 * t3 + 30 * t4) / h;
        const double dk1 = -12 * t2 + 28 * t3 - 15 * t4;
        const double dk2 = 0.5 * (3 * t2 - 8 * t3 + 5 * t4);
        der = dh0 * value[i] + dh1 * derivative[i] + h * dh2 * second[i] +
              dk0 * value[i + 1] + dk1 * derivative[i + 1] + h * dk2 * second[i + 1];
        return;
    }
    const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
    const double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
    val = h00 * value[i] + h * h10 * derivative[i] + h01 * value[i + 1] +
          h * h11 * derivative[i + 1];
    /* derivative of the same cubic */
    const double g00 = (6 * t2 - 6 * t) / h, g10 = 3 * t2 - 4 * t + 1;
    const double g01 = (-6 * t2 + 6 * t) / h, g11 = 3 * t2 - 2 * t;
    der = g00 * value[i] + g10 * derivative[i] + g01 * value[i + 1] + g11 * derivative[i + 1];
}

Cplx SolutionCurve::eval_value(double v) const {
    Cplx a, b;
    eval(v, a, b);
    return a;
}

std::size_t SolutionCurve::cell_index(double v) const {
    if (grid.size() < 2)
        throw std::runtime_error("SolutionCurve: empty curve");
    auto it = std::upper_bound(grid.begin(), grid.end(), v);
    std::size_t i = (it == grid.begin()) ? 0 : static_cast<std::size_t>(it - grid.begin()) - 1;
    if (i >= grid.size() - 1)
        i = grid.size() - 2;
    return i;
}

SolutionCurve integrate(const CoeffFn& coeff, double from, double to, Cplx y0, Cplx dy0,
                        double tol, double h_max) {
    if (!coeff.q)
        throw std::invalid_argument("integrate: coefficient function not set");
    const double span = to - from;
    if (span == 0.0)
        throw std::invalid_argument("integrate: empty interval");
    const double dir = span > 0 ? 1.0 : -1.0;

    auto rhs = [&](double v, const State& s) -> State { return {s.dy, coeff.q(v) * s.y}; };

    SolutionCurve out;
    out.grid.push_back(from);
    out.value.push_back(y0);
    out.derivative.push_back(dy0);
    out.second.push_back(coeff.q(from) * y0);

    State y{y0, dy0};
    double v = from;
    double h = dir * std::min(h_max, std::abs(span) / 16.0);
    double err_prev = 1.0;
    const double underflow = 1e-14 * std::abs(span);

    while (dir * (to - v) > 0) {
        if (dir * (v + h - to) > 0)
            h = to - v;
        const State k1 = rhs(v, y);
        const State k2 = rhs(v + c2 * h, axpy(y, h * a21, k1));
        State s = y;
        s = axpy(s, h * a31, k1);
        s = axpy(s, h * a32, k2);
        const State k3 = rhs(v + c3 * h, s);
        s = y;
        s = axpy(s, h * a41, k1);
        s = axpy(s, h * a42, k2);
        s = axpy(s, h * a43, k3);
        const State k4 = rhs(v + c4 * h, s);
        s = y;
        s = axpy(s, h * a51, k1);
        s = axpy(s, h * a52, k2);
        s = axpy(s, h * a53, k3);
        s = axpy(s, h * a54, k4);
        const State k5 = rhs(v + c5 * h, s);
        s = y;
        s = axpy(s, h * a61, k1);
        s = axpy(s, h * a62, k2);
        s = axpy(s, h * a63, k3);
        s = axpy(s, h * a64, k4);
        s = axpy(s, h * a65, k5);
        const State k6 = rhs(v + h, s);
        State y5 = y;
        y5 = axpy(y5, h * b1, k1);
        y5 = axpy(y5, h * b3, k3);
        y5 = axpy(y5, h * b4, k4);
        y5 = axpy(y5, h * b5, k5);
        y5 = axpy(y5, h * b6, k6);
        const State k7 = rhs(v + h, y5);

        const Cplx err_y = h * (e1 * k1.y + e3 * k3.y + e4 * k4.y + e5 * k5.y + e6 * k6.y +
                                e7 * k7.y);
        const Cplx err_dy = h * (e1 * k1.dy + e3 * k3.dy + e4 * k4.dy + e5 * k5.dy +
                                 e6 * k6.dy + e7 * k7.dy);
        const double sc_y = tol * (1.0 + std::max(std::abs(y.y), std::abs(y5.y)));
        const double sc_dy = tol * (1.0 + std::max(std::abs(y.dy), std::abs(y5.dy)));
        const double err = std::sqrt(0.5 * (std::norm(err_y / sc_y) + std::norm(err_dy / sc_dy)));

        if (err <= 1.0) {
            v += h;
            y = y5;
            out.grid.push_back(v);
            out.value.push_back(y.y);
            out.derivative.push_back(y.dy);
            out.second.push_back(k7.dy);  // FSAL stage: q(v) y(v)
            out.meta.steps++;
            out.meta.max_local_error = std::max(out.meta.max_local_error, err * tol);
            const double fac =
                0.9 * std::pow(std::max(err, 1e-10), -0.7 / 5.0) * std::pow(err_prev, 0.4 / 5.0);
            h *= std::clamp(fac, 0.2, 5.0);
            err_prev = std::max(err, 1e-10);
        } else {
            out.meta.rejected++;
            h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
        }
        if (std::abs(h) > h_max)
            h = dir * h_max;
        if (std::abs(h) < underflow)
            throw std::runtime_error("integrate: step size underflow near v = " +
                                     std::to_string(v));
    }

    if (dir < 0) {
        std::reverse(out.grid.begin(), out.grid.end());
        std::reverse(out.value.begin(), out.value.end());
        std::reverse(out.derivative.begin(), out.derivative.end());
        std::reverse(out.second.begin(), out.second.end());
    }
    return out;
}

Cplx FrobeniusSeed::value_at(double s) const {
    Cplx acc = 0;
    const double lsp = std::pow(s, rho);
    double sk = 1.0;
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        acc += coeffs[k] * sk;
        sk *= s;
    }
    return acc * lsp;
}

Cplx FrobeniusSeed::derivative_at(double s) const {
    Cplx acc = 0;
    const double lsp = std::pow(s, rho - 1.0);
    double sk = 1.0;
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        acc += (rho + static_cast<double>(k)) * coeffs[k] * sk;
        sk *= s;
    }
    return acc * lsp;
}

FrobeniusSeed frobenius_seed(double rho, double gamma, Cplx lambda, double s_start, int K) {
    if (s_start <= 0)
        throw std::invalid_argument("frobenius_seed: s_start must be positive");
    FrobeniusSeed seed;
    seed.rho = rho;
    seed.gamma = gamma;
    seed.lambda = lambda;
    seed.s_start = s_start;
    seed.coeffs.assign(static_cast<std::size_t>(K) + 1, Cplx(0));
    seed.coeffs[0] = 1.0;
    const double g2 = gamma * (gamma + 1.0);
    const Cplx I(0, 1);
    for (int k = 1; k <= K; ++k) {
        const double bracket = (rho + k) * (rho + k - 1.0) - g2;
        Cplx r = 0;
        if (k >= 3)
            r += I * seed.coeffs[static_cast<std::size_t>(k - 3)];
        if (k >= 2)
            r -= lambda * seed.coeffs[static_cast<std::size_t>(k - 2)];
        if (std::abs(bracket) < 1e-9) {
            if (std::abs(r) > 1e-13) {
                throw std::runtime_error(
                    "frobenius_seed: logarithmic resonance at k = " + std::to_string(k) +
                    " (vanishing indicial bracket with nonzero source)");
            }
            seed.coeffs[static_cast<std::size_t>(k)] = 0.0;  // benign: pick the series branch
        } else {
            seed.coeffs[static_cast<std::size_t>(k)] = r / bracket;
        }
    }
    seed.value = seed.value_at(s_start);
    seed.derivative = seed.derivative_at(s_start);
    seed.truncation_estimate =
        std::abs(seed.coeffs.back()) * std::pow(s_start, rho + K) /
        std::max(1e-300, std::abs(seed.value));
    return seed;
}

double wronskian_drift(const SolutionCurve& a, const SolutionCurve& b) {
    if (a.grid.size() != b.grid.size())
        throw std::invalid_argument("wronskian_drift: curves on different grids");
    const std::size_t n = a.grid.size();
    const std::size_t mid = n / 2;
    const Cplx wmid = a.value[mid] * b.derivative[mid] - a.derivative[mid] * b.value[mid];
    double worst = 0;
    const bool relative = std::abs(wmid) > 1e-300;
    for (std::size_t i = 0; i < n; ++i) {
        if (a.grid[i] != b.grid[i])
            throw std::invalid_argument("wronskian_drift: grid mismatch");
        const Cplx w = a.value[i] * b.derivative[i] - a.derivative[i] * b.value[i];
        const double d = relative ? std::abs(w - wmid) / std::abs(wmid) : std::abs(w);
        worst = std::max(worst, d);
    }
    return worst;
}

void taylor_step(const CoeffFn& coeff, double v0, Cplx y, Cplx dy, double h, Cplx& y_out,
                 Cplx& dy_out) {
    if (!coeff.q || !coeff.dq || !coeff.d2q)
        throw std::invalid_argument("taylor_step: needs q, dq and d2q");
    const Cplx q = coeff.q(v0), q1 = coeff.dq(v0), q2 = coeff.d2q(v0);
    /* psi'' = q psi, psi''' = q' psi + q psi',
     * psi'''' = (q'' + q^2) psi + 2 q' psi' */
    const Cplx c0 = y;
    const Cplx c1 = dy;
    const Cplx c2t = q * y / 2.0;
    const Cplx c3t = (q1 * y + q * dy) / 6.0;
    const Cplx c4t = ((q2 + q * q) * y + 2.0 * q1 * dy) / 24.0;
    y_out = c0 + h * (c1 + h * (c2t + h * (c3t + h * c4t)));
    dy_out = c1 + h * (2.0 * c2t + h * (3.0 * c3t + h * 4.0 * c4t));
}

} // namespace fpspec
