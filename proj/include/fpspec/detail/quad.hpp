#ifndef FPSPEC_DETAIL_QUAD_HPP
#define FPSPEC_DETAIL_QUAD_HPP

#include <cmath>
#include <complex>
#include <stdexcept>

namespace fpspec {
namespace detail {

/* Gauss-Kronrod 15(7) nodes and weights on [-1,1]. */
inline constexpr double gk15_x[8] = {
    0.0,
    0.2077849550078984676006894037732449,
    0.4058451513773971669066064120769615,
    0.5860872354676911302941448382587296,
    0.7415311855993944398638647732807884,
    0.8648644233597690727897127886409262,
    0.9491079123427585245261896840478513,
    0.9914553711208126392068546975263285};
inline constexpr double gk15_wk[8] = {
    0.2094821410847278280129991748917143,
    0.2044329400752988924141619992346491,
    0.1903505780647854099132564024210137,
    0.1690047266392679028265834265985503,
    0.1406532597155259187451895905102379,
    0.1047900103222501838398763225415180,
    0.0630920926299785532907006631892043,
    0.0229353220105292249637320080589695};
inline constexpr double gk15_wg[4] = {
    0.4179591836734693877551020408163265,
    0.3818300505051189449503697754889751,
    0.2797053914892766679014677714237796,
    0.1294849661688696932706114326790820};

template <typename F>
void gk15_panel(const F& f, double a, double b, double& result, double& err) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    const double f0 = f(c);
    double kron = gk15_wk[0] * f0;
    double gauss = gk15_wg[0] * f0;
    for (int i = 1; i < 8; ++i) {
        const double fp = f(c + h * gk15_x[i]);
        const double fm = f(c - h * gk15_x[i]);
        kron += gk15_wk[i] * (fp + fm);
        if (i % 2 == 0)
            gauss += gk15_wg[i / 2] * (fp + fm);
    }
    result = kron * h;
    err = std::abs((kron - gauss) * h);
}

/// Adaptive Gauss-Kronrod on [a,b], simple bisection stack.
template <typename F>
double adaptive_gk(const F& f, double a, double b, double tol, int max_depth = 48) {
    struct Seg { double a, b; int depth; };
    Seg stack[256];
    int top = 0;
    stack[top++] = {a, b, 0};
    double total = 0;
    while (top > 0) {
        Seg s = stack[--top];
        double r, e;
        gk15_panel(f, s.a, s.b, r, e);
        const double scale = std::abs(r) + 1.0;
        if (e <= tol * scale * (s.b - s.a) / (b - a) || s.depth >= max_depth) {
            total += r;
        } else {
            if (top + 2 >= 256)
                throw std::runtime_error("adaptive_gk: subdivision stack overflow");
            const double m = 0.5 * (s.a + s.b);
            stack[top++] = {s.a, m, s.depth + 1};
            stack[top++] = {m, s.b, s.depth + 1};
        }
    }
    return total;
}

/* 4-point Gauss-Legendre on [-1,1], used for per-cell product quadrature. */
inline constexpr double gl4_x[2] = {0.3399810435848562648026658, 0.8611363115940525752239465};
inline constexpr double gl4_w[2] = {0.6521451548625461426269361, 0.3478548451374538573730639};

template <typename F>
auto gauss4(const F& f, double a, double b) -> decltype(f(a)) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    decltype(f(a)) s = gl4_w[0] * (f(c + h * gl4_x[0]) + f(c - h * gl4_x[0]));
    s += gl4_w[1] * (f(c + h * gl4_x[1]) + f(c - h * gl4_x[1]));
    return h * s;
}

/* 3-point Gauss-Legendre nodes/weights on [-1,1] (Nystrom cells). */
inline constexpr double gl3_x[3] = {-0.7745966692414833770358531, 0.0, 0.7745966692414833770358531};
inline constexpr double gl3_w[3] = {0.5555555555555555555555556, 0.8888888888888888888888889, 0.5555555555555555555555556};

} // namespace detail
} // namespace fpspec

#endif
