#include "fpspec/airy.hpp"

#include <cmath>
#include <stdexcept>

namespace fpspec {

namespace {

/* ------------------------------------------------------------------ */
/* Double-double helpers.  The Maclaurin series of Ai cancels like     */
/* exp((4/3)|z|^{3/2}) along the positive axis, which eats up to 17    */
/* digits at the switch radius; plain doubles cannot carry that.       */
/* Error-free transformations via std::fma keep ~31 digits.            */

struct DD {
    double hi = 0, lo = 0;
};

inline DD dd_from(double x) { return {x, 0.0}; }

inline DD two_sum(double a, double b) {
    double s = a + b;
    double bb = s - a;
    double err = (a - (s - bb)) + (b - bb);
    return {s, err};
}

inline DD dd_add(DD a, DD b) {
    DD s = two_sum(a.hi, b.hi);
    s.lo += a.lo + b.lo;
    DD r = two_sum(s.hi, s.lo);
    return r;
}

inline DD dd_neg(DD a) { return {-a.hi, -a.lo}; }

inline DD two_prod(double a, double b) {
    double p = a * b;
    double err = std::fma(a, b, -p);
    return {p, err};
}

inline DD dd_mul(DD a, DD b) {
    DD p = two_prod(a.hi, b.hi);
    p.lo += a.hi * b.lo + a.lo * b.hi;
    DD r = two_sum(p.hi, p.lo);
    return r;
}

inline DD dd_mul_d(DD a, double b) {
    DD p = two_prod(a.hi, b);
    p.lo += a.lo * b;
    DD r = two_sum(p.hi, p.lo);
    return r;
}

inline DD dd_div_d(DD a, double b) {
    double q1 = a.hi / b;
    DD p = two_prod(q1, b);
    double r = ((a.hi - p.hi) - p.lo) + a.lo;
    double q2 = r / b;
    DD s = two_sum(q1, q2);
    return s;
}

struct CDD {
    DD re, im;
};

inline CDD cdd_from(Cplx z) { return {dd_from(z.real()), dd_from(z.imag())}; }

inline CDD cdd_add(CDD a, CDD b) { return {dd_add(a.re, b.re), dd_add(a.im, b.im)}; }

inline CDD cdd_mul(CDD a, CDD b) {
    DD re = dd_add(dd_mul(a.re, b.re), dd_neg(dd_mul(a.im, b.im)));
    DD im = dd_add(dd_mul(a.re, b.im), dd_mul(a.im, b.re));
    return {re, im};
}

inline CDD cdd_div_d(CDD a, double b) { return {dd_div_d(a.re, b), dd_div_d(a.im, b)}; }

inline Cplx to_cplx(const CDD& a) { return Cplx(a.re.hi + a.re.lo, a.im.hi + a.im.lo); }

inline double cdd_abs(const CDD& a) {
    return std::hypot(a.re.hi, a.im.hi);
}

/* Ai(0) and Ai'(0) as double-double pairs. */
const DD kAi0 = {3.55028053887817219e-01, 2.05233632436211994e-17};
const DD kAip0 = {-2.58819403792806824e-01, 2.52224311161083207e-17};

const double kRSwitch = 8.0;
const double kTwoPi = 6.2831853071795864769;
const Cplx kJ = Cplx(-0.5, 0.86602540378443864676);    // e^{2 pi i/3}
const Cplx kJ2 = Cplx(-0.5, -0.86602540378443864676);  // e^{-2 pi i/3}
const Cplx kRot6 = Cplx(0.86602540378443864676, 0.5);  // e^{i pi/6}

/* Maclaurin series Ai = Ai(0) f(z) + Ai'(0) g(z),
 * f = sum 3^k (1/3)_k z^{3k} / (3k)!,  g = sum 3^k (2/3)_k z^{3k+1} / (3k+1)!.
 * Term ratios: f_{k+1}/f_k = z^3/((3k+2)(3k+3)), g_{k+1}/g_k = z^3/((3k+3)(3k+4)).
 * Derivatives accumulate sum (3k) f_k and sum (3k+1) g_k, divided by z at the end.
 */
AiryValue ai_series(Cplx z) {
    AiryValue out;
    out.z = z;
    out.branch = AiryValue::Branch::series;
    if (std::abs(z) < 1e-300) {
        out.ai = Cplx(kAi0.hi + kAi0.lo, 0);
        out.ai_prime = Cplx(kAip0.hi + kAip0.lo, 0);
        return out;
    }
    const CDD z3 = cdd_mul(cdd_mul(cdd_from(z), cdd_from(z)), cdd_from(z));
    CDD tf = {dd_from(1.0), dd_from(0.0)};  // current f term
    CDD tg = cdd_from(z);                   // current g term
    CDD f = tf, g = tg;
    CDD df = {dd_from(0.0), dd_from(0.0)};  // sum 3k * f_k
    CDD dg = tg;                            // sum (3k+1) * g_k
    double peak = 1.0;
    for (int k = 0; k < 220; ++k) {
        tf = cdd_div_d(cdd_mul(tf, z3), (3.0 * k + 2.0) * (3.0 * k + 3.0));
        tg = cdd_div_d(cdd_mul(tg, z3), (3.0 * k + 3.0) * (3.0 * k + 4.0));
        f = cdd_add(f, tf);
        g = cdd_add(g, tg);
        df = cdd_add(df, cdd_mul(tf, {dd_from(3.0 * k + 3.0), dd_from(0.0)}));
        dg = cdd_add(dg, cdd_mul(tg, {dd_from(3.0 * k + 4.0), dd_from(0.0)}));
        const double m = std::max(cdd_abs(tf), cdd_abs(tg));
        peak = std::max(peak, m);
        if (m < 1e-36 * peak)
            break;
    }
    /* combine in dd: the cancellation between the two sums is the whole point,
     * so divide by z only after it has happened */
    const CDD cAi0 = {kAi0, dd_from(0.0)};
    const CDD cAip0 = {kAip0, dd_from(0.0)};
    out.ai = to_cplx(cdd_add(cdd_mul(f, cAi0), cdd_mul(g, cAip0)));
    out.ai_prime = to_cplx(cdd_add(cdd_mul(df, cAi0), cdd_mul(dg, cAip0))) / z;
    return out;
}

/* Poincare expansion for |arg z| <= 2 pi/3:
 * Ai ~ exp(-zeta)/(2 sqrt(pi) z^{1/4}) * sum (-1)^k c_k zeta^{-k},
 * Ai' ~ -z^{1/4} exp(-zeta)/(2 sqrt(pi)) * sum (-1)^k d_k zeta^{-k},
 * zeta = (2/3) z^{3/2}, c_0 = d_0 = 1,
 * c_{k+1} = c_k (6k+1)(6k+5)/(72(k+1)),  d_k = -c_k (6k+1)/(6k-1).
 * Truncated at the smallest term (divergent series).
 */
AiryValue ai_asymptotic(Cplx z) {
    AiryValue out;
    out.z = z;
    out.branch = AiryValue::Branch::asymptotic;
    const Cplx zsqrt = std::sqrt(z);
    const Cplx zeta = (2.0 / 3.0) * z * zsqrt;
    const Cplx izeta = 1.0 / zeta;
    Cplx s_ai(1, 0), s_aip(1, 0);
    double ck = 1.0;
    Cplx pw(1, 0);
    double prev = 1e300;
    for (int k = 0; k < 40; ++k) {
        const double ck1 = ck * (6.0 * k + 1.0) * (6.0 * k + 5.0) / (72.0 * (k + 1.0));
        const double dk1 = -ck1 * (6.0 * k + 7.0) / (6.0 * k + 5.0);
        pw *= -izeta;
        const double mag = ck1 * std::abs(pw);
        if (mag >= prev)
            break;  // passed the smallest term
        s_ai += ck1 * pw;
        s_aip += dk1 * pw;
        prev = mag;
        ck = ck1;
    }
    const double inv2sqrtpi = 0.28209479177387814347;  // 1/(2 sqrt(pi))
    const Cplx zq = std::sqrt(zsqrt);                  // z^{1/4}
    const Cplx e = std::exp(-zeta);
    out.ai = inv2sqrtpi * e / zq * s_ai;
    out.ai_prime = -inv2sqrtpi * e * zq * s_aip;
    return out;
}

} // namespace

double airy_switch_radius() { return kRSwitch; }

AiryValue ai_series_branch(Cplx z) { return ai_series(z); }
AiryValue ai_asymptotic_branch(Cplx z) { return ai_asymptotic(z); }

AiryValue ai(Cplx z) {
    const double r = std::abs(z);
    if (r <= kRSwitch)
        return ai_series(z);
    const double arg = std::arg(z);
    if (std::abs(arg) <= 2.0943951023931954923)  // 2 pi/3
        return ai_asymptotic(z);
    /* near the negative axis: Ai(z) = -j Ai(jz) - j^2 Ai(j^2 z); both rotated
     * arguments fall back into the asymptotic sector */
    const AiryValue a1 = ai_asymptotic(kJ * z);
    const AiryValue a2 = ai_asymptotic(kJ2 * z);
    AiryValue out;
    out.z = z;
    out.branch = AiryValue::Branch::connection;
    out.ai = -kJ * a1.ai - kJ2 * a2.ai;
    out.ai_prime = -kJ * kJ * a1.ai_prime - kJ2 * kJ2 * a2.ai_prime;
    return out;
}

RaySolution RotatedPair::a(double s) const {
    const Cplx u = kRot6 * (Cplx(s, 0) + Cplx(0, 1) * lambda_);
    const AiryValue v = ai(u);
    return {v.ai, kRot6 * v.ai_prime};
}

RaySolution RotatedPair::b(double s) const {
    const Cplx u = kRot6 * kJ * (Cplx(s, 0) + Cplx(0, 1) * lambda_);
    const AiryValue v = ai(u);
    return {v.ai, kRot6 * kJ * v.ai_prime};
}

RaySolution RotatedPair::c(double s) const {
    const Cplx u = kRot6 * kJ2 * (Cplx(s, 0) + Cplx(0, 1) * lambda_);
    const AiryValue v = ai(u);
    return {v.ai, kRot6 * kJ2 * v.ai_prime};
}

double product_modulus_check(Cplx lambda, double t) {
    const RotatedPair pair(lambda);
    const double prod = std::abs(pair.a(t).val * pair.b(t).val);
    const double target = std::pow(std::abs(Cplx(t, 0) + Cplx(0, 1) * lambda), -0.5) / (2.0 * kTwoPi);
    return prod / target;
}

std::pair<Cplx, Cplx> decompose_in_airy_basis(Cplx value, Cplx derivative, double s, Cplx lambda) {
    const RotatedPair pair(lambda);
    const RaySolution pa = pair.a(s), pb = pair.b(s);
    /* Cramer with the exact Wronskian 1/(2 pi) as determinant */
    const Cplx ca = kTwoPi * (value * pb.der - derivative * pb.val);
    const Cplx cb = kTwoPi * (derivative * pa.val - value * pa.der);
    return {ca, cb};
}

} // namespace fpspec
