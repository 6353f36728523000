#ifndef FPSPEC_AIRY_HPP
#define FPSPEC_AIRY_HPP

#include <complex>
#include <utility>

namespace fpspec {

using Cplx = std::complex<double>;

/// One Airy evaluation: value, derivative and which regime produced it.
struct AiryValue {
    Cplx z;
    Cplx ai;
    Cplx ai_prime;
    enum class Branch { series, asymptotic, connection } branch = Branch::series;
};

/// Complex Airy function Ai and Ai' on the whole plane.
/// Maclaurin series (double-double accumulation) inside |z| <= r_switch,
/// the exponential asymptotic expansion outside for |arg z| <= 2*pi/3,
/// and the rotation identity Ai(z) = -j*Ai(j*z) - j^2*Ai(j^2*z) near the
/// negative real axis.
AiryValue ai(Cplx z);

/// Switch radius between the series and the asymptotic regimes.
double airy_switch_radius();

/// Regime evaluators exposed for cross-validation on the overlap annulus.
/// ai() picks between them by |z|; these force one regime regardless.
AiryValue ai_series_branch(Cplx z);
AiryValue ai_asymptotic_branch(Cplx z);

/// Value/derivative pair of one rotated-ray solution.
struct RaySolution {
    Cplx val;
    Cplx der;  // derivative with respect to the real abscissa s
};

/// The rotated Airy pair solving u'' = (i*s - lambda) u:
///   a(s) = Ai( e^{i pi/6} (s + i*lambda) ),
///   b(s) = Ai( e^{i pi/6} j (s + i*lambda) ),   j = e^{2 pi i/3},
/// plus the third rotation c(s) kept around for the identity test.
/// a decays as s -> +infinity, b decays as s -> -infinity, and the
/// s-Wronskian a b' - a' b equals 1/(2 pi) identically.
class RotatedPair {
  public:
    explicit RotatedPair(Cplx lambda) : lambda_(lambda) {}
    RaySolution a(double s) const;
    RaySolution b(double s) const;
    RaySolution c(double s) const;
    Cplx lambda() const { return lambda_; }
    static double wronskian() { return 0.15915494309189533576888376337251; /* 1/(2 pi) */ }

  private:
    Cplx lambda_;
};

inline RotatedPair rotated_pair(Cplx lambda) { return RotatedPair(lambda); }

/// Ratio |a(t) b(t)| / [ (1/4pi) |t + i lambda|^{-1/2} ]; tends to 1 for
/// large |t| (asymptotic product law), used as a diagnostic only.
double product_modulus_check(Cplx lambda, double t);

/// Solve the 2x2 system  value = ca*a(s) + cb*b(s), derivative = ca*a'(s) + cb*b'(s)
/// through the exact Wronskian. Returns (ca, cb).
std::pair<Cplx, Cplx> decompose_in_airy_basis(Cplx value, Cplx derivative, double s, Cplx lambda);

} // namespace fpspec

#endif
