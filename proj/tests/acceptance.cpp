// Acceptance gate: one line per criterion, nonzero exit when any fails.
// Tolerances are pinned next to each block.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdarg>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "fpspec/airy.hpp"
#include "fpspec/basis0.hpp"
#include "fpspec/basis_eta.hpp"
#include "fpspec/diffusion.hpp"
#include "fpspec/eigenpair.hpp"
#include "fpspec/kappa.hpp"
#include "fpspec/model.hpp"
#include "fpspec/ode.hpp"

using namespace fpspec;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int id, const char* name, bool pass, const std::string& detail) {
    std::printf("[%s] %02d %-22s %s\n", pass ? "PASS" : "FAIL", id, name, detail.c_str());
    std::fflush(stdout);
    if (!pass)
        ++failures;
}

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<double> logspace(double lo, double hi, int n) {
    std::vector<double> out;
    for (int i = 0; i < n; ++i)
        out.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1)));
    return out;
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

SolutionCurve trim(const SolutionCurve& c, double lo, double hi) {
    SolutionCurve out;
    for (std::size_t i = 0; i < c.grid.size(); ++i) {
        if (c.grid[i] < lo || c.grid[i] > hi)
            continue;
        out.grid.push_back(c.grid[i]);
        out.value.push_back(c.value[i]);
        out.derivative.push_back(c.derivative[i]);
        if (!c.second.empty())
            out.second.push_back(c.second[i]);
    }
    return out;
}

const EigenResult& point_at(const ScanResult& s, double eta) {
    const EigenResult* best = &s.points.front();
    for (const auto& p : s.points)
        if (std::abs(p.eta - eta) < std::abs(best->eta - eta))
            best = &p;
    return *best;
}

} // namespace

int main() {
    const auto params3 = make_params(3.0);
    const auto params4 = make_params(4.0);
    const auto phi3 = make_phi(params3);
    const auto phi4 = make_phi(params4);
    const auto etas = logspace(1e-4, 1e-2, 10);

    // --- 1: scaling exponent from the eta scan -----------------------------
    const double kSlopeTol = 0.03, kScanBudget = 300.0;
    auto t0 = Clock::now();
    const ScanResult scan3 = scan(etas, params3, phi3, 4, false);
    const double time3 = seconds_since(t0);
    t0 = Clock::now();
    const ScanResult scan4 = scan(etas, params4, phi4, 4, false);
    const double time4 = seconds_since(t0);
    {
        const bool ok3 = std::abs(scan3.slope - 4.0 / 3.0) <= kSlopeTol && time3 <= kScanBudget;
        const bool ok4 = std::abs(scan4.slope - 5.0 / 3.0) <= kSlopeTol && time4 <= kScanBudget;
        report(1, "scaling-exponent", ok3 && ok4,
               fmt("beta=3 slope %.6f vs 4/3 +/- %.2f (%.1f s); beta=4 slope %.6f vs 5/3 (%.1f s)",
                   scan3.slope, kSlopeTol, time3, scan4.slope, time4));
    }

    // --- 2: kappa from shooting vs kappa from the scan ----------------------
    const double kKappaTol = 0.05, kKappaBudget = 120.0;
    {
        t0 = Clock::now();
        const double shoot3 = compute_kappa(solve_h0(params3), params3).kappa;
        const double shoot4 = compute_kappa(solve_h0(params4), params4).kappa;
        const ScanFit fit3 = kappa_from_scan(scan3.points, params3);
        const ScanFit fit4 = kappa_from_scan(scan4.points, params4);
        const double el = seconds_since(t0);
        const double rel3 = std::abs(shoot3 - fit3.kappa) / shoot3;
        const double rel4 = std::abs(shoot4 - fit4.kappa) / shoot4;
        const bool ok = shoot3 > 0 && shoot4 > 0 && rel3 <= kKappaTol && rel4 <= kKappaTol
                        && el <= kKappaBudget;
        report(2, "kappa-consistency", ok,
               fmt("beta=3 %.6f vs %.6f (gap %.2f%%); beta=4 %.6f vs %.6f (gap %.2f%%); %.1f s",
                   shoot3, fit3.kappa, 100 * rel3, shoot4, fit4.kappa, 100 * rel4, el));
    }

    // --- 3: eigenvalue against the brute-force oracle -----------------------
    const double kOracleTol = 1e-2, kOracleBudget = 120.0;
    t0 = Clock::now();
    const EigenResult mu3 = solve_mu(1e-3, params3, phi3);
    const OracleResult oracle8000 = oracle_mu(1e-3, params3, 0, 8000);
    {
        const double el = seconds_since(t0);
        const double rel = std::abs(mu3.mu - oracle8000.mu) / std::abs(mu3.mu);
        const bool ok = mu3.ok && rel <= kOracleTol && el <= kOracleBudget;
        report(3, "oracle-agreement", ok,
               fmt("mu %.6e vs oracle %.6e, rel gap %.2e <= %.0e (%.1f s)", mu3.mu.real(),
                   oracle8000.mu.real(), rel, kOracleTol, el));
    }

    // --- 4: conjugation symmetry through the oracle --------------------------
    const double kConjTol = 1e-8;
    {
        const OracleResult plus = oracle_mu(1e-3, params3);
        const OracleResult minus = oracle_mu(-1e-3, params3);
        const double rel = std::abs(plus.mu - std::conj(minus.mu)) / std::abs(plus.mu);
        report(4, "conjugation-symmetry", rel <= kConjTol,
               fmt("|mu(+) - conj(mu(-))| / |mu| = %.2e <= %.0e", rel, kConjTol));
    }

    // --- 5: eigenfunction converges to the equilibrium ----------------------
    const double kGapAt1em4 = 0.05;
    {
        const double g2 = point_at(scan3, 1e-2).l2_gap;
        const double g3 = mu3.l2_gap;
        const double g4 = point_at(scan3, 1e-4).l2_gap;
        const bool ok = g2 > g3 && g3 > g4 && g4 <= kGapAt1em4;
        report(5, "eigenfunction-limit", ok,
               fmt("l2 gaps %.4f > %.4f > %.4f, last <= %.2f", g2, g3, g4, kGapAt1em4));
    }

    // --- 6: Wronskian conservation -------------------------------------------
    const double kDriftTol = 1e-8;
    {
        const Basis0 base = build_basis(params3, solve_psi(params3, 100.0));
        const double drift0 = wronskian_drift(base.psi1, base.psi2);

        const double eta = 1e-3, window = 2.0 / std::cbrt(eta);
        double drift_eta = 0;
        for (const Cplx lam : {Cplx(0, 0), Cplx(0.05, 0), Cplx(-0.05, 0), Cplx(0, 0.05),
                               Cplx(0.03, -0.04)}) {
            const BasisEta be = build_basis_eta(solve_psi_eta(params3, lam, eta, 55.0));
            const double d = wronskian_drift(trim(be.psi1, -window, window),
                                             trim(be.psi2, -window, window));
            drift_eta = std::max(drift_eta, d);
        }
        const bool ok = drift0 <= kDriftTol && drift_eta <= kDriftTol;
        report(6, "wronskian-drift", ok,
               fmt("eta=0 pair %.2e, eta=1e-3 pairs %.2e, both <= %.0e", drift0, drift_eta,
                   kDriftTol));
    }

    // --- 7: Airy suite --------------------------------------------------------
    const double kAiryOrigin = 1e-10, kAiryWronskian = 1e-9, kAiryIdentity = 1e-10;
    {
        const AiryValue a0 = ai(Cplx(0, 0));
        const double v0 = std::abs(a0.ai - std::pow(3.0, -2.0 / 3.0) / std::tgamma(2.0 / 3.0));
        const double v1 =
            std::abs(a0.ai_prime + std::pow(3.0, -1.0 / 3.0) / std::tgamma(1.0 / 3.0));

        const Cplx j = std::polar(1.0, 2.0 * M_PI / 3.0);
        std::mt19937 rng(20240817);
        std::uniform_real_distribution<double> us(-10.0, 10.0), ul(-0.05, 0.05);
        double worst_w = 0, worst_id = 0;
        for (int k = 0; k < 1000; ++k) {
            const RotatedPair pair(Cplx(ul(rng), ul(rng)));
            const double s = us(rng);
            const RaySolution a = pair.a(s), b = pair.b(s), c = pair.c(s);
            worst_w = std::max(worst_w,
                               std::abs(a.val * b.der - a.der * b.val - RotatedPair::wronskian()));
            const double scale =
                std::max({1.0, std::abs(a.val), std::abs(b.val), std::abs(c.val)});
            const double dscale =
                std::max({1.0, std::abs(a.der), std::abs(b.der), std::abs(c.der)});
            worst_id = std::max(worst_id, std::abs(a.val + j * b.val + j * j * c.val) / scale);
            worst_id = std::max(worst_id, std::abs(a.der + j * b.der + j * j * c.der) / dscale);
        }
        const bool ok = v0 <= kAiryOrigin && v1 <= kAiryOrigin && worst_w <= kAiryWronskian
                        && worst_id <= kAiryIdentity;
        report(7, "airy-suite", ok,
               fmt("origin %.1e/%.1e, wronskian %.1e, identity %.1e", v0, v1, worst_w, worst_id));
    }

    // --- 8: right-inverse residuals -------------------------------------------
    const double kResidTol = 1e-6;
    {
        const Basis0 base = build_basis(params3, solve_psi(params3, 100.0));
        const BasisEta be = build_basis_eta(solve_psi_eta(params3, Cplx(0.02, 0), 1e-3, 55.0));
        auto phi_f = [&](double v) { return Cplx(phi3.phi(v), 0); };
        auto gauss = [](double v) { return Cplx(std::exp(-0.5 * v * v), 0); };

        const double r = std::max({apply_t0(phi_f, base).residual,
                                   apply_t0(gauss, base).residual,
                                   apply_t_eta(phi_f, be).residual,
                                   apply_t_eta(gauss, be).residual});
        report(8, "right-inverse", r <= kResidTol,
               fmt("max residual %.2e <= %.0e over {Phi, Gaussian} x {T0, T_eta}", r, kResidTol));
    }

    // --- 9: weighted kernel bound stays of one size ---------------------------
    const double kBoundRatio = 2.0;
    {
        const Cplx lam(0.02, 0);
        double lo = 1e300, hi = 0;
        for (const double eta : {1e-2, 1e-3, 1e-4}) {
            const BasisEta be =
                build_basis_eta(solve_psi_eta(params3, lam, eta, 5.5 / std::cbrt(eta)));
            const double b = weighted_kernel_bound(be, weight(params3, lam, eta, 1.0));
            lo = std::min(lo, b);
            hi = std::max(hi, b);
        }
        report(9, "weighted-kernel-bound", hi / lo <= kBoundRatio,
               fmt("sup-constants within [%.3f, %.3f], ratio %.2f <= %.1f", lo, hi, hi / lo,
                   kBoundRatio));
    }

    // --- 10: local structure of the connection solution -----------------------
    const double kCubicConst = 1.0, kImRef = -8.333e-3, kImTol = 0.05;
    {
        double c_sup = 0;
        for (const double beta : {3.0, 4.0}) {
            const auto p = make_params(beta);
            const H0Solution h0 = solve_h0(p);
            for (int i = 0; i <= 100; ++i) {
                const double s = 1e-3 * std::pow(100.0, i / 100.0);
                const double defect = std::abs(std::pow(s, p.gamma) * h0.eval(s) - Cplx(1, 0));
                c_sup = std::max(c_sup, defect / (s * s * s));
            }
        }
        const double im = std::imag(solve_h0(params4).eval(0.05));
        const double im_rel = std::abs(im - kImRef) / std::abs(kImRef);
        const bool ok = c_sup <= kCubicConst && im_rel <= kImTol;
        report(10, "h0-local-structure", ok,
               fmt("cubic-fit constant %.3f <= %.1f; Im H0(0.05)|gamma=2 = %.6e vs %.3e (%.1f%%)",
                   c_sup, kCubicConst, im, kImRef, 100 * im_rel));
    }

    // --- 11: kinetic mode decay vs the spectral gap ----------------------------
    const double kDecayTol = 0.02, kDecayBudget = 180.0;
    {
        t0 = Clock::now();
        const ModeDecay md = kinetic_mode_decay(params3, 1e-2, 4800.0);
        const double el = seconds_since(t0);
        const double ref = point_at(scan3, 1e-2).mu.real();
        const double rel = std::abs(md.rate - ref) / ref;
        const bool ok = rel <= kDecayTol && el <= kDecayBudget;
        report(11, "kinetic-mode-decay", ok,
               fmt("rate %.6e vs Re mu %.6e, rel %.2e <= %.0e (%.1f s)", md.rate, ref, rel,
                   kDecayTol, el));
    }

    // --- 12: penalty independence ----------------------------------------------
    const double kPhiTol = 5e-3;
    {
        const EigenResult alt = solve_mu(1e-3, params3, make_phi(params3, 1.0, 4.0));
        const double rel = std::abs(alt.mu - mu3.mu) / std::abs(mu3.mu);
        report(12, "phi-independence", alt.ok && rel <= kPhiTol,
               fmt("two penalties differ by %.2e <= %.0e", rel, kPhiTol));
    }

    std::printf("%d/12 criteria passed\n", 12 - failures);
    return failures == 0 ? 0 : 1;
}
