#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "fpspec/airy.hpp"
#include "fpspec/basis0.hpp"
#include "fpspec/basis_eta.hpp"
#include "fpspec/detail/quad.hpp"
#include "fpspec/diffusion.hpp"
#include "fpspec/eigenpair.hpp"
#include "fpspec/kappa.hpp"
#include "fpspec/model.hpp"
#include "fpspec/ode.hpp"

using nlohmann::json;

namespace {

struct RunConfig {
    double beta = 3.0;
    std::vector<double> eta;   // explicit points; empty -> logspace range
    double eta_min = 1e-4;
    double eta_max = 1e-2;
    int points = 10;
    std::string out;           // empty -> stdout
    std::string format = "csv";
    int jobs = 1;
    double tol = 0;            // 0 keeps library defaults
    bool check_scan = false;
    unsigned seed = 20240817;
};

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void emit(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(path);
    if (!f)
        throw std::runtime_error("cannot open output file: " + path);
    f << text;
}

fpspec::ModelParams configured_params(const RunConfig& cfg) {
    fpspec::ModelParams p = fpspec::make_params(cfg.beta);
    if (cfg.tol > 0) {
        p.tol.scalar_rel = cfg.tol;
        p.tol.ode = cfg.tol;
        p.tol.quad = cfg.tol / 10;
    }
    return p;
}

std::vector<double> eta_list(const RunConfig& cfg) {
    if (!cfg.eta.empty())
        return cfg.eta;
    if (!(cfg.eta_min > 0) || !(cfg.eta_max >= cfg.eta_min) || cfg.points < 1)
        throw CLI::ValidationError("scan", "empty eta list: need --eta or a valid "
                                           "--eta-min/--eta-max/--points range");
    std::vector<double> etas;
    if (cfg.points == 1) {
        etas.push_back(cfg.eta_min);
        return etas;
    }
    const double step = std::log(cfg.eta_max / cfg.eta_min) / (cfg.points - 1);
    for (int i = 0; i < cfg.points; ++i)
        etas.push_back(cfg.eta_min * std::exp(step * i));
    return etas;
}

int run_kappa(const RunConfig& cfg) {
    const fpspec::ModelParams p = configured_params(cfg);
    const fpspec::H0Solution h0 = fpspec::solve_h0(p);
    const fpspec::KappaReport rep = fpspec::compute_kappa(h0, p);

    json j;
    j["beta"] = p.beta;
    j["alpha"] = p.alpha;
    j["kappa_shoot"] = rep.kappa;
    j["piece_series"] = rep.piece_series;
    j["piece_mid"] = rep.piece_mid;
    j["piece_far"] = rep.piece_far;
    j["err_series"] = rep.err_series;
    j["err_mid"] = rep.err_mid;
    j["err_far"] = rep.err_far;
    j["a_mix_re"] = h0.a_mix.real();
    j["a_mix_im"] = h0.a_mix.imag();
    j["far_b_over_a"] = std::abs(h0.far_b) / std::abs(h0.far_a);

    int code = 0;
    if (cfg.check_scan) {
        const fpspec::PenaltyFunction phi = fpspec::make_phi(p);
        const fpspec::ScanResult sr = fpspec::scan(eta_list(cfg), p, phi, cfg.jobs, false);
        const fpspec::ScanFit fit = fpspec::kappa_from_scan(sr.points, p);
        const double rel_gap = std::abs(rep.kappa - fit.kappa) / rep.kappa;
        j["kappa_scan"] = fit.kappa;
        j["free_slope"] = fit.free_slope;
        j["in_regime"] = fit.in_regime;
        j["rel_gap"] = rel_gap;
        if (!(rel_gap <= 0.05) || !fit.in_regime)
            code = 3;
    }

    if (cfg.format == "json") {
        emit(j.dump(2) + "\n", cfg.out);
    } else {
        std::ostringstream csv;
        csv << "key,value\n";
        for (const auto& [key, val] : j.items()) {
            if (val.is_number_float())
                csv << key << ',' << g17(val.get<double>()) << '\n';
            else
                csv << key << ',' << val.dump() << '\n';
        }
        emit(csv.str(), cfg.out);
    }
    return code;
}

int run_scan(const RunConfig& cfg) {
    const fpspec::ModelParams p = configured_params(cfg);
    const fpspec::PenaltyFunction phi = fpspec::make_phi(p);
    const std::vector<double> etas = eta_list(cfg);
    const fpspec::ScanResult sr = fpspec::scan(etas, p, phi, cfg.jobs, true);

    double kappa_fit = std::nan("");
    try {
        kappa_fit = fpspec::kappa_from_scan(sr.points, p).kappa;
    } catch (const std::exception&) {
        // too few points or too narrow a range; footer keeps nan
    }

    bool any_failed = false;
    for (const fpspec::EigenResult& r : sr.points)
        any_failed = any_failed || !r.ok;

    if (cfg.format == "json") {
        json j;
        j["points"] = json::array();
        for (const fpspec::EigenResult& r : sr.points) {
            json row;
            row["eta"] = r.eta;
            row["re_mu"] = r.mu.real();
            row["im_mu"] = r.mu.imag();
            row["oracle_re_mu"] = r.oracle.real();
            row["oracle_im_mu"] = r.oracle.imag();
            row["rel_gap"] = r.rel_gap;
            row["b_residual"] = r.b_residual;
            row["ok"] = r.ok;
            j["points"].push_back(row);
        }
        j["slope"] = sr.slope;
        j["kappa"] = kappa_fit;
        emit(j.dump(2) + "\n", cfg.out);
    } else {
        std::ostringstream csv;
        csv << "eta,re_mu,im_mu,oracle_re_mu,oracle_im_mu,rel_gap,b_residual\n";
        for (const fpspec::EigenResult& r : sr.points) {
            const double bad = std::nan("");
            csv << g17(r.eta) << ',' << g17(r.ok ? r.mu.real() : bad) << ','
                << g17(r.ok ? r.mu.imag() : bad) << ',' << g17(r.ok ? r.oracle.real() : bad)
                << ',' << g17(r.ok ? r.oracle.imag() : bad) << ','
                << g17(r.ok ? r.rel_gap : bad) << ',' << g17(r.ok ? r.b_residual : bad)
                << '\n';
        }
        csv << "slope," << g17(sr.slope) << '\n';
        csv << "kappa," << g17(kappa_fit) << '\n';
        emit(csv.str(), cfg.out);
    }
    return any_failed ? 3 : 0;
}

int run_selftest(const RunConfig& cfg) {
    struct Row {
        std::string name;
        bool ok = false;
        std::string detail;
    };
    std::vector<Row> rows;
    const auto check = [&rows](const std::string& name, const std::function<std::pair<bool, std::string>()>& fn) {
        Row r;
        r.name = name;
        try {
            const auto [ok, detail] = fn();
            r.ok = ok;
            r.detail = detail;
        } catch (const std::exception& e) {
            r.ok = false;
            r.detail = std::string("exception: ") + e.what();
        }
        rows.push_back(r);
    };

    const fpspec::ModelParams p3 = configured_params(cfg);

    check("airy-series-values", [&] {
        const fpspec::AiryValue a0 = fpspec::ai(fpspec::Cplx(0, 0));
        const double ai0 = std::pow(3.0, -2.0 / 3.0) / std::tgamma(2.0 / 3.0);
        const double aip0 = -std::pow(3.0, -1.0 / 3.0) / std::tgamma(1.0 / 3.0);
        const double err = std::abs(a0.ai.real() - ai0) + std::abs(a0.ai_prime.real() - aip0);
        return std::make_pair(err <= 1e-12, "|Ai(0)-ref|+|Ai'(0)-ref| = " + g17(err));
    });

    check("airy-three-solution-identity", [&] {
        const fpspec::Cplx j = std::polar(1.0, 2.0 * M_PI / 3.0);
        std::mt19937 rng(cfg.seed);
        std::uniform_real_distribution<double> us(-10.0, 10.0), ul(-0.05, 0.05);
        double worst = 0;
        for (int k = 0; k < 1000; ++k) {
            const fpspec::RotatedPair pair(fpspec::Cplx(ul(rng), ul(rng)));
            const double s = us(rng);
            const fpspec::RaySolution a = pair.a(s), b = pair.b(s), c = pair.c(s);
            const double scale =
                std::max({1.0, std::abs(a.val), std::abs(b.val), std::abs(c.val)});
            const double dscale =
                std::max({1.0, std::abs(a.der), std::abs(b.der), std::abs(c.der)});
            worst = std::max(worst, std::abs(a.val + j * b.val + j * j * c.val) / scale);
            worst = std::max(worst, std::abs(a.der + j * b.der + j * j * c.der) / dscale);
        }
        return std::make_pair(worst <= 1e-10, "sup |a + j b + j^2 c| = " + g17(worst));
    });

    check("psi-wronskian-drift", [&] {
        const fpspec::Basis0 base = fpspec::build_basis(p3, fpspec::solve_psi(p3));
        const double drift = fpspec::wronskian_drift(base.psi1, base.psi2);
        return std::make_pair(drift <= 1e-8, "drift = " + g17(drift));
    });

    check("t0-residual-phi", [&] {
        const fpspec::Basis0 base = fpspec::build_basis(p3, fpspec::solve_psi(p3));
        const fpspec::PenaltyFunction phi = fpspec::make_phi(p3);
        const auto f = [&phi](double v) { return fpspec::Cplx(phi.phi(v), 0); };
        const fpspec::green::ApplyResult res = fpspec::apply_t0(f, base);
        return std::make_pair(res.residual <= 1e-6, "residual = " + g17(res.residual));
    });

    check("weighted-kernel-bound-stability", [&] {
        double lo = 1e300, hi = 0;
        for (const double eta : {1e-2, 1e-3, 1e-4}) {
            const fpspec::Cplx lam(0.02, 0.0);
            const double v_max = 5.5 / std::cbrt(eta);
            const fpspec::BasisEta basis =
                fpspec::build_basis_eta(fpspec::solve_psi_eta(p3, lam, eta, v_max));
            const fpspec::WeightProfile prof = fpspec::weight(p3, lam, eta, 1.0);
            const double bound = fpspec::weighted_kernel_bound(basis, prof);
            lo = std::min(lo, bound);
            hi = std::max(hi, bound);
        }
        return std::make_pair(hi / lo <= 2.0, "bound variation = " + g17(hi / lo));
    });

    check("fixed-point-at-origin", [&] {
        const fpspec::PenaltyFunction phi = fpspec::make_phi(p3);
        const fpspec::PenalizedSolution sol =
            fpspec::solve_penalized(fpspec::Cplx(0, 0), 0.0, p3, phi);
        double worst = 0;
        for (const fpspec::Cplx& h : sol.h)
            worst = std::max(worst, std::abs(h - 1.0));
        return std::make_pair(worst <= 1e-3, "sup |h-1| = " + g17(worst));
    });

    check("kappa-positive-and-decay", [&] {
        std::string detail;
        bool ok = true;
        for (const double beta : {3.0, 4.0}) {
            const fpspec::ModelParams p = fpspec::make_params(beta);
            const fpspec::H0Solution h0 = fpspec::solve_h0(p);
            const fpspec::KappaReport rep = fpspec::compute_kappa(h0, p);
            const double ratio = std::abs(h0.far_b) / std::abs(h0.far_a);
            ok = ok && rep.kappa > 0 && ratio <= 1e-8;
            detail += "beta=" + g17(beta) + ": kappa=" + g17(rep.kappa) + " ";
        }
        return std::make_pair(ok, detail);
    });

    check("eigen-root-at-1e-3", [&] {
        const fpspec::PenaltyFunction phi = fpspec::make_phi(p3);
        const fpspec::EigenResult r = fpspec::solve_mu(1e-3, p3, phi);
        const bool ok = r.ok && r.b_residual <= 1e-8 && r.defect_l2 <= 1e-5 && r.mu.real() > 0;
        return std::make_pair(ok, "re_mu = " + g17(r.mu.real()) + ", defect = " + g17(r.defect_l2));
    });

    check("pv-gaussian-vs-fourier", [&] {
        const auto gauss = [](double v) { return std::exp(-v * v / 2); };
        const double pv = fpspec::frac_laplacian_pv(gauss, 0.0, p3.alpha);
        const double oracle = std::sqrt(2.0 / M_PI)
                              * fpspec::detail::adaptive_gk(
                                    [&](double xi) {
                                        return std::pow(xi, p3.alpha) * std::exp(-xi * xi / 2);
                                    },
                                    0.0, 12.0, 1e-11);
        const double rel = std::abs(pv - oracle) / std::abs(oracle);
        return std::make_pair(rel <= 1e-2, "rel = " + g17(rel));
    });

    check("fourier-evolve-semigroup", [&] {
        fpspec::DensityProfile prof;
        for (int k = -6; k <= 6; ++k) {
            prof.xi_grid.push_back(0.7 * k);
            prof.rho_hat.push_back(fpspec::Cplx(std::exp(-0.1 * k * k), 0.2 * k));
        }
        const fpspec::DensityProfile one = fpspec::evolve_rho_hat(
            fpspec::evolve_rho_hat(prof, 0.4, 0.36, p3.alpha), 0.9, 0.36, p3.alpha);
        const fpspec::DensityProfile two = fpspec::evolve_rho_hat(prof, 1.3, 0.36, p3.alpha);
        double worst = 0;
        for (std::size_t i = 0; i < one.rho_hat.size(); ++i)
            worst = std::max(worst,
                             std::abs(one.rho_hat[i] - two.rho_hat[i]) / std::abs(two.rho_hat[i]));
        return std::make_pair(worst <= 1e-14, "semigroup rel = " + g17(worst));
    });

    std::ostringstream table;
    bool all_ok = true;
    for (const Row& r : rows) {
        all_ok = all_ok && r.ok;
        table << (r.ok ? "PASS  " : "FAIL  ") << r.name;
        for (std::size_t i = r.name.size(); i < 36; ++i)
            table << ' ';
        table << r.detail << '\n';
    }
    table << (all_ok ? "all checks passed\n" : "SOME CHECKS FAILED\n");
    emit(table.str(), cfg.out);
    return all_ok ? 0 : 3;
}

void apply_config_file(const CLI::App& app, RunConfig& cfg) {
    const char* path = std::getenv("FPSPEC_CONFIG");
    if (!path || !*path)
        return;
    std::ifstream f(path);
    if (!f)
        throw CLI::ValidationError("FPSPEC_CONFIG", std::string("cannot read config file: ") + path);
    json j;
    f >> j;

    const auto absent = [&app](const std::string& flag) {
        const CLI::Option* opt = app.get_option_no_throw(flag);
        return opt == nullptr || opt->count() == 0;
    };
    if (j.contains("beta") && absent("--beta"))
        cfg.beta = j["beta"].get<double>();
    if (j.contains("eta") && absent("--eta")) {
        cfg.eta.clear();
        if (j["eta"].is_array())
            for (const auto& v : j["eta"])
                cfg.eta.push_back(v.get<double>());
        else
            cfg.eta.push_back(j["eta"].get<double>());
    }
    if (j.contains("eta_min") && absent("--eta-min"))
        cfg.eta_min = j["eta_min"].get<double>();
    if (j.contains("eta_max") && absent("--eta-max"))
        cfg.eta_max = j["eta_max"].get<double>();
    if (j.contains("points") && absent("--points"))
        cfg.points = j["points"].get<int>();
    if (j.contains("out") && absent("--out"))
        cfg.out = j["out"].get<std::string>();
    if (j.contains("format") && absent("--format"))
        cfg.format = j["format"].get<std::string>();
    if (j.contains("jobs") && absent("--jobs"))
        cfg.jobs = j["jobs"].get<int>();
    if (j.contains("tol") && absent("--tol"))
        cfg.tol = j["tol"].get<double>();
    if (j.contains("check_scan") && absent("--check-scan"))
        cfg.check_scan = j["check_scan"].get<bool>();
    if (j.contains("seed") && absent("--seed"))
        cfg.seed = j["seed"].get<unsigned>();
}

} // namespace

int main(int argc, char** argv) {
    RunConfig cfg;
    CLI::App app{"eigen-couple, fractional diffusion coefficient and scaling-law toolkit"};
    app.require_subcommand(1);

    app.add_option("--beta", cfg.beta, "tail exponent, in (1,5) excluding 2");
    app.add_option("--eta", cfg.eta, "explicit eta values (repeatable)");
    app.add_option("--eta-min", cfg.eta_min, "smallest eta of the log-spaced range");
    app.add_option("--eta-max", cfg.eta_max, "largest eta of the log-spaced range");
    app.add_option("--points", cfg.points, "number of log-spaced eta points");
    app.add_option("--out", cfg.out, "output path (default stdout)");
    app.add_option("--format", cfg.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--jobs", cfg.jobs, "scan worker threads");
    app.add_option("--tol", cfg.tol, "tolerance override for the solvers");
    app.add_flag("--check-scan", cfg.check_scan, "cross-check kappa against a scan fit");
    app.add_option("--seed", cfg.seed, "seed for randomized probe grids");

    CLI::App* sub_kappa = app.add_subcommand("kappa", "fractional diffusion coefficient");
    CLI::App* sub_scan = app.add_subcommand("scan", "eigenvalue scan over eta");
    CLI::App* sub_self = app.add_subcommand("selftest", "cross-module invariant table");
    for (CLI::App* sub : {sub_kappa, sub_scan, sub_self})
        sub->fallthrough();

    try {
        app.parse(argc, argv);
        apply_config_file(app, cfg);

        if (sub_kappa->parsed())
            return run_kappa(cfg);
        if (sub_scan->parsed())
            return run_scan(cfg);
        return run_selftest(cfg);
    } catch (const CLI::ParseError& e) {
        const int ret = app.exit(e);
        return ret == 0 ? 0 : 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "configuration rejected: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    }
}
