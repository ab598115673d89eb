#include "commands.hpp"

#include <atomic>
#include <cmath>
#include <functional>
#include <iostream>
#include <limits>
#include <thread>
#include <vector>

#include "cohdisc/collective.hpp"
#include "cohdisc/eand.hpp"
#include "cohdisc/localmodel.hpp"
#include "cohdisc/twopoint.hpp"
#include "csv.hpp"

namespace cohdisc::cli {

namespace {

int effective_workers(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Runs fn(i) for i < count on a small pool; results land in caller-indexed storage,
/// so output order never depends on scheduling.
void parallel_for(int count, int workers, const std::function<void(int)>& fn) {
    workers = std::min(workers, count);
    if (workers <= 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int t = 0; t < workers; ++t) {
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

std::vector<double> alpha0_grid(const RunConfig& cfg) {
    if (cfg.steps < 1) throw InvalidInput("steps must be >= 1");
    if (!(cfg.alpha0_min > 0.0)) throw InvalidInput("alpha0-min must be > 0 for risk commands");
    if (!(cfg.alpha0_max >= cfg.alpha0_min)) throw InvalidInput("alpha0-max must be >= alpha0-min");
    std::vector<double> grid(cfg.steps);
    if (cfg.steps == 1) {
        grid[0] = cfg.alpha0_min;
        return grid;
    }
    const double step = (cfg.alpha0_max - cfg.alpha0_min) / (cfg.steps - 1);
    for (int i = 0; i < cfg.steps; ++i) grid[i] = cfg.alpha0_min + i * step;
    return grid;
}

CsvWriter open_csv(const RunConfig& cfg) {
    if (cfg.out_path.empty()) throw std::ios_base::failure("--out is required");
    CsvWriter csv(cfg.out_path);
    if (!csv.ok()) throw std::ios_base::failure("cannot open output path " + cfg.out_path);
    return csv;
}

double squeezing_for(const RunConfig& cfg, double alpha0) {
    return std::isnan(cfg.squeezing) ? optimal_squeezing(alpha0) : cfg.squeezing;
}

}  // namespace

int cmd_risk_curve(const RunConfig& cfg) {
    const auto grid = alpha0_grid(cfg);
    CsvWriter csv = open_csv(cfg);
    csv.header({"alpha0", "r_opt_risk", "r_eand_risk", "ratio"});
    std::vector<std::array<double, 3>> rows(grid.size());
    parallel_for(static_cast<int>(grid.size()), effective_workers(cfg.workers), [&](int i) {
        const double ro = excess_risk_opt(grid[i]);
        const double re = excess_risk_eand_min(grid[i]);
        rows[i] = {ro, re, re / ro};
    });
    for (std::size_t i = 0; i < grid.size(); ++i) {
        csv.row(std::vector<double>{grid[i], rows[i][0], rows[i][1], rows[i][2]});
    }
    return 0;
}

int cmd_squeezing(const RunConfig& cfg) {
    const auto grid = alpha0_grid(cfg);
    CsvWriter csv = open_csv(cfg);
    csv.header({"alpha0", "r_star"});
    for (double a : grid) csv.row(std::vector<double>{a, optimal_squeezing(a)});
    return 0;
}

int cmd_finite_n(const RunConfig& cfg) {
    CsvWriter csv = open_csv(cfg);
    csv.header({"n", "pe_finite", "pe_asymptotic", "n_times_residual"});
    long n = cfg.n;
    for (int k = 0; k < cfg.steps; ++k, n *= 4) {
        const LocalModel model{cfg.alpha0_min, cfg.mu, n};
        const double pf = pe_opt_finite(model);
        const double pa = pe_opt_asymptotic(model.alpha0, model.mu, n);
        csv.row({CsvWriter::format(n), CsvWriter::format(pf), CsvWriter::format(pa),
                 CsvWriter::format(n * (pf - pa))});
    }
    return 0;
}

int cmd_eand_finite_n(const RunConfig& cfg) {
    CsvWriter csv = open_csv(cfg);
    csv.header({"n", "pe_finite", "pe_asymptotic", "n_times_residual"});
    const double r = squeezing_for(cfg, cfg.alpha0_min);
    const HeterodyneSettings settings{r, 0.0};
    const EandQuad quad{cfg.quad_order, cfg.quad_order};
    long n = cfg.n;
    for (int k = 0; k < cfg.steps; ++k, n *= 4) {
        const LocalModel model{cfg.alpha0_min, cfg.mu, n};
        const int dim = eand_signal_dim(model, settings, quad);
        const double pf = pe_eand_finite(model, settings, dim, quad);
        const double pa = pe_eand_asymptotic(model, settings);
        csv.row({CsvWriter::format(n), CsvWriter::format(pf), CsvWriter::format(pa),
                 CsvWriter::format(n * (pf - pa))});
    }
    return 0;
}

int cmd_montecarlo(const RunConfig& cfg) {
    CsvWriter csv = open_csv(cfg);
    csv.header({"alpha0", "mu", "n", "r", "trials", "seed", "mc_mean", "mc_std_error",
                "pe_quadrature"});
    const double r = squeezing_for(cfg, cfg.alpha0_min);
    const HeterodyneSettings settings{r, 0.0};
    const LocalModel model{cfg.alpha0_min, cfg.mu, cfg.n};
    McOptions opts;
    opts.workers = effective_workers(cfg.workers);
    opts.raw_outcomes = cfg.raw_outcomes;
    opts.posterior_order = cfg.quad_order;
    const McEstimate est = montecarlo_eand(model, settings, cfg.trials, cfg.seed, opts);
    const EandQuad quad{cfg.quad_order, cfg.quad_order};
    const double ref = pe_eand_finite(model, settings, eand_signal_dim(model, settings, quad), quad);
    csv.row({CsvWriter::format(model.alpha0), CsvWriter::format(model.mu),
             CsvWriter::format(model.n), CsvWriter::format(r), CsvWriter::format(est.trials),
             CsvWriter::format(est.seed), CsvWriter::format(est.mean),
             CsvWriter::format(est.std_error), CsvWriter::format(ref)});
    return 0;
}

int cmd_twopoint(const RunConfig& cfg) {
    if (cfg.steps < 1) throw InvalidInput("steps must be >= 1");
    CsvWriter csv = open_csv(cfg);
    csv.header({"c", "p_plus", "p_minus", "local_risk", "collective_risk"});
    const double collective = two_point_collective_excess_risk(cfg.alpha0_min, cfg.n);
    std::vector<double> cs;
    for (int i = 0; i < cfg.steps; ++i) {
        cs.push_back(cfg.steps == 1
                         ? cfg.c_min
                         : cfg.c_min + i * (cfg.c_max - cfg.c_min) / (cfg.steps - 1));
    }
    cs.push_back(optimal_c());
    for (double c : cs) {
        const auto [pp, pm] = p_plus_minus(c);
        csv.row(std::vector<double>{c, pp, pm, two_point_local_excess_risk(cfg.alpha0_min, c, cfg.n),
                                    collective});
    }
    return 0;
}

namespace {

struct Check {
    const char* name;
    std::function<bool()> run;
};

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

}  // namespace

int cmd_selftest() {
    const std::vector<Check> checks = {
        {"fock: coherent overlap <1|-1> = e^-2",
         [] {
             const FockKet a = coherent_ket(1.0, 40), b = coherent_ket(-1.0, 40);
             return near((a.amp.adjoint() * b.amp)(0).real(), std::exp(-2.0), 1e-12);
         }},
        {"fock: trace norm of pure-state difference",
         [] {
             const auto k0 = coherent_ket(0.0, 40), ka = coherent_ket(1.0, 40);
             FockMatrix d;
             d.dims = {40};
             d.m = FockMatrix::pure(k0).m - FockMatrix::pure(ka).m;
             return near(trace_norm(d), 2.0 * std::sqrt(1.0 - std::exp(-1.0)), 1e-9);
         }},
        {"fock: displacement reproduces the coherent expansion",
         [] {
             const FockMatrix d = displacement_matrix({0.5, 0.0}, 40);
             FockKet vac;
             vac.amp = Eigen::VectorXcd::Zero(40);
             vac.amp[0] = 1.0;
             return (apply(d, vac).amp - coherent_ket(0.5, 40).amp).cwiseAbs().maxCoeff() < 1e-10;
         }},
        {"fock: concentrate folds n copies into sqrt(n)",
         [] { return near(concentrate(9, {0.3, 0.0}).real(), 0.9, 1e-12); }},
        {"localmodel: quadrature weights sum to 1",
         [] {
             const auto g = build_quadrature(1.0, 40);
             double s = 0.0;
             for (double w : g.weights) s += w;
             return near(s, 1.0, 1e-13);
         }},
        {"localmodel: second prior moment",
         [] {
             const auto g = build_quadrature(1.5, 40);
             double s = 0.0;
             for (std::size_t i = 0; i < g.nodes.size(); ++i) s += g.weights[i] * std::norm(g.nodes[i]);
             return near(s, 2.25, 1e-8);
         }},
        {"localmodel: thermal weights sum and mean",
         [] {
             const auto c = thermal_coefficients(2.0, 400);
             double s = 0.0, mean = 0.0;
             for (std::size_t k = 0; k < c.size(); ++k) {
                 s += c[k];
                 mean += k * c[k];
             }
             return near(s, 1.0, 1e-10) && near(mean, 4.0, 1e-8);
         }},
        {"collective: closed-form eigenvalue sums are antisymmetric",
         [] {
             const auto [lp, lm] = lambda2_pm(1.0, 1.0);
             return lp == -lm;
         }},
        {"collective: first-order corrections vanish on the assembled operators",
         [] {
             const LocalModel model{1.0, 1.0, 1000};
             const ModeDims dims{24, 6};
             const auto ex = sigma2_expansion_terms(model, dims);
             FockMatrix a = averaged_sigma1(model, dims);
             a.m -= ex.zero.m;
             FockMatrix b = ex.one, c = ex.two;
             b.m = -b.m;
             c.m = -c.m;
             const auto pert = second_order_perturbation(a, b, c);
             return pert.first_order.cwiseAbs().maxCoeff() < 1e-10;
         }},
        {"collective: finite-n matches the asymptotic form at large n",
         [] {
             const LocalModel model{1.0, 1.0, 100000};
             return near(pe_opt_finite(model), pe_opt_asymptotic(1.0, 1.0, 100000), 5e-9);
         }},
        {"eand: posterior second moment integrates to mu^2",
         [] {
             const HeterodyneSettings st{-0.3, 0.0};
             const auto g = build_quadrature(1.0, 60);
             double acc = 0.0;
             // E_v[I2] over p(v): reweight the prior-grid nodes by p(v)/G(v)
             for (std::size_t i = 0; i < g.nodes.size(); ++i) {
                 const double w = g.weights[i] * pv_pdf(g.nodes[i], 1.0, st) /
                                  gaussian_prior_pdf(g.nodes[i], 1.0);
                 acc += w * local_posterior_moments(g.nodes[i], 1.0, st).I2;
             }
             return near(acc, 1.0, 1e-6);
         }},
        {"eand: optimal squeezing is stationary",
         [] {
             const double r = optimal_squeezing(1.0);
             const double h = 1e-5;
             const double d = (excess_risk_eand(1.0, r + h) - excess_risk_eand(1.0, r - h)) / (2 * h);
             return std::abs(d) < 1e-8;
         }},
        {"eand: strategy ordering at finite n",
         [] {
             const LocalModel model{1.0, 1.0, 400};
             const HeterodyneSettings st{0.0, 0.0};
             const double po = pe_opt_finite(model);
             const double pe = pe_eand_finite(model, st);
             return po <= pe + 1e-9;
         }},
        {"twopoint: optimal measurement is symmetric",
         [] {
             const auto [pp, pm] = p_plus_minus(optimal_c());
             return std::abs(pp - pm) < 1e-10;
         }},
        {"twopoint: collective beats the best local measurement",
         [] {
             const double local = two_point_local_excess_risk(1.0, optimal_c(), 1000000);
             const double coll = two_point_collective_excess_risk(1.0, 4000);
             return coll < local;
         }},
    };

    int failures = 0;
    for (const auto& check : checks) {
        bool ok = false;
        std::string what;
        try {
            ok = check.run();
        } catch (const std::exception& ex) {
            what = ex.what();
        }
        if (ok) {
            std::cout << "[ok]   " << check.name << "\n";
        } else {
            ++failures;
            std::cout << "[FAIL] " << check.name;
            if (!what.empty()) std::cout << " (" << what << ")";
            std::cout << "\n";
        }
    }
    if (failures) std::cout << failures << " invariant(s) failed\n";
    return failures == 0 ? 0 : 1;
}

}  // namespace cohdisc::cli
