#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv) {
    using cohdisc::cli::RunConfig;
    RunConfig cfg;

    CLI::App app{"Minimum-error discrimination of coherent signals with an amplitude "
                 "known only through auxiliary copies: exact finite-n numerics, "
                 "closed-form asymptotics, and Monte Carlo validation"};
    app.require_subcommand(1);
    app.set_config("--config")->configurable(false);
    app.option_defaults()->configurable();

    app.add_option("--alpha0-min", cfg.alpha0_min, "Grid start (or the single point)");
    app.add_option("--alpha0-max", cfg.alpha0_max, "Grid end");
    app.add_option("--steps", cfg.steps, "Grid points / ladder length");
    app.add_option("--mu", cfg.mu, "Prior width");
    app.add_option("--n", cfg.n, "Auxiliary copies (ladder start for finite-n commands)");
    app.add_option("--quad-order", cfg.quad_order, "Gauss-Hermite order per coordinate");
    app.add_option("--trials", cfg.trials, "Monte Carlo trials");
    app.add_option("--seed", cfg.seed, "Random seed")->envname("COHDISC_SEED");
    app.add_option("--out", cfg.out_path, "Output CSV path");
    app.add_option("--workers", cfg.workers, "Worker threads (0: all cores)");
    app.add_option("--squeezing", cfg.squeezing,
                   "Heterodyne squeezing (default: optimal for alpha0)");
    app.add_option("--c-min", cfg.c_min, "Two-point measurement grid start");
    app.add_option("--c-max", cfg.c_max, "Two-point measurement grid end");
    app.add_flag("--raw", cfg.raw_outcomes, "Monte Carlo: sample binary outcomes");

    auto* risk = app.add_subcommand("risk-curve", "Excess risk of both strategies over alpha0");
    auto* sq = app.add_subcommand("squeezing", "Optimal heterodyne squeezing over alpha0");
    auto* fin = app.add_subcommand("finite-n", "Collective error: exact vs asymptotic ladder");
    auto* efin = app.add_subcommand("eand-finite-n",
                                    "Estimate-and-discriminate error: exact vs asymptotic ladder");
    auto* mc = app.add_subcommand("montecarlo", "Simulated estimate-and-discriminate chain");
    auto* tp = app.add_subcommand("twopoint", "Two-value amplitude model comparison");
    auto* st = app.add_subcommand("selftest", "Run the module invariant suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 2;
    }

    try {
        if (risk->parsed()) return cohdisc::cli::cmd_risk_curve(cfg);
        if (sq->parsed()) return cohdisc::cli::cmd_squeezing(cfg);
        if (fin->parsed()) return cohdisc::cli::cmd_finite_n(cfg);
        if (efin->parsed()) return cohdisc::cli::cmd_eand_finite_n(cfg);
        if (mc->parsed()) return cohdisc::cli::cmd_montecarlo(cfg);
        if (tp->parsed()) return cohdisc::cli::cmd_twopoint(cfg);
        if (st->parsed()) return cohdisc::cli::cmd_selftest();
    } catch (const std::ios_base::failure& ex) {
        std::cerr << "i/o error: " << ex.what() << "\n";
        return 2;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
    }
    return 2;
}
