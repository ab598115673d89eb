#pragma once

#include <cstdint>
#include <string>

namespace cohdisc::cli {

struct RunConfig {
    std::string command;
    double alpha0_min = 0.3;
    double alpha0_max = 3.0;
    int steps = 28;
    double mu = 16.0;
    long n = 4000;
    int quad_order = 30;
    long trials = 100000;
    std::uint64_t seed = 12345;
    std::string out_path;
    int workers = 0;  ///< 0: one per available hardware thread
    double squeezing = std::numeric_limits<double>::quiet_NaN();  ///< NaN: optimal per alpha0
    double c_min = 0.9;
    double c_max = 1.0;
    bool raw_outcomes = false;
};

int cmd_risk_curve(const RunConfig& cfg);
int cmd_squeezing(const RunConfig& cfg);
int cmd_finite_n(const RunConfig& cfg);
int cmd_eand_finite_n(const RunConfig& cfg);
int cmd_montecarlo(const RunConfig& cfg);
int cmd_twopoint(const RunConfig& cfg);
int cmd_selftest();

}  // namespace cohdisc::cli
