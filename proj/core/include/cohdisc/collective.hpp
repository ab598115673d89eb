#pragma once

#include <utility>

#include "cohdisc/fock.hpp"
#include "cohdisc/localmodel.hpp"

namespace cohdisc {

/// Eigenvalue corrections of A + B/sqrt(n) + C/n through second order, listed in
/// ascending order of the unperturbed eigenvalue. first_order vanishes identically
/// for the assembled displaced-frame operators; it is reported so callers can assert
/// that structure where it applies.
struct PerturbationResult {
    Eigen::VectorXd zero_order;
    Eigen::VectorXd first_order;
    Eigen::VectorXd second_order;
};

/// Rayleigh-Schroedinger corrections for Hermitian A, B, C of equal dims.
///
/// Unperturbed levels closer than gap_tol are treated as a cluster: if B couples the
/// cluster internally the expansion is ill-defined and a DegeneracyError names the
/// colliding indices; otherwise the second-order block (C plus the B-resolvent term)
/// is diagonalised inside the cluster.
PerturbationResult second_order_perturbation(const FockMatrix& a, const FockMatrix& b,
                                             const FockMatrix& c, double gap_tol = 1e-12,
                                             double coupling_tol = 1e-10);

/// Closed-form overlap data of the eigenvectors of [-alpha0] - [0].
struct HelstromOverlaps {
    double ov0_plus, ov0_minus;  ///< <0|v+->
    double ov1_plus, ov1_minus;  ///< <1|v+->
    double ov2_plus, ov2_minus;  ///< <2|v+->
    double sq0_plus, sq0_minus;  ///< |<0|v+->|^2
    double sq1_plus, sq1_minus;  ///< |<1|v+->|^2
    double sq1_v0;               ///< |<1|v0>|^2, v0 the in-plane null eigenvector
    double sq1_v3, sq1_v4;       ///< |<1|v3,4>|^2 in the gauge with <v3|2> = 0
};

struct HelstromEigenstructure {
    FockKet v_plus;
    FockKet v_minus;
    HelstromOverlaps overlaps;
};

/// Nonzero eigenvectors of [-alpha0] - [0] with their closed-form overlaps.
/// alpha0 = 0 degenerates (the minus eigenvector loses normalisation).
HelstromEigenstructure helstrom_eigenstructure(double alpha0, int dim = 0);

/// Second-order eigenvalue sums (Lambda_+, Lambda_-) of the displaced-frame
/// collective operator; Lambda_- = -Lambda_+ exactly.
std::pair<double, double> lambda2_pm(double alpha0, double mu);

/// Truncation sizes for pe_opt_finite: thermal ladder length and signal-mode dim.
ModeDims collective_dims(const LocalModel& model, double tol = 1e-10);

/// Exact finite-n minimum-error probability of the joint strategy, computed in the
/// displaced frame.
///
/// Both averaged states are rank-one mixtures over a thermal ladder (the reflected
/// hypothesis becomes thermal x vacuum after a two-mode splitter rotation), so the
/// Helstrom operator is diagonalised exactly on its support: the union ladder gives a
/// banded Gram matrix, a banded Cholesky whitening, and a banded Hermitian
/// eigenproblem. This keeps the large-mu regime (thermal occupation ~ mu^2) at cost
/// O(K * bw^2) instead of a dense two-mode eigensolve.
double pe_opt_finite(const LocalModel& model, const ModeDims& dims);
double pe_opt_finite(const LocalModel& model);

/// Large-n closed form: leading Helstrom term plus the 1/n eigenvalue-sum correction.
double pe_opt_asymptotic(double alpha0, double mu, long n);

enum class PeStarMode { finite, asymptotic };

/// Baseline error probability when the amplitude is known exactly, averaged over the
/// prior: quadrature of the pure-state formula (finite) or its 1/n expansion
/// (asymptotic; requires alpha0 > 0).
double pe_star(double alpha0, double mu, long n, PeStarMode mode, int quad_order = 100);

/// Second-order coefficient of the baseline: n * (pe_star - leading) -> lambda_star / 2.
double lambda_star(double alpha0, double mu);

/// Width-free excess risk of the collective strategy.
double excess_risk_opt(double alpha0);

/// Excess risk at finite prior width; converges to excess_risk_opt as mu grows.
double excess_risk_opt_finite_mu(double alpha0, double mu);

/// Eliminates the leading 1/n residual from risk estimates at n and 4n.
inline double richardson_over_n(double at_n, double at_4n) {
    return (4.0 * at_4n - at_n) / 3.0;
}

/// One row of the strategy-comparison curve.
struct RiskCurvePoint {
    double alpha0;
    double r_opt;
    double r_eand;
    double r_star;
};

}  // namespace cohdisc
