#pragma once

#include <cstdint>
#include <utility>

#include "cohdisc/fock.hpp"
#include "cohdisc/localmodel.hpp"
#include "cohdisc/rng.hpp"

namespace cohdisc {

/// Squeezing of the generalised heterodyne projectors. r < 0 widens the projector
/// along the axis through the localisation point and the origin; phi is the squeezing
/// direction and stays 0 whenever alpha0 is taken real (the convention of every
/// local-model routine here).
struct HeterodyneSettings {
    double r = 0.0;
    double phi = 0.0;

    void validate() const;
    void require_axis_aligned(const char* who) const;  ///< throws unless phi == 0
};

/// Posterior moments of the local parameter under an axis-aligned heterodyne outcome:
/// I1 = E[u], I2 = E[|u|^2], I3 = E[u^2], plus the per-coordinate variances.
struct GaussianMoments {
    Amplitude I1;
    double I2;
    Amplitude I3;
    double var1;
    double var2;
};

/// Trace of the product of two single-mode Gaussian states,
/// 2/sqrt(det(VA+VB)) exp(-d^T (VA+VB)^{-1} d). Covariances are normalised so the
/// vacuum is the identity; displacement vectors are sqrt(2)(Re a, Im a).
double gaussian_overlap(const Eigen::Matrix2d& va, const Eigen::Vector2d& da,
                        const Eigen::Matrix2d& vb, const Eigen::Vector2d& db);

/// Covariance of the squeezed projector: R(phi) diag(e^{-2r}, e^{2r}) R(phi)^T.
Eigen::Matrix2d squeezed_covariance(const HeterodyneSettings& settings);

/// Outcome density of the generalised heterodyne measurement on |sqrt(n) alpha>.
double heterodyne_pdf(Amplitude beta_bar, Amplitude alpha, long n,
                      const HeterodyneSettings& settings);

/// The same density in local-model variables: outcome v given parameter u.
double local_outcome_pdf(Amplitude v, Amplitude u, const HeterodyneSettings& settings);

/// Draws a heterodyne outcome; in the phi-rotated frame the two coordinates are
/// independent Gaussians centred on sqrt(n) alpha with variances 1/(2(1 +- tanh r)).
Amplitude sample_heterodyne(Amplitude alpha, long n, const HeterodyneSettings& settings,
                            GaussianSampler& rng);

/// Closed-form product-Gaussian posterior of u given outcome v (phi = 0).
GaussianMoments local_posterior_moments(Amplitude v, double mu, const HeterodyneSettings& settings);

/// Marginal outcome density in local variables (phi = 0).
double pv_pdf(Amplitude v, double mu, const HeterodyneSettings& settings);

/// Exact finite-n posterior signal state: quadrature of [u/sqrt(n)] against the
/// posterior of u given v.
FockMatrix posterior_signal_state(Amplitude v, const LocalModel& model,
                                  const HeterodyneSettings& settings, int dim,
                                  int quad_order = 30);

/// Quadrature orders of the nested outcome/posterior integrals.
struct EandQuad {
    int outer_order = 30;
    int inner_order = 30;
};

/// Signal-mode dim covering the displaced posterior states for these settings.
int eand_signal_dim(const LocalModel& model, const HeterodyneSettings& settings,
                    const EandQuad& quad, double tol = 1e-12);

/// Which discrimination the signal receiver performs after estimation.
enum class EandReceiver {
    posterior_optimal,  ///< Helstrom test against the full posterior signal state
    plug_in             ///< Helstrom test against the coherent state at the point estimate
};

/// Finite-n error probability of estimate-then-discriminate, by nested quadrature in
/// the displaced frame.
double pe_eand_finite(const LocalModel& model, const HeterodyneSettings& settings,
                      int signal_dim, const EandQuad& quad = {},
                      EandReceiver receiver = EandReceiver::posterior_optimal);
double pe_eand_finite(const LocalModel& model, const HeterodyneSettings& settings);

/// Magnitudes of the two null-sector second-order eigenvalues entering the trace
/// norm; outcome-independent and nonnegative.
std::pair<double, double> eand_zero_sector(double alpha0, double mu,
                                           const HeterodyneSettings& settings);

/// 1/n coefficient of the estimate-and-discriminate error probability.
double delta_eand(double alpha0, double mu, const HeterodyneSettings& settings);

/// Leading term plus delta_eand/n at the model's n.
double pe_eand_asymptotic(const LocalModel& model, const HeterodyneSettings& settings);

/// Width-free excess risk of the estimate-and-discriminate strategy at squeezing r.
double excess_risk_eand(double alpha0, double r);

/// Squeezing minimising excess_risk_eand; negative for every alpha0 > 0 and
/// approaching zero from below at large alpha0.
double optimal_squeezing(double alpha0);

/// excess_risk_eand at its optimal squeezing.
double excess_risk_eand_min(double alpha0);

/// One Monte Carlo estimate with its standard error.
struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    long trials = 0;
    std::uint64_t seed = 0;
};

struct McOptions {
    bool raw_outcomes = false;  ///< sample binary decisions instead of conditional probabilities
    int workers = 1;
    int signal_dim = 0;  ///< 0: derive from the model and settings
    int posterior_order = 30;
    EandReceiver receiver = EandReceiver::posterior_optimal;
};

/// Simulates the full estimate-then-discriminate chain. By default each trial
/// accumulates the exact conditional error probability of the realised receiver
/// (Rao-Blackwellised over both the cell bit and the receiver outcome); the
/// raw_outcomes flag samples the binary decision instead. Trials are split into
/// fixed-size chunks with seeds derived from (seed, chunk); results do not depend on
/// the worker count.
McEstimate montecarlo_eand(const LocalModel& model, const HeterodyneSettings& settings,
                           long trials, std::uint64_t seed, const McOptions& opts = {});

}  // namespace cohdisc
