#pragma once

#include <vector>

#include "cohdisc/fock.hpp"

namespace cohdisc {

/// Statistical model around a localisation point: the true amplitude is
/// alpha0 + u/sqrt(n) with u drawn from an isotropic complex Gaussian of width mu.
/// alpha0 is stored as a nonnegative real; callers with a complex localisation point
/// rotate the phase out first (every quantity here depends on |alpha0| only).
struct LocalModel {
    double alpha0 = 1.0;
    double mu = 1.0;
    long n = 1000;

    void validate() const;
};

/// Per-mode truncation sizes for the two-mode averaged states.
struct ModeDims {
    int aux_dim;     ///< retained number states of the averaged (thermal) auxiliary mode
    int signal_dim;  ///< retained number states of the signal mode
};

/// Tensor-product Gauss-Hermite rule over the complex plane; weights absorb the
/// Gaussian prior density, so sum(weights) == 1.
struct QuadratureGrid {
    std::vector<Amplitude> nodes;
    std::vector<double> weights;
    int order = 0;
};

/// Prior density (1/(pi mu^2)) exp(-|u|^2/mu^2).
///
/// The width enters as e^{-|u|^2/mu^2} for complex u; the squared modulus is the only
/// reading consistent with the second-moment normalisations this module is tested
/// against.
double gaussian_prior_pdf(Amplitude u, double mu);

/// Nodes and weights exact for polynomial integrands up to degree 2*order - 1 in each
/// of (Re u, Im u), with per-coordinate variance mu^2/2.
QuadratureGrid build_quadrature(double mu, int order);

/// Geometric number-basis weights mu^{2k}/(mu^2+1)^{k+1} of the prior-averaged
/// coherent state (a thermal state of mean photon number mu^2).
std::vector<double> thermal_coefficients(double mu, int dim);

/// Mass of the thermal weight sequence at k >= dim.
double thermal_tail(double mu, int dim);

/// Truncation sizes meeting `tol` for the displaced-frame averaged states at the
/// given quadrature order (thermal tail on the auxiliary mode, number tail of the
/// largest displaced node on the signal mode).
ModeDims recommended_dims(const LocalModel& model, int quad_order, double tol = 1e-8);

/// Averaged state under the vacuum-signal hypothesis in the displaced frame:
/// thermal auxiliary mode tensored with the coherent projector at -alpha0.
FockMatrix averaged_sigma1(const LocalModel& model, const ModeDims& dims);

/// Averaged state under the reflected-signal hypothesis in the displaced frame,
/// assembled by quadrature (exact at finite n, no series expansion).
FockMatrix averaged_sigma2(const LocalModel& model, const ModeDims& dims, int quad_order = 40);

/// Orders 0, 1/sqrt(n), 1/n of the large-n expansion of averaged_sigma2.
struct Sigma2Expansion {
    FockMatrix zero;
    FockMatrix one;
    FockMatrix two;
};

Sigma2Expansion sigma2_expansion_terms(const LocalModel& model, const ModeDims& dims);

}  // namespace cohdisc
