#pragma once

#include <utility>

#include "cohdisc/fock.hpp"

namespace cohdisc {

/// Simplified model where the shifted amplitude takes only the two values
/// alpha0 +- 1/sqrt(n): estimating the auxiliary mode reduces to discriminating the
/// unit-amplitude coherent pair, and a two-outcome projective measurement in their
/// real span is fully general.

/// Overlap <1|-1> of the displaced auxiliary hypotheses.
double two_point_overlap();

/// The measurement is parametrised by c = <e+|1> alone.
struct TwoPointPovm {
    double c = 1.0;
    void validate() const;
};

/// Probabilities of correctly identifying each auxiliary hypothesis: (p+, p-).
std::pair<double, double> p_plus_minus(double c);

/// Outcome distribution rows: (P(+|u=+1), P(+|u=-1)).
std::pair<double, double> two_point_outcome_probs(double c);

/// Measurement minimising the local excess risk; at this point p+ = p-.
double optimal_c();

/// Asymptotic excess risk of estimate-then-discriminate with the c-measurement,
/// evaluated at n_surrogate: Bayes posterior over the two amplitude values per
/// outcome, trace-norm expansion of the posterior discrimination through second
/// order, averaged over outcomes, minus the known-amplitude baseline.
double two_point_local_excess_risk(double alpha0, double c, long n_surrogate);

/// Same risk from the raw outcome distribution; exposed because the risk is a
/// symmetric function of the two rows (swapping them reflects the measurement about
/// the bisector of the auxiliary hypotheses).
double two_point_local_excess_risk_probs(double alpha0, double p_plus_given_plus,
                                         double p_plus_given_minus, long n_surrogate);

/// Excess risk of the joint (collective) measurement in the two-value model,
/// extrapolated from exact finite-n Helstrom errors at n_surrogate and 4 n_surrogate.
double two_point_collective_excess_risk(double alpha0, long n_surrogate);

/// Known-amplitude baseline of the two-value model at finite n.
double two_point_pe_star(double alpha0, long n);

}  // namespace cohdisc
