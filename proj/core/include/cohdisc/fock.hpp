#pragma once

#include <complex>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "cohdisc/errors.hpp"

namespace cohdisc {

/// A point in phase space: coherent amplitude, measurement outcome, or local parameter.
using Amplitude = std::complex<double>;

/// Pure state in a truncated number basis. Truncation may only lose norm, never add it.
struct FockKet {
    Eigen::VectorXcd amp;

    int dim() const { return static_cast<int>(amp.size()); }
    /// 1 - <psi|psi>; nonnegative up to rounding for states truncated from a unit vector.
    double norm_deficit() const { return 1.0 - amp.squaredNorm(); }
};

/// Dense operator on one or more truncated bosonic modes.
///
/// One container, two contracts: Hermitian-flagged values obey the Hermiticity and
/// (for density operators) positivity invariants; unitary values (displacements) carry
/// hermitian = false and skip those checks.
struct FockMatrix {
    std::vector<int> dims;
    Eigen::MatrixXcd m;
    double trace_deficit = 0.0;  ///< probability mass lost to truncation (analytic bound)
    bool hermitian = true;

    int total_dim() const { return static_cast<int>(m.rows()); }

    static FockMatrix identity(std::vector<int> dims);
    /// Rank-one projector [psi] on a single mode.
    static FockMatrix pure(const FockKet& psi);
};

/// Coherent-state expansion e^{-|a|^2/2} a^k / sqrt(k!) over k < dim.
FockKet coherent_ket(Amplitude alpha, int dim);

/// Exponential of (alpha a^dag - alpha^* a) on the truncated space. Unitary on that
/// space; trace_deficit records the analytic number-distribution tail of the target
/// coherent state at this dim, which bounds how faithfully D(alpha)|0> matches it.
FockMatrix displacement_matrix(Amplitude alpha, int dim);

/// Amplitude map of a two-port splitter with transmissivity T:
/// (a, b) -> (sqrt(T) a + sqrt(R) b, -sqrt(R) a + sqrt(T) b), R = 1 - T.
std::pair<Amplitude, Amplitude> beam_splitter_pair(Amplitude a, Amplitude b, double T);

/// Folds n equal-amplitude modes into one of amplitude sqrt(n) alpha via the
/// T = k/(k+1) splitter schedule, checking the discarded port stays empty.
Amplitude concentrate(long n, Amplitude alpha);

/// Kronecker product; dims concatenate, deficits combine.
FockMatrix tensor(const FockMatrix& a, const FockMatrix& b);

/// Marginal of a two-mode operator (keep = 0 or 1).
FockMatrix partial_trace(const FockMatrix& m, int keep);

/// Sum of absolute eigenvalues of a Hermitian operator.
double trace_norm(const FockMatrix& m);

/// Minimum-error probability for discriminating rho1 (prior prior1) from rho2:
/// (1/2)(1 - ||prior1 rho1 - (1-prior1) rho2||_1).
double helstrom_error(const FockMatrix& rho1, const FockMatrix& rho2, double prior1);

/// Orthogonal projector onto the nonnegative eigenspace of rho1 - rho2.
FockMatrix helstrom_projector(const FockMatrix& rho1, const FockMatrix& rho2);

FockKet apply(const FockMatrix& m, const FockKet& psi);

/// Re tr(rho [psi]) = <psi|rho|psi> for Hermitian rho.
double pure_expectation(const FockMatrix& rho, const FockKet& psi);

double real_trace(const FockMatrix& m);

/// Smallest dim whose Poisson(mean) upper tail bound drops below tol.
int poisson_tail_dim(double mean, double tol);

/// Upper bound on the Poisson(mean) mass at k >= dim.
double poisson_tail_bound(double mean, int dim);

}  // namespace cohdisc
