#pragma once

#include <Eigen/Dense>

namespace cohdisc::detail {

/// Symmetric banded matrix, LAPACK lower storage: ab(i - j, j) = A(i, j) for
/// j <= i <= j + bw. ab is (bw + 1) x n, column-major.
struct BandedSymmetric {
    int n = 0;
    int bw = 0;
    Eigen::MatrixXd ab;

    void resize(int n_, int bw_) {
        n = n_;
        bw = bw_;
        ab = Eigen::MatrixXd::Zero(bw + 1, n);
    }
    double& at(int off, int j) { return ab(off, j); }
    double at(int off, int j) const { return ab(off, j); }
};

/// In-place banded Cholesky (dpbtrf). Returns false if a pivot fails.
bool banded_cholesky_inplace(BandedSymmetric& s);

/// All eigenvalues of a symmetric banded matrix, ascending (dsbevd, values only).
Eigen::VectorXd banded_eigenvalues(const BandedSymmetric& m);

/// Congruence M = L^T diag(c) L for banded lower-triangular L; M keeps the bandwidth.
BandedSymmetric banded_congruence(const BandedSymmetric& l, const Eigen::VectorXd& c);

}  // namespace cohdisc::detail
