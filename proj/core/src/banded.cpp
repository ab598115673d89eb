#include "banded.hpp"

#include <lapacke.h>

#include <algorithm>

#include "cohdisc/errors.hpp"

namespace cohdisc::detail {

bool banded_cholesky_inplace(BandedSymmetric& s) {
    const lapack_int info = LAPACKE_dpbtrf(LAPACK_COL_MAJOR, 'L', s.n, s.bw, s.ab.data(),
                                           static_cast<lapack_int>(s.ab.rows()));
    if (info < 0) throw NumericalError("banded_cholesky: bad argument " + std::to_string(-info));
    return info == 0;
}

Eigen::VectorXd banded_eigenvalues(const BandedSymmetric& m) {
    Eigen::MatrixXd ab = m.ab;  // dsbevd overwrites the band
    Eigen::VectorXd w(m.n);
    double zdummy = 0.0;
    const lapack_int info =
        LAPACKE_dsbevd(LAPACK_COL_MAJOR, 'N', 'L', m.n, m.bw, ab.data(),
                       static_cast<lapack_int>(ab.rows()), w.data(), &zdummy, 1);
    if (info != 0) throw NumericalError("banded_eigenvalues: dsbevd info " + std::to_string(info));
    return w;
}

BandedSymmetric banded_congruence(const BandedSymmetric& l, const Eigen::VectorXd& c) {
    BandedSymmetric m;
    m.resize(l.n, l.bw);
    const int n = l.n, bw = l.bw;
    // M(i, j) = sum_k L(k, i) c(k) L(k, j); nonzero only for |i - j| <= bw.
    for (int j = 0; j < n; ++j) {
        const int imax = std::min(j + bw, n - 1);
        for (int i = j; i <= imax; ++i) {
            double acc = 0.0;
            const int kmax = std::min(j + bw, n - 1);
            for (int k = i; k <= kmax; ++k) {
                acc += l.at(k - i, i) * c[k] * l.at(k - j, j);
            }
            m.at(i - j, j) = acc;
        }
    }
    return m;
}

}  // namespace cohdisc::detail
