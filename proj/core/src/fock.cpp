#include "cohdisc/fock.hpp"

#include <cmath>
#include <limits>

namespace cohdisc {

namespace {

void require_finite(Amplitude a, const char* who) {
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
        throw InvalidInput(std::string(who) + ": non-finite amplitude");
    }
}

// Hermiticity guard used by the eigenvalue-based operations.
void require_hermitian(const FockMatrix& m, const char* who) {
    if (!m.hermitian) throw InvalidInput(std::string(who) + ": operator not Hermitian-flagged");
    const double scale = std::max(1.0, m.m.cwiseAbs().maxCoeff());
    const double dev = (m.m - m.m.adjoint()).cwiseAbs().maxCoeff();
    if (dev > 1e-10 * scale) {
        throw NumericalError(std::string(who) + ": Hermiticity deviation " + std::to_string(dev));
    }
}

}  // namespace

FockMatrix FockMatrix::identity(std::vector<int> dims) {
    int d = 1;
    for (int x : dims) d *= x;
    FockMatrix out;
    out.dims = std::move(dims);
    out.m = Eigen::MatrixXcd::Identity(d, d);
    return out;
}

FockMatrix FockMatrix::pure(const FockKet& psi) {
    FockMatrix out;
    out.dims = {psi.dim()};
    out.m = psi.amp * psi.amp.adjoint();
    out.trace_deficit = std::max(0.0, psi.norm_deficit());
    return out;
}

FockKet coherent_ket(Amplitude alpha, int dim) {
    require_finite(alpha, "coherent_ket");
    if (dim < 1) throw InvalidInput("coherent_ket: dim must be >= 1");
    FockKet out;
    out.amp.resize(dim);
    out.amp[0] = std::exp(-0.5 * std::norm(alpha));
    for (int k = 1; k < dim; ++k) out.amp[k] = out.amp[k - 1] * alpha / std::sqrt(double(k));
    return out;
}

FockMatrix displacement_matrix(Amplitude alpha, int dim) {
    require_finite(alpha, "displacement_matrix");
    if (dim < 1) throw InvalidInput("displacement_matrix: dim must be >= 1");
    // alpha a^dag - alpha^* a is skew-Hermitian; exponentiate through the Hermitian
    // form H = -i K so the result is exactly unitary on the truncated space.
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
    const Amplitude mi(0.0, -1.0);
    for (int k = 0; k + 1 < dim; ++k) {
        const double lad = std::sqrt(double(k + 1));
        h(k + 1, k) = mi * alpha * lad;
        h(k, k + 1) = std::conj(h(k + 1, k));
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    const Eigen::VectorXd w = es.eigenvalues();
    Eigen::VectorXcd phases(dim);
    for (int j = 0; j < dim; ++j) phases[j] = std::exp(Amplitude(0.0, w[j]));
    FockMatrix out;
    out.dims = {dim};
    out.m = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
    out.hermitian = false;
    out.trace_deficit = poisson_tail_bound(std::norm(alpha), dim);
    return out;
}

std::pair<Amplitude, Amplitude> beam_splitter_pair(Amplitude a, Amplitude b, double T) {
    require_finite(a, "beam_splitter_pair");
    require_finite(b, "beam_splitter_pair");
    if (!(T >= 0.0 && T <= 1.0)) throw InvalidInput("beam_splitter_pair: T outside [0,1]");
    const double st = std::sqrt(T), sr = std::sqrt(1.0 - T);
    return {st * a + sr * b, -sr * a + st * b};
}

Amplitude concentrate(long n, Amplitude alpha) {
    require_finite(alpha, "concentrate");
    if (n < 1) throw InvalidInput("concentrate: n must be >= 1");
    Amplitude acc = alpha;
    for (long k = 1; k < n; ++k) {
        auto [joined, leak] = beam_splitter_pair(acc, alpha, double(k) / double(k + 1));
        const double tol = 1e-12 * std::max(1.0, std::abs(joined));
        if (std::abs(leak) > tol) {
            throw NumericalError("concentrate: nonzero amplitude left in the discarded port");
        }
        acc = joined;
    }
    return acc;
}

FockMatrix tensor(const FockMatrix& a, const FockMatrix& b) {
    FockMatrix out;
    out.dims = a.dims;
    out.dims.insert(out.dims.end(), b.dims.begin(), b.dims.end());
    const long da = a.m.rows(), db = b.m.rows();
    out.m.resize(da * db, da * db);
    for (long i = 0; i < da; ++i)
        for (long j = 0; j < da; ++j)
            out.m.block(i * db, j * db, db, db) = a.m(i, j) * b.m;
    out.trace_deficit = 1.0 - (1.0 - a.trace_deficit) * (1.0 - b.trace_deficit);
    out.hermitian = a.hermitian && b.hermitian;
    return out;
}

FockMatrix partial_trace(const FockMatrix& m, int keep) {
    if (m.dims.size() != 2) throw InvalidInput("partial_trace: expected a two-mode operator");
    if (keep != 0 && keep != 1) throw InvalidInput("partial_trace: keep must be 0 or 1");
    const int d0 = m.dims[0], d1 = m.dims[1];
    FockMatrix out;
    out.trace_deficit = m.trace_deficit;
    out.hermitian = m.hermitian;
    if (keep == 0) {
        out.dims = {d0};
        out.m = Eigen::MatrixXcd::Zero(d0, d0);
        for (int i = 0; i < d0; ++i)
            for (int j = 0; j < d0; ++j)
                for (int k = 0; k < d1; ++k) out.m(i, j) += m.m(i * d1 + k, j * d1 + k);
    } else {
        out.dims = {d1};
        out.m = Eigen::MatrixXcd::Zero(d1, d1);
        for (int i = 0; i < d1; ++i)
            for (int j = 0; j < d1; ++j)
                for (int k = 0; k < d0; ++k) out.m(i, j) += m.m(k * d1 + i, k * d1 + j);
    }
    return out;
}

double trace_norm(const FockMatrix& m) {
    require_hermitian(m, "trace_norm");
    Eigen::MatrixXcd h = 0.5 * (m.m + m.m.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) {
        throw NumericalError("trace_norm: eigensolver failed to converge (dim " +
                             std::to_string(m.total_dim()) + ", max|entry| " +
                             std::to_string(m.m.cwiseAbs().maxCoeff()) + ")");
    }
    return es.eigenvalues().cwiseAbs().sum();
}

double helstrom_error(const FockMatrix& rho1, const FockMatrix& rho2, double prior1) {
    if (rho1.dims != rho2.dims) throw InvalidInput("helstrom_error: dims mismatch");
    if (!(prior1 >= 0.0 && prior1 <= 1.0)) throw InvalidInput("helstrom_error: prior outside [0,1]");
    FockMatrix diff;
    diff.dims = rho1.dims;
    diff.m = prior1 * rho1.m - (1.0 - prior1) * rho2.m;
    return 0.5 * (1.0 - trace_norm(diff));
}

FockMatrix helstrom_projector(const FockMatrix& rho1, const FockMatrix& rho2) {
    if (rho1.dims != rho2.dims) throw InvalidInput("helstrom_projector: dims mismatch");
    FockMatrix diff;
    diff.dims = rho1.dims;
    diff.m = rho1.m - rho2.m;
    require_hermitian(diff, "helstrom_projector");
    Eigen::MatrixXcd h = 0.5 * (diff.m + diff.m.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    if (es.info() != Eigen::Success) throw NumericalError("helstrom_projector: eigensolver failed");
    FockMatrix out;
    out.dims = rho1.dims;
    out.m = Eigen::MatrixXcd::Zero(h.rows(), h.cols());
    for (int j = 0; j < h.rows(); ++j) {
        if (es.eigenvalues()[j] >= 0.0) {
            out.m += es.eigenvectors().col(j) * es.eigenvectors().col(j).adjoint();
        }
    }
    return out;
}

FockKet apply(const FockMatrix& m, const FockKet& psi) {
    if (m.total_dim() != psi.dim()) throw InvalidInput("apply: dimension mismatch");
    FockKet out;
    out.amp = m.m * psi.amp;
    return out;
}

double pure_expectation(const FockMatrix& rho, const FockKet& psi) {
    if (rho.total_dim() != psi.dim()) throw InvalidInput("pure_expectation: dimension mismatch");
    return (psi.amp.adjoint() * rho.m * psi.amp)(0).real();
}

double real_trace(const FockMatrix& m) { return m.m.trace().real(); }

double poisson_tail_bound(double mean, int dim) {
    if (mean <= 0.0) return 0.0;
    if (dim <= mean) return 1.0;
    // P(X >= dim) <= p(dim) / (1 - mean/(dim+1)), geometric-ratio bound on the tail.
    const double logp = -mean + dim * std::log(mean) - std::lgamma(double(dim) + 1.0);
    return std::min(1.0, std::exp(logp) / (1.0 - mean / (dim + 1.0)));
}

int poisson_tail_dim(double mean, double tol) {
    int dim = std::max(2, static_cast<int>(mean) + 2);
    while (poisson_tail_bound(mean, dim) > tol) {
        dim += std::max(1, dim / 8);
    }
    return dim;
}

}  // namespace cohdisc
