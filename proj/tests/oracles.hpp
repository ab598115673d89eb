#pragma once

// Test-side oracles: independent routes to expected values. Nothing here may call
// the implementation path it is used to check.

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracles {

/// Thermal ladder weights, recomputed locally.
inline std::vector<double> thermal_weights(double mu, int count) {
    std::vector<double> c(count);
    const double mu2 = mu * mu;
    c[0] = 1.0 / (mu2 + 1.0);
    for (int k = 1; k < count; ++k) c[k] = c[k - 1] * mu2 / (mu2 + 1.0);
    return c;
}

/// Series form of the second-order eigenvalue sum for the collective operator:
/// per-ladder-level corrections assembled from the closed-form overlaps, summed until
/// the running term drops below 1e-14 of the partial sum (and at most max_terms).
inline double lambda2_plus_series(double alpha0, double mu, int max_terms = 100000) {
    const double x = alpha0 * alpha0;
    const double s = std::sqrt(1.0 - std::exp(-x));
    const double em1 = std::expm1(x);
    const auto c = thermal_weights(mu, max_terms + 3);
    const double ov0[2] = {0.5 * (1.0 - s), 0.5 * (1.0 + s)};  // |<0|v+->|^2
    const double ov1[2] = {0.5 * x * (1.0 + s) / em1, 0.5 * x * (1.0 - s) / em1};
    const double ov1_v0 = 1.0 - x * std::exp(-x) / (1.0 - std::exp(-x));

    auto gamma0 = [&](int i, int eps) {  // eps: 0 -> +, 1 -> -, 2 -> null
        if (eps == 2) return 0.0;
        return (eps == 0 ? 1.0 : -1.0) * c[i] * s;
    };

    double total = 0.0;
    for (int i = 0; i < max_terms; ++i) {
        const double e_i = c[i + 1] * (i + 1);
        const double down = (i > 0) ? c[i] * c[i] * i : 0.0;          // to level i-1
        const double up = c[i + 1] * c[i + 1] * (i + 1);              // to level i+1
        double g = e_i * (ov0[0] - ov1[0]);
        for (int eps = 0; eps < 3; ++eps) {
            const double o1 = (eps == 2) ? ov1_v0 : ov1[eps];
            const double o0 = (eps == 2) ? 0.0 : ov0[eps];
            if (i > 0) g += down * ov0[0] * o1 / (gamma0(i, 0) - gamma0(i - 1, eps));
            if (o0 != 0.0) g += up * ov1[0] * o0 / (gamma0(i, 0) - gamma0(i + 1, eps));
        }
        total += g;
        if (i > 4 && std::abs(g) < 1e-14 * std::abs(total)) break;
    }
    return total;
}

/// Golden-section minimiser for smooth unimodal functions.
inline double golden_section_argmin(const std::function<double(double)>& f, double lo, double hi,
                                    double tol = 1e-10) {
    const double invphi = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

/// Random Hermitian matrix with entries of magnitude ~scale.
inline Eigen::MatrixXcd random_hermitian(int dim, double scale, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    Eigen::MatrixXcd m(dim, dim);
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) m(i, j) = scale * std::complex<double>(unif(rng), unif(rng));
    }
    return 0.5 * (m + m.adjoint().eval());
}

/// Upper-tail mass of Poisson(mean) at k >= dim, summed directly.
inline double poisson_tail_exact(double mean, int dim) {
    double term = std::exp(-mean);
    double head = 0.0;
    for (int k = 0; k < dim; ++k) {
        head += term;
        term *= mean / (k + 1);
    }
    return 1.0 - head;
}

/// Fock-basis amplitudes of a displaced squeezed vacuum D(alpha) S(r, phi)|0>,
/// built by explicit matrix exponentials of the generators (independent of any
/// library displacement routine).
inline Eigen::VectorXcd squeezed_coherent_ket(std::complex<double> alpha, double r, double phi,
                                              int dim) {
    using Mat = Eigen::MatrixXcd;
    Mat a = Mat::Zero(dim, dim);
    for (int k = 0; k + 1 < dim; ++k) a(k, k + 1) = std::sqrt(double(k + 1));
    const Mat adag = a.adjoint();
    const std::complex<double> xi = r * std::exp(std::complex<double>(0.0, 2.0 * phi));
    const Mat gen_s = 0.5 * (std::conj(xi) * a * a - xi * adag * adag);
    const Mat gen_d = alpha * adag - std::conj(alpha) * a;
    auto expm = [](const Mat& g) {
        Eigen::ComplexEigenSolver<Mat> es(g);
        Mat v = es.eigenvectors();
        Eigen::VectorXcd phases = es.eigenvalues().array().exp();
        return Mat(v * phases.asDiagonal() * v.inverse());
    };
    Eigen::VectorXcd vac = Eigen::VectorXcd::Zero(dim);
    vac[0] = 1.0;
    return expm(gen_d) * (expm(gen_s) * vac);
}

}  // namespace oracles
