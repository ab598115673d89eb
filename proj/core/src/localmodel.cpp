#include "cohdisc/localmodel.hpp"

#include <cmath>

namespace cohdisc {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Gauss-Hermite rule for weight e^{-x^2} via the symmetric tridiagonal Jacobi matrix.
void hermite_rule(int order, Eigen::VectorXd& nodes, Eigen::VectorXd& weights) {
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(order);
    Eigen::VectorXd sub(order - 1);
    for (int k = 1; k < order; ++k) sub[k - 1] = std::sqrt(0.5 * k);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub);
    nodes = es.eigenvalues();
    weights.resize(order);
    const double mu0 = std::sqrt(kPi);
    for (int j = 0; j < order; ++j) {
        const double v0 = es.eigenvectors()(0, j);
        weights[j] = mu0 * v0 * v0;
    }
}

}  // namespace

void LocalModel::validate() const {
    if (!(alpha0 >= 0.0) || !std::isfinite(alpha0)) throw InvalidInput("LocalModel: alpha0 must be >= 0");
    if (!(mu > 0.0) || !std::isfinite(mu)) throw InvalidInput("LocalModel: mu must be > 0");
    if (n < 1) throw InvalidInput("LocalModel: n must be >= 1");
}

double gaussian_prior_pdf(Amplitude u, double mu) {
    if (!(mu > 0.0)) throw InvalidInput("gaussian_prior_pdf: mu must be > 0");
    return std::exp(-std::norm(u) / (mu * mu)) / (kPi * mu * mu);
}

QuadratureGrid build_quadrature(double mu, int order) {
    if (!(mu > 0.0)) throw InvalidInput("build_quadrature: mu must be > 0");
    if (order < 2) throw InvalidInput("build_quadrature: order must be >= 2");
    Eigen::VectorXd x, w;
    hermite_rule(order, x, w);
    QuadratureGrid grid;
    grid.order = order;
    grid.nodes.reserve(static_cast<std::size_t>(order) * order);
    grid.weights.reserve(static_cast<std::size_t>(order) * order);
    for (int i = 0; i < order; ++i) {
        for (int j = 0; j < order; ++j) {
            grid.nodes.emplace_back(mu * x[i], mu * x[j]);
            grid.weights.push_back(w[i] * w[j] / kPi);
        }
    }
    return grid;
}

std::vector<double> thermal_coefficients(double mu, int dim) {
    if (!(mu > 0.0)) throw InvalidInput("thermal_coefficients: mu must be > 0");
    if (dim < 1) throw InvalidInput("thermal_coefficients: dim must be >= 1");
    const double mu2 = mu * mu;
    std::vector<double> c(dim);
    c[0] = 1.0 / (mu2 + 1.0);
    const double ratio = mu2 / (mu2 + 1.0);
    for (int k = 1; k < dim; ++k) c[k] = c[k - 1] * ratio;
    return c;
}

double thermal_tail(double mu, int dim) {
    const double mu2 = mu * mu;
    return std::exp(dim * std::log(mu2 / (mu2 + 1.0)));
}

ModeDims recommended_dims(const LocalModel& model, int quad_order, double tol) {
    model.validate();
    // Largest quadrature node is mu * x_max per coordinate; x_max < sqrt(2*order + 1).
    const double xmax = std::sqrt(2.0 * quad_order + 1.0);
    const double umax = model.mu * xmax * std::sqrt(2.0);
    ModeDims dims;
    dims.aux_dim = 2;
    while (thermal_tail(model.mu, dims.aux_dim) > 0.5 * tol) ++dims.aux_dim;
    dims.aux_dim = std::max(dims.aux_dim, poisson_tail_dim(umax * umax, 0.5 * tol));
    const double sig_mean =
        std::max(model.alpha0 * model.alpha0, std::pow(umax / std::sqrt(double(model.n)), 2));
    dims.signal_dim = std::max(4, poisson_tail_dim(sig_mean, 0.5 * tol));
    return dims;
}

FockMatrix averaged_sigma1(const LocalModel& model, const ModeDims& dims) {
    model.validate();
    const auto c = thermal_coefficients(model.mu, dims.aux_dim);
    FockMatrix th;
    th.dims = {dims.aux_dim};
    th.m = Eigen::MatrixXcd::Zero(dims.aux_dim, dims.aux_dim);
    for (int k = 0; k < dims.aux_dim; ++k) th.m(k, k) = c[k];
    th.trace_deficit = thermal_tail(model.mu, dims.aux_dim);
    FockMatrix out = tensor(th, FockMatrix::pure(coherent_ket(-model.alpha0, dims.signal_dim)));
    if (out.trace_deficit > 1e-4) {
        throw TruncationError("averaged_sigma1: dims leave too much mass out", out.trace_deficit);
    }
    return out;
}

FockMatrix averaged_sigma2(const LocalModel& model, const ModeDims& dims, int quad_order) {
    model.validate();
    const QuadratureGrid grid = build_quadrature(model.mu, quad_order);
    const double rootn = std::sqrt(double(model.n));
    const int d = dims.aux_dim * dims.signal_dim;
    FockMatrix out;
    out.dims = {dims.aux_dim, dims.signal_dim};
    out.m = Eigen::MatrixXcd::Zero(d, d);
    Eigen::VectorXcd joint(d);
    double mass = 0.0;
    for (std::size_t i = 0; i < grid.nodes.size(); ++i) {
        if (grid.weights[i] < 1e-18) continue;
        const FockKet aux = coherent_ket(grid.nodes[i], dims.aux_dim);
        const FockKet sig = coherent_ket(grid.nodes[i] / rootn, dims.signal_dim);
        for (int a = 0; a < dims.aux_dim; ++a) {
            joint.segment(a * dims.signal_dim, dims.signal_dim) = aux.amp[a] * sig.amp;
        }
        out.m.selfadjointView<Eigen::Lower>().rankUpdate(joint, grid.weights[i]);
        mass += grid.weights[i] * joint.squaredNorm();
    }
    out.m.triangularView<Eigen::StrictlyUpper>() = out.m.adjoint();
    out.trace_deficit = std::max(0.0, 1.0 - mass);
    if (out.trace_deficit > 1e-4) {
        throw TruncationError("averaged_sigma2: dims leave too much mass out", out.trace_deficit);
    }
    return out;
}

Sigma2Expansion sigma2_expansion_terms(const LocalModel& model, const ModeDims& dims) {
    model.validate();
    if (dims.signal_dim < 3) throw InvalidInput("sigma2_expansion_terms: signal_dim must be >= 3");
    const int da = dims.aux_dim, ds = dims.signal_dim;
    const int d = da * ds;
    const auto c = thermal_coefficients(model.mu, da + 2);
    auto idx = [ds](int k, int s) { return k * ds + s; };

    Sigma2Expansion ex;
    for (FockMatrix* m : {&ex.zero, &ex.one, &ex.two}) {
        m->dims = {da, ds};
        m->m = Eigen::MatrixXcd::Zero(d, d);
    }
    ex.zero.trace_deficit = thermal_tail(model.mu, da);

    for (int k = 0; k < da; ++k) {
        ex.zero.m(idx(k, 0), idx(k, 0)) = c[k];

        if (k + 1 < da) {
            const double dk1 = c[k + 1] * std::sqrt(double(k + 1));  // |k><k+1| x |1><0|
            ex.one.m(idx(k, 1), idx(k + 1, 0)) = dk1;
            ex.one.m(idx(k + 1, 0), idx(k, 1)) = dk1;
        }

        const double ek = c[k + 1] * (k + 1);
        ex.two.m(idx(k, 1), idx(k, 1)) = ek;
        ex.two.m(idx(k, 0), idx(k, 0)) -= ek;
        if (k + 2 < da) {
            const double fk2 = c[k + 2] * std::sqrt(double((k + 2) * (k + 1)) / 2.0);
            ex.two.m(idx(k, 2), idx(k + 2, 0)) = fk2;  // |k><k+2| x |2><0|
            ex.two.m(idx(k + 2, 0), idx(k, 2)) = fk2;
        }
    }
    return ex;
}

}  // namespace cohdisc
