#include "cohdisc/twopoint.hpp"

#include <cmath>

#include "cohdisc/collective.hpp"

namespace cohdisc {

namespace {

double pure_error(double alpha_sq) {
    return 0.5 * (1.0 - std::sqrt(1.0 - std::exp(-alpha_sq)));
}

int twopoint_signal_dim(double alpha0, long n) {
    const double mean = std::pow(alpha0 + 1.0 / std::sqrt(double(n)), 2) + 1.0;
    return std::max(8, poisson_tail_dim(mean, 1e-14));
}

}  // namespace

double two_point_overlap() { return std::exp(-2.0); }

void TwoPointPovm::validate() const {
    if (!(c >= 0.0 && c <= 1.0)) throw InvalidInput("TwoPointPovm: c must lie in [0, 1]");
}

std::pair<double, double> p_plus_minus(double c) {
    TwoPointPovm{c}.validate();
    const double chi = two_point_overlap();
    const double cross = c * chi - std::sqrt(1.0 - c * c) * std::sqrt(1.0 - chi * chi);
    return {c * c, 1.0 - cross * cross};
}

std::pair<double, double> two_point_outcome_probs(double c) {
    const auto [pp, pm] = p_plus_minus(c);
    return {pp, 1.0 - pm};
}

double optimal_c() {
    const double chi = two_point_overlap();
    return 0.5 * (std::sqrt(1.0 + chi) + std::sqrt(1.0 - chi));
}

double two_point_local_excess_risk_probs(double alpha0, double p_plus_given_plus,
                                         double p_plus_given_minus, long n_surrogate) {
    if (!(alpha0 > 0.0)) throw InvalidInput("two_point_local_excess_risk: alpha0 must be > 0");
    if (n_surrogate < 1) throw InvalidInput("two_point_local_excess_risk: n_surrogate must be >= 1");
    for (double p : {p_plus_given_plus, p_plus_given_minus}) {
        if (!(p >= 0.0 && p <= 1.0)) {
            throw InvalidInput("two_point_local_excess_risk: outcome probabilities outside [0, 1]");
        }
    }
    const int dim = std::max(8, poisson_tail_dim(alpha0 * alpha0, 1e-14) + 4);
    const double rootn = std::sqrt(double(n_surrogate));

    FockMatrix base;
    base.dims = {dim};
    base.m = Eigen::MatrixXcd::Zero(dim, dim);
    const FockKet ka = coherent_ket(-alpha0, dim);
    base.m = ka.amp * ka.amp.adjoint();
    base.m(0, 0) -= 1.0;  // minus the vacuum projector

    double pe = 0.0;
    for (int outcome = 0; outcome < 2; ++outcome) {
        const double pu_plus = outcome == 0 ? p_plus_given_plus : 1.0 - p_plus_given_plus;
        const double pu_minus = outcome == 0 ? p_plus_given_minus : 1.0 - p_plus_given_minus;
        const double total = 0.5 * (pu_plus + pu_minus);
        if (total <= 0.0) continue;
        const double i1 = 0.5 * (pu_plus - pu_minus) / total;  // E[u | outcome], u = +-1
        const double i2 = 1.0, i3 = 1.0;

        FockMatrix b, c;
        b.dims = c.dims = base.dims;
        b.m = Eigen::MatrixXcd::Zero(dim, dim);
        b.m(1, 0) = -i1;
        b.m(0, 1) = -i1;
        c.m = Eigen::MatrixXcd::Zero(dim, dim);
        c.m(1, 1) = -i2;
        c.m(0, 0) = i2;
        c.m(2, 0) = -i3 / std::sqrt(2.0);
        c.m(0, 2) = -i3 / std::sqrt(2.0);

        const PerturbationResult pert = second_order_perturbation(base, b, c);
        double tn = 0.0;
        for (int j = 0; j < pert.zero_order.size(); ++j) {
            tn += std::abs(pert.zero_order[j] + pert.first_order[j] / rootn +
                           pert.second_order[j] / n_surrogate);
        }
        pe += total * 0.5 * (1.0 - 0.5 * tn);
    }
    return n_surrogate * (pe - two_point_pe_star(alpha0, n_surrogate));
}

double two_point_local_excess_risk(double alpha0, double c, long n_surrogate) {
    const auto [pp, pm] = two_point_outcome_probs(c);
    return two_point_local_excess_risk_probs(alpha0, pp, pm, n_surrogate);
}

double two_point_pe_star(double alpha0, long n) {
    const double rootn = std::sqrt(double(n));
    return 0.5 * (pure_error(std::norm(Amplitude(alpha0 + 1.0 / rootn, 0.0))) +
                  pure_error(std::norm(Amplitude(alpha0 - 1.0 / rootn, 0.0))));
}

namespace {

double two_point_collective_risk_at(double alpha0, long n) {
    const int d1 = std::max(16, poisson_tail_dim(1.0, 1e-14));
    const int d2 = twopoint_signal_dim(alpha0, n);
    const double rootn = std::sqrt(double(n));

    const FockKet aux_p = coherent_ket(1.0, d1);
    const FockKet aux_m = coherent_ket(-1.0, d1);
    const FockKet ref = coherent_ket(-alpha0, d2);

    FockMatrix sigma1;
    sigma1.dims = {d1, d2};
    {
        FockMatrix aux;
        aux.dims = {d1};
        aux.m = 0.5 * (aux_p.amp * aux_p.amp.adjoint() + aux_m.amp * aux_m.amp.adjoint());
        sigma1 = tensor(aux, FockMatrix::pure(ref));
    }
    FockMatrix sigma2;
    sigma2.dims = {d1, d2};
    {
        const FockKet sig_p = coherent_ket(1.0 / rootn, d2);
        const FockKet sig_m = coherent_ket(-1.0 / rootn, d2);
        FockMatrix term_p = tensor(FockMatrix::pure(aux_p), FockMatrix::pure(sig_p));
        FockMatrix term_m = tensor(FockMatrix::pure(aux_m), FockMatrix::pure(sig_m));
        sigma2.m = 0.5 * (term_p.m + term_m.m);
        sigma2.dims = term_p.dims;
    }
    const double pe = helstrom_error(sigma1, sigma2, 0.5);
    return n * (pe - two_point_pe_star(alpha0, n));
}

}  // namespace

double two_point_collective_excess_risk(double alpha0, long n_surrogate) {
    if (!(alpha0 > 0.0)) throw InvalidInput("two_point_collective_excess_risk: alpha0 must be > 0");
    if (n_surrogate < 4) throw InvalidInput("two_point_collective_excess_risk: n_surrogate too small");
    return richardson_over_n(two_point_collective_risk_at(alpha0, n_surrogate),
                             two_point_collective_risk_at(alpha0, 4 * n_surrogate));
}

}  // namespace cohdisc
