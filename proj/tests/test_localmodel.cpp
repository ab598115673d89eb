#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cohdisc/localmodel.hpp"
#include "oracles.hpp"

using namespace cohdisc;

namespace {

double quad_sum(const QuadratureGrid& g, const std::function<double(Amplitude)>& f) {
    double acc = 0.0;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) acc += g.weights[i] * f(g.nodes[i]);
    return acc;
}

Eigen::MatrixXcd weighted_coherent_average(const QuadratureGrid& g, int dim,
                                           const std::function<Amplitude(Amplitude)>& factor) {
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(dim, dim);
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        const FockKet k = coherent_ket(g.nodes[i], dim);
        acc += g.weights[i] * factor(g.nodes[i]) * (k.amp * k.amp.adjoint());
    }
    return acc;
}

}  // namespace

TEST_CASE("gaussian_prior_pdf: peak value, normalization, second moment") {
    CHECK(gaussian_prior_pdf(0.0, 1.0) == doctest::Approx(1.0 / M_PI).margin(1e-15));

    const QuadratureGrid g2 = build_quadrature(2.0, 40);
    CHECK(quad_sum(g2, [](Amplitude u) {
              return gaussian_prior_pdf(u, 2.0) / gaussian_prior_pdf(u, 2.0);
          }) == doctest::Approx(1.0).margin(1e-10));

    const QuadratureGrid g15 = build_quadrature(1.5, 40);
    CHECK(quad_sum(g15, [](Amplitude u) { return std::norm(u); }) ==
          doctest::Approx(2.25).margin(1e-8));

    CHECK_THROWS_AS(gaussian_prior_pdf(0.0, 0.0), InvalidInput);
}

TEST_CASE("build_quadrature: weight sum and low moments") {
    const QuadratureGrid g = build_quadrature(1.0, 40);
    double wsum = 0.0;
    for (double w : g.weights) wsum += w;
    CHECK(wsum == doctest::Approx(1.0).margin(1e-13));

    CHECK(std::abs(quad_sum(g, [](Amplitude u) { return 2.0 * u.real(); })) < 1e-12);
    CHECK(quad_sum(g, [](Amplitude u) { return 4.0 * u.real() * u.real(); }) ==
          doctest::Approx(2.0).margin(1e-10));

    CHECK_THROWS_AS(build_quadrature(1.0, 1), InvalidInput);
}

TEST_CASE("thermal_coefficients: values, tail, mean photon number") {
    const auto c1 = thermal_coefficients(1.0, 3);
    CHECK(c1[0] == doctest::Approx(0.5).margin(1e-15));
    CHECK(c1[1] == doctest::Approx(0.25).margin(1e-15));
    CHECK(c1[2] == doctest::Approx(0.125).margin(1e-15));

    const int dim = 50;
    const auto c = thermal_coefficients(1.3, dim);
    double sum = 0.0;
    for (double v : c) sum += v;
    CHECK(1.0 - sum == doctest::Approx(thermal_tail(1.3, dim)).margin(1e-13));

    const auto c2 = thermal_coefficients(2.0, 400);
    double mean = 0.0;
    for (int k = 0; k < 400; ++k) mean += k * c2[k];
    CHECK(mean == doctest::Approx(4.0).margin(1e-8));
}

TEST_CASE("averaged_sigma1: marginals and quadrature oracle") {
    const LocalModel model{1.0, 1.0, 1000};
    const ModeDims dims{50, 20};
    const FockMatrix s1 = averaged_sigma1(model, dims);

    SUBCASE("signal marginal is the reflected coherent projector") {
        const FockMatrix marg = partial_trace(s1, 1);
        const FockMatrix ref = FockMatrix::pure(coherent_ket(-1.0, 20));
        // the auxiliary thermal trace is slightly below one; compare rescaled
        const double scale = 1.0 - thermal_tail(1.0, 50);
        CHECK((marg.m - scale * ref.m).cwiseAbs().maxCoeff() < 1e-12);
    }
    SUBCASE("auxiliary marginal diagonal equals the thermal weights") {
        const FockMatrix marg = partial_trace(s1, 0);
        const auto c = thermal_coefficients(1.0, 50);
        const double nc2 = 1.0 - coherent_ket(-1.0, 20).norm_deficit();
        for (int k = 0; k < 50; ++k) {
            CHECK(marg.m(k, k).real() == doctest::Approx(c[k] * nc2).margin(1e-12));
        }
        // phase averaging leaves nothing off the diagonal
        CHECK((marg.m - marg.m.diagonal().asDiagonal().toDenseMatrix()).cwiseAbs().maxCoeff() <
              1e-12);
    }
    SUBCASE("vanishing prior width collapses the auxiliary mode to vacuum") {
        const LocalModel narrow{1.0, 1e-3, 1000};
        const FockMatrix s = averaged_sigma1(narrow, ModeDims{8, 20});
        const FockMatrix marg = partial_trace(s, 0);
        CHECK(marg.m(0, 0).real() > 1.0 - 1e-5);
    }
    SUBCASE("quadrature oracle reproduces the closed form") {
        const QuadratureGrid g = build_quadrature(1.0, 40);
        const Eigen::MatrixXcd aux =
            weighted_coherent_average(g, 50, [](Amplitude) { return Amplitude(1.0, 0.0); });
        FockMatrix oracle_aux;
        oracle_aux.dims = {50};
        oracle_aux.m = aux;
        const FockMatrix oracle = tensor(oracle_aux, FockMatrix::pure(coherent_ket(-1.0, 20)));
        CHECK((oracle.m - s1.m).cwiseAbs().maxCoeff() < 1e-8);
    }
}

TEST_CASE("averaged_sigma2: marginals, trace bookkeeping, order convergence") {
    const LocalModel model{1.0, 1.0, 100};
    const ModeDims dims{50, 22};
    const FockMatrix s2 = averaged_sigma2(model, dims);

    SUBCASE("n -> infinity surrogate pins the signal mode to vacuum") {
        const LocalModel big{1.0, 1.0, 100000000};
        const FockMatrix s = averaged_sigma2(big, ModeDims{50, 6});
        const FockMatrix marg = partial_trace(s, 1);
        CHECK(marg.m(0, 0).real() > 1.0 - 1e-6);
    }
    SUBCASE("auxiliary marginal is n-independent and matches the vacuum-hypothesis state") {
        const FockMatrix s1 = averaged_sigma1(model, dims);
        const Eigen::MatrixXcd m2 = partial_trace(s2, 0).m;
        const Eigen::MatrixXcd m1 = partial_trace(s1, 0).m / (1.0 - coherent_ket(-1.0, 22).norm_deficit());
        CHECK((m2 - m1).cwiseAbs().maxCoeff() < 1e-10);
        CHECK((m2 - m2.diagonal().asDiagonal().toDenseMatrix()).cwiseAbs().maxCoeff() < 1e-12);
    }
    SUBCASE("trace accounts for the recorded deficit") {
        CHECK(real_trace(s2) == doctest::Approx(1.0 - s2.trace_deficit).margin(1e-10));
    }
    SUBCASE("doubling the quadrature order moves nothing above 1e-10") {
        const FockMatrix s2b = averaged_sigma2(model, dims, 80);
        CHECK((s2b.m - s2.m).cwiseAbs().maxCoeff() < 1e-10);
    }
    SUBCASE("insufficient dims raise a truncation error") {
        CHECK_THROWS_AS(averaged_sigma2(LocalModel{1.0, 2.0, 100}, ModeDims{6, 4}),
                        TruncationError);
    }
}

TEST_CASE("sigma2_expansion_terms: leading term, tracelessness, residual order") {
    const LocalModel model{1.0, 1.0, 10000};
    const ModeDims dims{50, 22};
    const Sigma2Expansion ex = sigma2_expansion_terms(model, dims);

    SUBCASE("leading term is thermal x vacuum") {
        const auto c = thermal_coefficients(1.0, 50);
        for (int k = 0; k < 50; ++k) {
            CHECK(ex.zero.m(k * 22, k * 22).real() == doctest::Approx(c[k]).margin(1e-12));
        }
        Eigen::MatrixXcd off = ex.zero.m;
        for (int k = 0; k < 50; ++k) off(k * 22, k * 22) = 0.0;
        CHECK(off.cwiseAbs().maxCoeff() < 1e-15);
    }
    SUBCASE("first correction is traceless") { CHECK(std::abs(real_trace(ex.one)) < 1e-14); }
    SUBCASE("reconstruction residual is of cubic half-order") {
        const FockMatrix s2 = averaged_sigma2(model, dims);
        const double rootn = std::sqrt(double(model.n));
        FockMatrix resid;
        resid.dims = s2.dims;
        resid.m = s2.m - (ex.zero.m + ex.one.m / rootn + ex.two.m / double(model.n));
        CHECK(trace_norm(resid) < 10.0 * std::pow(double(model.n), -1.5));
    }
}

TEST_CASE("prior-averaged ladder identities for the first two moments of the ladder map") {
    // averages of u, u*, |u|^2, u^2, u*^2 against the coherent projector, vs their
    // closed-form ladder structures
    const int dim = 60;
    const QuadratureGrid g = build_quadrature(1.0, 40);
    const auto c = thermal_coefficients(1.0, dim + 2);

    const Eigen::MatrixXcd m_u =
        weighted_coherent_average(g, dim, [](Amplitude u) { return u; });
    const Eigen::MatrixXcd m_absu =
        weighted_coherent_average(g, dim, [](Amplitude u) { return Amplitude(std::norm(u), 0.0); });
    const Eigen::MatrixXcd m_u2 =
        weighted_coherent_average(g, dim, [](Amplitude u) { return u * u; });

    Eigen::MatrixXcd ref_u = Eigen::MatrixXcd::Zero(dim, dim);
    Eigen::MatrixXcd ref_absu = Eigen::MatrixXcd::Zero(dim, dim);
    Eigen::MatrixXcd ref_u2 = Eigen::MatrixXcd::Zero(dim, dim);
    for (int k = 0; k < dim; ++k) {
        if (k + 1 < dim) ref_u(k, k + 1) = c[k + 1] * std::sqrt(double(k + 1));
        ref_absu(k, k) = c[k + 1] * (k + 1);
        if (k + 2 < dim) ref_u2(k, k + 2) = c[k + 2] * std::sqrt(double((k + 2) * (k + 1)));
    }
    CHECK((m_u - ref_u).cwiseAbs().maxCoeff() < 1e-8);
    CHECK((m_absu - ref_absu).cwiseAbs().maxCoeff() < 1e-8);
    CHECK((m_u2 - ref_u2).cwiseAbs().maxCoeff() < 1e-8);
    // conjugated variants are the transposes
    const Eigen::MatrixXcd m_ustar =
        weighted_coherent_average(g, dim, [](Amplitude u) { return std::conj(u); });
    CHECK((m_ustar - ref_u.transpose()).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("model validation") {
    CHECK_THROWS_AS(LocalModel{-1.0, 1.0, 10}.validate(), InvalidInput);
    CHECK_THROWS_AS(LocalModel{1.0, 0.0, 10}.validate(), InvalidInput);
    CHECK_THROWS_AS(LocalModel{1.0, 1.0, 0}.validate(), InvalidInput);
}
