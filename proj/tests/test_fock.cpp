#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "cohdisc/fock.hpp"
#include "oracles.hpp"

using namespace cohdisc;

namespace {
FockKet basis_ket(int k, int dim) {
    FockKet out;
    out.amp = Eigen::VectorXcd::Zero(dim);
    out.amp[k] = 1.0;
    return out;
}
}  // namespace

TEST_CASE("coherent_ket: vacuum, tails, overlaps") {
    const FockKet vac = coherent_ket(0.0, 8);
    CHECK(vac.amp[0] == std::complex<double>(1.0, 0.0));
    CHECK(vac.amp.tail(7).cwiseAbs().maxCoeff() == 0.0);

    const FockKet k1 = coherent_ket(1.0, 30);
    CHECK(k1.norm_deficit() < 1e-10);
    CHECK(k1.norm_deficit() == doctest::Approx(oracles::poisson_tail_exact(1.0, 30)).epsilon(0).margin(1e-12));

    const FockKet kp = coherent_ket(1.0, 60), km = coherent_ket(-1.0, 60);
    CHECK((kp.amp.adjoint() * km.amp)(0).real() == doctest::Approx(std::exp(-2.0)).margin(1e-13));

    CHECK_THROWS_AS(coherent_ket(Amplitude(std::nan(""), 0.0), 8), InvalidInput);
    CHECK_THROWS_AS(coherent_ket(1.0, 0), InvalidInput);
}

TEST_CASE("displacement_matrix: identity, coherent column, inverse") {
    const FockMatrix d0 = displacement_matrix(0.0, 12);
    CHECK((d0.m - Eigen::MatrixXcd::Identity(12, 12)).cwiseAbs().maxCoeff() < 1e-14);

    const FockMatrix d = displacement_matrix(0.5, 40);
    const FockKet from_vac = apply(d, basis_ket(0, 40));
    CHECK((from_vac.amp - coherent_ket(0.5, 40).amp).cwiseAbs().maxCoeff() < 1e-10);

    const Amplitude a(1.0, 0.5);
    const FockMatrix dp = displacement_matrix(a, 60), dm = displacement_matrix(-a, 60);
    CHECK((dp.m * dm.m - Eigen::MatrixXcd::Identity(60, 60)).cwiseAbs().maxCoeff() < 1e-8);
    CHECK(!dp.hermitian);
}

TEST_CASE("beam_splitter_pair and concentrate") {
    const Amplitude a(0.4, -0.2), b(0.1, 0.7);
    SUBCASE("fully transmissive") {
        const auto [o1, o2] = beam_splitter_pair(a, b, 1.0);
        CHECK(o1 == a);
        CHECK(o2 == b);
    }
    SUBCASE("balanced merge of equal inputs") {
        const auto [o1, o2] = beam_splitter_pair(a, a, 0.5);
        CHECK(std::abs(o1 - std::sqrt(2.0) * a) < 1e-15);
        CHECK(std::abs(o2) < 1e-15);
    }
    SUBCASE("energy conservation") {
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> u(-2.0, 2.0);
        for (int it = 0; it < 50; ++it) {
            const Amplitude x(u(rng), u(rng)), y(u(rng), u(rng));
            const double t = 0.5 * (1.0 + std::tanh(u(rng)));
            const auto [o1, o2] = beam_splitter_pair(x, y, t);
            CHECK(std::norm(o1) + std::norm(o2) ==
                  doctest::Approx(std::norm(x) + std::norm(y)).margin(1e-12));
        }
    }
    SUBCASE("domain") { CHECK_THROWS_AS(beam_splitter_pair(a, b, 1.5), InvalidInput); }

    CHECK(concentrate(1, a) == a);
    CHECK(std::abs(concentrate(2, 0.7) - 0.7 * std::sqrt(2.0)) < 1e-14);
    CHECK(std::abs(concentrate(9, 0.3) - 0.9) < 1e-12);
    CHECK_THROWS_AS(concentrate(0, a), InvalidInput);
}

TEST_CASE("tensor: identity, trace multiplicativity, marginals") {
    const FockMatrix id6 = tensor(FockMatrix::identity({2}), FockMatrix::identity({3}));
    CHECK((id6.m - Eigen::MatrixXcd::Identity(6, 6)).cwiseAbs().maxCoeff() == 0.0);
    CHECK(id6.dims == std::vector<int>{2, 3});

    std::mt19937_64 rng(11);
    for (int it = 0; it < 5; ++it) {
        FockMatrix a, b;
        a.dims = {4};
        b.dims = {5};
        Eigen::MatrixXcd ha = oracles::random_hermitian(4, 1.0, rng);
        Eigen::MatrixXcd hb = oracles::random_hermitian(5, 1.0, rng);
        a.m = ha * ha.adjoint();
        b.m = hb * hb.adjoint();
        a.m /= a.m.trace().real();
        b.m /= b.m.trace().real();
        const FockMatrix ab = tensor(a, b);
        CHECK(ab.m.trace().real() ==
              doctest::Approx(a.m.trace().real() * b.m.trace().real()).margin(1e-12));
    }

    const FockKet ka = coherent_ket(Amplitude(0.6, 0.3), 25);
    const FockMatrix joint = tensor(FockMatrix::pure(coherent_ket(0.0, 20)), FockMatrix::pure(ka));
    const FockMatrix marg = partial_trace(joint, 1);
    CHECK((marg.m - FockMatrix::pure(ka).m).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("trace_norm: density trace, pure-state distance, homogeneity, unitary invariance") {
    FockMatrix rho;
    rho.dims = {5};
    std::mt19937_64 rng(3);
    Eigen::MatrixXcd h = oracles::random_hermitian(5, 1.0, rng);
    rho.m = h * h.adjoint();
    rho.m /= rho.m.trace().real();
    CHECK(trace_norm(rho) == doctest::Approx(1.0).margin(1e-12));

    FockMatrix diff;
    diff.dims = {40};
    diff.m = FockMatrix::pure(coherent_ket(0.0, 40)).m - FockMatrix::pure(coherent_ket(1.0, 40)).m;
    CHECK(trace_norm(diff) == doctest::Approx(1.590120).margin(1e-6));
    CHECK(trace_norm(diff) ==
          doctest::Approx(2.0 * std::sqrt(1.0 - std::exp(-1.0))).margin(1e-10));

    FockMatrix m;
    m.dims = {6};
    m.m = oracles::random_hermitian(6, 1.0, rng);
    FockMatrix m3 = m;
    m3.m *= -3.0;
    CHECK(trace_norm(m3) == doctest::Approx(3.0 * trace_norm(m)).margin(1e-10));

    const FockMatrix u = displacement_matrix(Amplitude(0.3, 0.2), 6);
    FockMatrix rotated;
    rotated.dims = {6};
    rotated.m = u.m * m.m * u.m.adjoint();
    CHECK(trace_norm(rotated) == doctest::Approx(trace_norm(m)).margin(1e-10));

    SUBCASE("determinism within a build") {
        const double t1 = trace_norm(m), t2 = trace_norm(m);
        CHECK(t1 == t2);
    }
}

TEST_CASE("helstrom_error: limits, frozen value, symmetry, monotonicity") {
    const FockMatrix v = FockMatrix::pure(coherent_ket(0.0, 40));
    CHECK(helstrom_error(v, v, 0.5) == doctest::Approx(0.5).margin(1e-12));

    const FockMatrix b0 = FockMatrix::pure(basis_ket(0, 8));
    const FockMatrix b1 = FockMatrix::pure(basis_ket(1, 8));
    CHECK(helstrom_error(b0, b1, 0.5) == doctest::Approx(0.0).margin(1e-12));

    const FockMatrix ca = FockMatrix::pure(coherent_ket(1.0, 40));
    CHECK(helstrom_error(v, ca, 0.5) == doctest::Approx(0.102470).margin(1e-6));

    CHECK(helstrom_error(v, ca, 0.3) == doctest::Approx(helstrom_error(ca, v, 0.7)).margin(1e-12));

    double prev = 0.5;
    for (double a = 0.1; a <= 3.01; a += 0.1) {
        const double pe = helstrom_error(v, FockMatrix::pure(coherent_ket(a, 40)), 0.5);
        CHECK(pe < prev);
        prev = pe;
    }

    FockMatrix wrong;
    wrong.dims = {39};
    wrong.m = Eigen::MatrixXcd::Identity(39, 39);
    CHECK_THROWS_AS(helstrom_error(v, wrong, 0.5), InvalidInput);
}

TEST_CASE("helstrom_projector: contract identity and consistency with helstrom_error") {
    const FockMatrix v = FockMatrix::pure(coherent_ket(0.0, 40));
    const FockMatrix ca = FockMatrix::pure(coherent_ket(1.0, 40));

    auto contract = [](const FockMatrix& r1, const FockMatrix& r2) {
        const FockMatrix proj = helstrom_projector(r1, r2);
        FockMatrix diff;
        diff.dims = r1.dims;
        diff.m = r1.m - r2.m;
        const double lhs = (proj.m * diff.m).trace().real();
        const double rhs = 0.5 * (trace_norm(diff) + diff.m.trace().real());
        return std::abs(lhs - rhs);
    };
    CHECK(contract(v, v) < 1e-10);
    CHECK(contract(v, ca) < 1e-10);

    const FockMatrix b0 = FockMatrix::pure(basis_ket(0, 8));
    const FockMatrix b1 = FockMatrix::pure(basis_ket(1, 8));
    const FockMatrix proj01 = helstrom_projector(b0, b1);
    CHECK((proj01.m * b0.m - b0.m).cwiseAbs().maxCoeff() < 1e-12);

    const FockMatrix proj = helstrom_projector(v, ca);
    const double pe_via_proj =
        0.5 * ((Eigen::MatrixXcd::Identity(40, 40) - proj.m) * v.m).trace().real() +
        0.5 * (proj.m * ca.m).trace().real();
    CHECK(pe_via_proj == doctest::Approx(helstrom_error(v, ca, 0.5)).margin(1e-10));
}

TEST_CASE("poisson tail helper brackets the exact tail") {
    for (double mean : {0.5, 2.0, 9.0}) {
        const int dim = poisson_tail_dim(mean, 1e-10);
        CHECK(oracles::poisson_tail_exact(mean, dim) <= 1e-10);
        CHECK(poisson_tail_bound(mean, dim) >= oracles::poisson_tail_exact(mean, dim));
    }
}
