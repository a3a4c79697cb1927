#include "causalbench/tester.hpp"

#include "causalbench/serialize.hpp"
#include "test_helpers.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>

using namespace causalbench;
using namespace cbtest;
namespace tst = causalbench::tester;

namespace {

// plain triple-loop quadrature of the set-averaged Choi product; the
// independent reference for the closed-form payoff
tst::PayoffPair payoff_by_quadrature(int nodes) {
    auto node = [&](int k) { return -pi + 2.0 * pi * double(k) / double(nodes); };
    Matrix gp = Matrix::Zero(16, 16);
    for (int i = 0; i < nodes; ++i)
        for (int j = 0; j < nodes; ++j)
            for (int k = 0; k < nodes; ++k) {
                const auto ca =
                    channels::choi_of_unitary(channels::Rotation::equatorial(node(j), node(i)).u);
                const auto cb =
                    channels::choi_of_unitary(channels::Rotation::equatorial(node(k), node(i)).u);
                gp += kron(ca.m, cb.m);
            }
    gp /= double(nodes) * nodes * nodes;
    Matrix gm = Matrix::Zero(16, 16);
    for (int i = 0; i < nodes; ++i)
        for (int j = 0; j < nodes; ++j) {
            const auto ca =
                channels::choi_of_unitary(channels::Rotation::equatorial(pi, node(i)).u);
            const auto cb =
                channels::choi_of_unitary(channels::Rotation::pi_tilted(node(i), node(j)).u);
            gm += kron(ca.m, cb.m);
        }
    gm /= double(nodes) * nodes;
    return {std::move(gp), std::move(gm), tst::Provenance::ideal, 0.0};
}

tst::Tester coin_flip_tester(tst::Order order) {
    const Matrix half = Matrix::Identity(16, 16) / 8.0;
    return tst::make_tester(order, half, half);
}

channels::ChoiMatrix random_tp_choi(std::mt19937_64& rng) {
    return channels::choi_of_channel(random_tp_channel(2, rng));
}

}  // namespace

TEST_CASE("coin-flip tester satisfies the constraints and flips fairly") {
    for (auto order : {tst::Order::a_before_b, tst::Order::b_before_a}) {
        const auto t = coin_flip_tester(order);
        CHECK(t.residuals.max() < 1e-12);
        std::mt19937_64 rng(3);
        for (int rep = 0; rep < 5; ++rep) {
            const auto [pp, pm] = tst::tester_probabilities(t, random_tp_choi(rng), random_tp_choi(rng));
            CHECK(pp == doctest::Approx(0.5).epsilon(1e-11));
            CHECK(pm == doctest::Approx(0.5).epsilon(1e-11));
        }
    }
}

TEST_CASE("tester probabilities sum to one on trace-preserving pairs") {
    std::mt19937_64 rng(5);
    const auto t = coin_flip_tester(tst::Order::a_before_b);
    // also exercise a structured tester from the known circuit
    const auto circuit_tester = tst::tester_from_circuit(tst::perfect_discrimination_circuit());
    for (int rep = 0; rep < 100; ++rep) {
        const auto a = random_tp_choi(rng), b = random_tp_choi(rng);
        for (const auto* w : {&t, &circuit_tester}) {
            const auto [pp, pm] = tst::tester_probabilities(*w, a, b);
            CHECK(pp >= -1e-10);
            CHECK(pm >= -1e-10);
            CHECK(pp + pm == doctest::Approx(1.0).epsilon(1e-9));
        }
    }
}

TEST_CASE("ideal payoff: closed form equals quadrature") {
    const auto closed = tst::ideal_payoff();
    CHECK(std::abs(closed.g_plus.trace().real() - 4.0) < 1e-12);
    CHECK(std::abs(closed.g_minus.trace().real() - 4.0) < 1e-12);
    CHECK(min_eigenvalue(closed.g_plus) >= -1e-12);
    CHECK(min_eigenvalue(closed.g_minus) >= -1e-12);

    const auto quad = payoff_by_quadrature(64);
    CHECK(max_abs(closed.g_plus - quad.g_plus) <= 1e-6);
    CHECK(max_abs(closed.g_minus - quad.g_minus) <= 1e-6);
}

TEST_CASE("finite payoff converges to the ideal one") {
    tst::PayoffGrids grids{24, 24, 24, 24};
    const auto big = tst::finite_payoff(1e4, grids, fock::truncation_order(1e4));
    const auto ideal = tst::ideal_payoff();
    CHECK(max_abs(big.g_plus - ideal.g_plus) <= 1e-3);
    CHECK(max_abs(big.g_minus - ideal.g_minus) <= 1e-3);

    const auto g20 = tst::finite_payoff(20.0, grids, fock::truncation_order(20.0));
    CHECK(std::abs(g20.g_plus.trace().real() - 4.0) < 1e-9);
    CHECK(std::abs(g20.g_minus.trace().real() - 4.0) < 1e-9);
    CHECK(hermiticity_defect(g20.g_plus) < 1e-12);
}

TEST_CASE("isotropic basis spans exactly 14 orthonormal operators") {
    const auto basis = tst::isotropic_basis();
    REQUIRE(basis.ops.size() == 14);
    for (std::size_t i = 0; i < basis.ops.size(); ++i)
        for (std::size_t j = 0; j < basis.ops.size(); ++j) {
            const Complex g = hs_inner(basis.ops[i], basis.ops[j]);
            CHECK(std::abs(g - (i == j ? 1.0 : 0.0)) < 1e-12);
        }

    std::mt19937_64 rng(7);
    Matrix h(16, 16);
    for (int i = 0; i < 16; ++i)
        for (int j = 0; j < 16; ++j) h(i, j) = Complex(uniform01(rng), uniform01(rng));
    h = Matrix(0.5 * (h + h.adjoint()));
    const Matrix once = basis.project(h);
    CHECK(max_abs(basis.project(once) - once) <= 1e-10);  // idempotent
    CHECK(hermiticity_defect(once) <= 1e-12);             // Hermiticity preserved
}

TEST_CASE("haar payoff lies in the isotropic subspace") {
    const auto haar = tst::haar_payoff();
    const auto basis = tst::isotropic_basis();
    CHECK(basis.projection_residual(haar.g_plus) <= 1e-10);
    CHECK(basis.projection_residual(haar.g_minus) <= 1e-10);
    CHECK(std::abs(haar.g_plus.trace().real() - 4.0) < 1e-12);
    CHECK(std::abs(haar.g_minus.trace().real() - 4.0) < 1e-12);
    CHECK(min_eigenvalue(haar.g_plus) >= -1e-12);
    CHECK(min_eigenvalue(haar.g_minus) >= -1e-12);
}

TEST_CASE("four-port conjugation by the identity is trivial") {
    const auto ideal = tst::ideal_payoff();
    CHECK(max_abs(tst::four_port_conjugate(ideal.g_plus, Matrix2::Identity()) - ideal.g_plus) <
          1e-14);
}

TEST_CASE("haar unitaries are unitary and reproducible") {
    std::mt19937_64 rng(11), rng2(11);
    for (int rep = 0; rep < 20; ++rep) {
        const Matrix2 v = tst::haar_unitary(rng);
        CHECK(max_abs(Matrix(v.adjoint() * v - Matrix2::Identity())) < 1e-13);
        CHECK(max_abs(Matrix(v - tst::haar_unitary(rng2))) == 0.0);
    }
}

TEST_CASE("monte-carlo frame average approaches the closed-form haar payoff") {
    const auto ideal = tst::ideal_payoff();
    const auto haar = tst::haar_payoff();
    const auto mc = tst::haar_average_oracle(ideal, 20000, 99);
    CHECK(max_abs(mc.g_plus - haar.g_plus) <= 2.5e-3);
    CHECK(max_abs(mc.g_minus - haar.g_minus) <= 2.5e-3);

    // the projection residual onto the isotropic span shrinks with samples
    const auto basis = tst::isotropic_basis();
    const auto mc_small = tst::haar_average_oracle(ideal, 4000, 99);
    const auto mc_large = tst::haar_average_oracle(ideal, 16000, 99);
    CHECK(basis.projection_residual(mc_large.g_plus) <
          basis.projection_residual(mc_small.g_plus));
}

TEST_CASE("monte-carlo average is thread-count independent") {
    const auto ideal = tst::ideal_payoff();
    const auto a = tst::haar_average_oracle(ideal, 3000, 42, 1);
    const auto b = tst::haar_average_oracle(ideal, 3000, 42, 4);
    CHECK(max_abs(a.g_plus - b.g_plus) == 0.0);
    CHECK(max_abs(a.g_minus - b.g_minus) == 0.0);
}

TEST_CASE("link product reproduces the simulated circuit statistics") {
    std::mt19937_64 rng(13);
    for (auto order : {tst::Order::a_before_b, tst::Order::b_before_a}) {
        for (int rep = 0; rep < 3; ++rep) {
            tst::CircuitElements c;
            c.order = order;
            c.dim_a = 3;
            c.dim_b = 2;
            const Vector prep = random_state(2 * c.dim_b, rng);
            c.rho = prep * prep.adjoint();
            // random isometry channel (2*dim_b -> 2*dim_a)
            Matrix g(2 * c.dim_a, 2 * c.dim_b);
            for (Eigen::Index i = 0; i < g.rows(); ++i)
                for (Eigen::Index j = 0; j < g.cols(); ++j)
                    g(i, j) = Complex(uniform01(rng) * 2 - 1, uniform01(rng) * 2 - 1);
            Eigen::HouseholderQR<Matrix> qr(g);
            c.channel = {Matrix(Matrix(qr.householderQ()).leftCols(2 * c.dim_b))};
            // random POVM from a random PSD contraction
            Matrix e(2 * c.dim_a, 2 * c.dim_a);
            for (Eigen::Index i = 0; i < e.rows(); ++i)
                for (Eigen::Index j = 0; j < e.cols(); ++j)
                    e(i, j) = Complex(uniform01(rng) * 2 - 1, uniform01(rng) * 2 - 1);
            e = Matrix(e * e.adjoint());
            Eigen::SelfAdjointEigenSolver<Matrix> pe(e, Eigen::EigenvaluesOnly);
            e /= 1.05 * pe.eigenvalues().maxCoeff();  // PSD and strictly below identity
            c.e_plus = e;
            c.e_minus = Matrix::Identity(2 * c.dim_a, 2 * c.dim_a) - e;

            const auto t = tst::tester_from_circuit(c);
            CHECK(t.residuals.max() <= 1e-9);
            for (int cr = 0; cr < 4; ++cr) {
                const auto op_a = random_tp_channel(2, rng);
                const auto op_b = random_tp_channel(3, rng);
                const auto direct = tst::simulate_circuit(c, op_a, op_b);
                const auto via_tester = tst::tester_probabilities(
                    t, channels::choi_of_channel(op_a), channels::choi_of_channel(op_b));
                CHECK(std::abs(direct.first - via_tester.first) <= 1e-9);
                CHECK(std::abs(direct.second - via_tester.second) <= 1e-9);
            }
        }
    }
}

TEST_CASE("the explicit circuit discriminates the two sets perfectly") {
    const auto c = tst::perfect_discrimination_circuit();
    const Matrix& v = c.channel.front();
    CHECK(max_abs(Matrix(v.adjoint() * v) - Matrix::Identity(4, 4)) < 1e-14);

    // at zero angles the output is the maximally entangled pair times |+>
    Vector expected = Vector::Zero(12);
    expected[0] = expected[1] = expected[9] = expected[10] = 0.5;
    Eigen::SelfAdjointEigenSolver<Matrix> es(c.rho);
    const Vector prep = es.eigenvectors().col(3);
    Vector out = v * prep;
    // fix the arbitrary eigenvector phase before comparing
    const Complex phase = out[0] / std::abs(out[0]);
    out /= phase;
    CHECK((out - expected).cwiseAbs().maxCoeff() < 1e-12);

    CHECK(tst::verify_perfect_discrimination(c, 300, 2024) <= 1e-10);

    // tester built from the circuit wins the ideal game outright
    const auto t = tst::tester_from_circuit(c);
    CHECK(t.residuals.max() <= 1e-9);
    const auto ideal = tst::ideal_payoff();
    const double p = 0.5 * (t.w_plus.transpose() * ideal.g_plus).trace().real() +
                     0.5 * (t.w_minus.transpose() * ideal.g_minus).trace().real();
    CHECK(p >= 1.0 - 1e-6);
    CHECK(p <= 1.0 + 1e-9);
}

TEST_CASE("rewiring the isometry breaks the discrimination") {
    // phase-only corruptions turn out to cancel in every cross-set overlap,
    // so the negative control rewires two columns instead
    auto c = tst::perfect_discrimination_circuit();
    Matrix v = c.channel.front();
    v.col(1).swap(v.col(3));
    c.channel = {v};
    CHECK(max_abs(Matrix(v.adjoint() * v) - Matrix::Identity(4, 4)) < 1e-14);
    CHECK(tst::verify_perfect_discrimination(c, 300, 2024) > 0.1);
}

TEST_CASE("serialization round-trips payoffs and testers") {
    const auto ideal = tst::ideal_payoff();
    const auto back = serialize::payoff_from_json(serialize::payoff_to_json(ideal));
    CHECK(max_abs(back.g_plus - ideal.g_plus) == 0.0);
    CHECK(back.provenance == tst::Provenance::ideal);

    const auto t = coin_flip_tester(tst::Order::b_before_a);
    const auto t2 = serialize::tester_from_json(serialize::tester_to_json(t));
    CHECK(t2.order == tst::Order::b_before_a);
    CHECK(max_abs(t2.w_plus - t.w_plus) == 0.0);
}

TEST_CASE("tester_from_circuit rejects inconsistent dimensions") {
    tst::CircuitElements c;
    c.order = tst::Order::a_before_b;
    c.dim_a = 2;
    c.dim_b = 2;
    c.rho = Matrix::Identity(4, 4) / 4.0;
    c.channel = {Matrix::Identity(3, 4)};  // wrong output dimension
    c.e_plus = Matrix::Identity(4, 4);
    c.e_minus = Matrix::Zero(4, 4);
    CHECK_THROWS_AS(tst::tester_from_circuit(c), std::invalid_argument);
}
