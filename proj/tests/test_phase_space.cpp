#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "quadham/error.hpp"
#include "quadham/model.hpp"
#include "quadham/phase_space.hpp"

using namespace quadham;

namespace {

LinearForm unit(std::size_t modes, std::size_t index) {
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(2 * modes));
  c[static_cast<Eigen::Index>(index)] = 1.0;
  return LinearForm(PhaseSpaceBasis(modes), c);
}

QuadraticForm diag_form(std::size_t modes, const std::vector<double>& d, double offset = 0.0) {
  Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(d.data(), static_cast<Eigen::Index>(d.size()));
  return QuadraticForm(PhaseSpaceBasis(modes), v.asDiagonal(), offset);
}

}  // namespace

TEST_CASE("basis naming and symplectic matrix") {
  const PhaseSpaceBasis b2(2);
  CHECK(b2.dimension() == 4);
  CHECK(b2.operator_name(OperatorIndex{0}) == "x");
  CHECK(b2.operator_name(OperatorIndex{3}) == "p_y");
  CHECK(PhaseSpaceBasis(1).operator_name(OperatorIndex{1}) == "p");
  CHECK(PhaseSpaceBasis(4).operator_name(OperatorIndex{5}) == "p2");
  const Eigen::MatrixXd j = b2.symplectic_matrix();
  CHECK(j(0, 2) == 1.0);
  CHECK(j(3, 1) == -1.0);
  CHECK((j + j.transpose()).isZero(0.0));
  CHECK_THROWS_AS(PhaseSpaceBasis(0), InvalidInput);
  CHECK_THROWS_AS(b2.x(2), InvalidInput);
}

TEST_CASE("monomials are split into a symmetric part and a constant") {
  const std::vector<MonomialTerm> xp = {{OperatorIndex{0}, OperatorIndex{1}, 1.0},
                                        {OperatorIndex{1}, OperatorIndex{0}, 1.0}};
  const QuadraticForm q = make_quadratic_form(1, xp);
  CHECK(q.gamma()(0, 1) == 1.0);
  CHECK(q.gamma()(1, 0) == 1.0);
  CHECK(q.offset() == 0.0);

  const std::vector<MonomialTerm> only_xp = {{OperatorIndex{0}, OperatorIndex{1}, 1.0}};
  CHECK_THROWS_AS(make_quadratic_form(1, only_xp), InvalidInput);

  Eigen::MatrixXd asym(2, 2);
  asym << 1, 0.5, 0.5, 1;
  CHECK_NOTHROW(QuadraticForm(PhaseSpaceBasis(1), asym));
  asym(0, 1) = 0.25;
  CHECK_THROWS_AS(QuadraticForm(PhaseSpaceBasis(1), asym), InvalidInput);
  asym(0, 1) = std::nan("");
  CHECK_THROWS_AS(QuadraticForm(PhaseSpaceBasis(1), asym), InvalidInput);
}

TEST_CASE("adjoint matrix of simple forms") {
  SUBCASE("zero gamma") {
    const QuadraticForm z(PhaseSpaceBasis(2), Eigen::MatrixXd::Zero(4, 4));
    CHECK(adjoint_representation(z).entries().isZero(0.0));
  }
  SUBCASE("K=1 oscillator") {
    const AdjointMatrix h = adjoint_representation(diag_form(1, {1, 1}));
    Eigen::MatrixXcd expected(2, 2);
    expected << 0, Complex(0, 2), Complex(0, -2), 0;
    CHECK(h.entries() == expected);
  }
  SUBCASE("symmetric model, exact for several b") {
    for (double b : {-3.0, -2.0, -0.75, 0.0, 1.0, 2.0, 3.0, 1.0 / 3.0}) {
      CHECK(adjoint_representation(build_model(symmetric_model(b))).entries() ==
            oracle::symmetric_adjoint(b));
    }
  }
}

TEST_CASE("adjoint matrix agrees with the explicit commutator expansion") {
  std::mt19937_64 gen(7);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t k = 1 + static_cast<std::size_t>(trial % 3);
    const Eigen::MatrixXd g = oracle::random_symmetric(k, gen);
    const AdjointMatrix h = adjoint_representation(QuadraticForm(PhaseSpaceBasis(k), g));
    const Eigen::MatrixXcd ref = oracle::adjoint_by_expansion(g);
    CHECK((h.entries() - ref).cwiseAbs().maxCoeff() <= 1e-14);
  }
}

TEST_CASE("linear commutator") {
  CHECK(linear_commutator(unit(1, 0), unit(1, 1)) == Complex(0, 1));
  const auto z1 = symmetric_ladder_operator(1);
  const auto z2 = symmetric_ladder_operator(2);
  const auto z3 = symmetric_ladder_operator(3);
  CHECK(linear_commutator(z3, z2) == Complex(4, 0));
  CHECK(linear_commutator(z1, z2) == Complex(0, 0));

  std::mt19937_64 gen(11);
  std::normal_distribution<double> g;
  for (int t = 0; t < 50; ++t) {
    Eigen::VectorXcd a(6), b(6);
    for (int i = 0; i < 6; ++i) {
      a[i] = Complex(g(gen), g(gen));
      b[i] = Complex(g(gen), g(gen));
    }
    const LinearForm la(PhaseSpaceBasis(3), a), lb(PhaseSpaceBasis(3), b);
    CHECK(std::abs(linear_commutator(la, lb) + linear_commutator(lb, la)) <= 1e-12);
  }
  CHECK_THROWS_AS(linear_commutator(unit(1, 0), unit(2, 0)), InvalidInput);
}

TEST_CASE("quadratic commutator") {
  const QuadraticForm x2 = diag_form(1, {1, 0});
  const QuadraticForm p2 = diag_form(1, {0, 1});
  const QuadraticForm q = quadratic_commutator(x2, p2);
  // [x^2, p^2] = i * 2(xp + px)
  Eigen::MatrixXd expected(2, 2);
  expected << 0, 2, 2, 0;
  CHECK(q.gamma() == expected);
  CHECK(q.offset() == 0.0);

  const QuadraticForm h = build_model(symmetric_model(1.3));
  CHECK(quadratic_commutator(h, h).is_zero());
  CHECK(quadratic_commutator(h, isotropic_oscillator()).is_zero());
  CHECK(quadratic_commutator(h, angular_momentum()).is_zero());
  CHECK_THROWS_AS(quadratic_commutator(x2, isotropic_oscillator()), InvalidInput);
}

TEST_CASE("adjoint map is a Lie homomorphism") {
  // [adj A, adj B] = adj([A, B]) = adj(i q) = i adj(q)
  std::mt19937_64 gen(5);
  for (int t = 0; t < 30; ++t) {
    const std::size_t k = 1 + static_cast<std::size_t>(t % 3);
    const QuadraticForm a(PhaseSpaceBasis(k), oracle::random_symmetric(k, gen));
    const QuadraticForm b(PhaseSpaceBasis(k), oracle::random_symmetric(k, gen));
    const Eigen::MatrixXcd ha = adjoint_representation(a).entries();
    const Eigen::MatrixXcd hb = adjoint_representation(b).entries();
    const Eigen::MatrixXcd lhs = ha * hb - hb * ha;
    const Eigen::MatrixXcd rhs =
        Complex(0, 1) * adjoint_representation(quadratic_commutator(a, b)).entries();
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("commutator action and rendering of linear forms") {
  const AdjointMatrix h = adjoint_representation(build_model(symmetric_model(0.5)));
  const LinearForm z4 = symmetric_ladder_operator(4);
  CHECK(commutator_action(h, z4) == 2.5 * z4.coeffs());
  CHECK(z4.to_string() == "-y + p_x + i(x + p_y)");
  CHECK(z4.adjoint().coeffs() == z4.coeffs().conjugate());
}
