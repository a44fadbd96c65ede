#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "quadham/error.hpp"
#include "quadham/fock_oracle.hpp"
#include "quadham/model.hpp"

using namespace quadham;

namespace {

QuadraticForm sym(double b) { return build_model(symmetric_model(b)); }

QuadraticForm oscillator_1d() { return QuadraticForm(PhaseSpaceBasis(1), Eigen::MatrixXd::Identity(2, 2)); }

}  // namespace

TEST_CASE("truncation bookkeeping") {
  const FockTruncation t(2, 3);
  CHECK(t.dim() == 16);
  CHECK(t.occupations(0) == std::vector<int>{0, 0});
  CHECK(t.occupations(1) == std::vector<int>{0, 1});
  CHECK(t.occupations(4) == std::vector<int>{1, 0});
  CHECK(t.total_quanta(15) == 6);
  CHECK_THROWS_AS(FockTruncation(3, 30), InvalidInput);
  CHECK_THROWS_AS(FockTruncation(2, -1), InvalidInput);
  CHECK_NOTHROW(FockTruncation(2, 140));
}

TEST_CASE("number-basis matrices") {
  SUBCASE("1D oscillator is diagonal with odd integers") {
    const Eigen::MatrixXcd h = build_fock_matrix(oscillator_1d(), FockTruncation(1, 5));
    Eigen::VectorXcd d(6);
    d << 1, 3, 5, 7, 9, 11;
    CHECK((h - Eigen::MatrixXcd(d.asDiagonal())).cwiseAbs().maxCoeff() <= 1e-14);
  }
  SUBCASE("b = 0 is diagonal with 2 + 2(m+n)") {
    const FockTruncation t(2, 3);
    const Eigen::MatrixXcd h = build_fock_matrix(sym(0.0), t);
    for (Eigen::Index i = 0; i < h.rows(); ++i) {
      for (Eigen::Index j = 0; j < h.cols(); ++j) {
        const double expected = i == j ? 2.0 + 2.0 * t.total_quanta(static_cast<std::size_t>(i)) : 0.0;
        CHECK(std::abs(h(i, j) - expected) <= 1e-14);
      }
    }
  }
  SUBCASE("symmetric model couples equal shells only") {
    for (double b : {-3.0, 0.5, 1.0, 2.0, 7.0}) {
      const FockTruncation t(2, 3);
      const Eigen::MatrixXcd h = build_fock_matrix(sym(b), t);
      bool coupled_within = false;
      for (Eigen::Index i = 0; i < h.rows(); ++i) {
        for (Eigen::Index j = 0; j < h.cols(); ++j) {
          const bool same = t.total_quanta(static_cast<std::size_t>(i)) ==
                            t.total_quanta(static_cast<std::size_t>(j));
          if (!same) CHECK(std::abs(h(i, j)) <= 1e-15);
          if (same && i != j && std::abs(h(i, j)) > 0.1) coupled_within = true;
        }
      }
      CHECK(coupled_within);
      CHECK(is_shell_preserving(h, t));
    }
  }
  SUBCASE("random forms are not shell preserving") {
    const FockTruncation t(2, 4);
    const QuadraticForm q = random_positive_definite_form(2, 9);
    CHECK_FALSE(is_shell_preserving(build_fock_matrix(q, t), t));
  }
  SUBCASE("offset enters the diagonal") {
    const QuadraticForm q(PhaseSpaceBasis(1), Eigen::MatrixXd::Identity(2, 2), -0.5);
    CHECK(std::abs(build_fock_matrix(q, FockTruncation(1, 3))(2, 2) - 4.5) <= 1e-14);
  }
}

TEST_CASE("oracle spectra") {
  SUBCASE("1D oscillator") {
    const OracleSpectrum o = oracle_spectrum(oscillator_1d(), FockTruncation(1, 6));
    for (Eigen::Index n = 0; n < 7; ++n) CHECK(std::abs(o.eigenvalues[n] - (2.0 * n + 1)) <= 1e-12);
    int total = 0;
    for (const auto& c : o.clusters) total += c.count;
    CHECK(total == 7);
  }
  SUBCASE("b = 1 shells reproduce 2 + 3m + n") {
    const OracleSpectrum o = oracle_spectrum(sym(1.0), FockTruncation(2, 6));
    CHECK(o.shell_preserving);
    CHECK(o.shell_exact_upto == 6);
    std::vector<double> shells;
    for (const auto& s : o.shell_eigenvalues) shells.insert(shells.end(), s.begin(), s.end());
    std::sort(shells.begin(), shells.end());
    const auto ref = oracle::symmetric_levels(1.0, 6);
    REQUIRE(shells.size() == ref.size());
    for (std::size_t i = 0; i < ref.size(); ++i) CHECK(std::abs(shells[i] - ref[i]) <= 1e-10);
    const std::vector<double> lowest = {2, 3, 4, 5, 5, 6};
    for (std::size_t i = 0; i < lowest.size(); ++i) CHECK(std::abs(shells[i] - lowest[i]) <= 1e-10);
  }
  SUBCASE("b = 2 multiplicity of the ground level") {
    for (int n_max : {4, 6, 8}) {
      const OracleSpectrum o = oracle_spectrum(sym(2.0), FockTruncation(2, n_max));
      CHECK(o.multiplicity_of(2.0) == n_max + 1);
    }
  }
  SUBCASE("eigenvalues ascending, cluster counts sum to dim") {
    const FockTruncation t(2, 5);
    const OracleSpectrum o = oracle_spectrum(random_positive_definite_form(2, 4), t);
    for (Eigen::Index i = 1; i < o.eigenvalues.size(); ++i) CHECK(o.eigenvalues[i - 1] <= o.eigenvalues[i]);
    int total = 0;
    for (const auto& c : o.clusters) total += c.count;
    CHECK(total == static_cast<int>(t.dim()));
    CHECK(o.shell_exact_upto == 0);
  }
}

TEST_CASE("comparison with the lattice") {
  SUBCASE("b = 1") {
    const QuadraticForm q = sym(1.0);
    const ComparisonReport c = compare_with_lattice(oracle_spectrum(q, FockTruncation(2, 6)), classify_spectrum(q));
    CHECK(c.shell_exact);
    CHECK(c.max_abs_diff <= 1e-8);
    CHECK(c.degeneracies_agree);
    CHECK(c.levels.size() == 28);
  }
  SUBCASE("isotropic degeneracies 1, 2, 3, ...") {
    const QuadraticForm q = sym(0.0);
    const ComparisonReport c = compare_with_lattice(oracle_spectrum(q, FockTruncation(2, 5)), classify_spectrum(q));
    CHECK(c.degeneracies_agree);
    for (std::size_t s = 0; s < c.degeneracies.size(); ++s) {
      CHECK(c.degeneracies[s].oracle_count == static_cast<int>(s + 1));
    }
  }
  SUBCASE("critical point") {
    const QuadraticForm q = sym(2.0);
    const ComparisonReport c = compare_with_lattice(oracle_spectrum(q, FockTruncation(2, 8)), classify_spectrum(q));
    CHECK(c.max_abs_diff <= 1e-8);
    CHECK(c.degeneracies_agree);
    CHECK(c.vacuum_multiplicity == 9);
  }
  SUBCASE("random positive-definite form, lowest quarter") {
    const QuadraticForm q = random_positive_definite_form(2, 42);
    const ComparisonReport c = compare_with_lattice(oracle_spectrum(q, FockTruncation(2, 20)), classify_spectrum(q));
    CHECK_FALSE(c.shell_exact);
    CHECK(c.levels.size() == 441 / 4);
    const std::vector<double> lowest = lowest_lattice_energies(classify_spectrum(q), 10);
    for (std::size_t i = 0; i < 10; ++i) CHECK(c.levels[i].abs_diff <= 1e-6);
    CHECK(std::abs(lowest[0] - c.levels[0].oracle_energy) <= 1e-6);
  }
  SUBCASE("no lattice") {
    Eigen::MatrixXd inverted(2, 2);
    inverted << 1, 0, 0, -1;
    const QuadraticForm q(PhaseSpaceBasis(1), inverted);
    const ComparisonReport c = compare_with_lattice(oracle_spectrum(q, FockTruncation(1, 6)), classify_spectrum(q));
    CHECK_FALSE(c.degeneracies_agree);
    CHECK(c.levels.empty());
  }
}

TEST_CASE("boundedness rule against the oracle floor") {
  // The truncated matrix is a compression of H, so its floor never rises with
  // n_max and never passes below a true ground energy.
  auto floor_at = [](const QuadraticForm& q, int n_max) {
    return oracle_spectrum(q, FockTruncation(q.basis().modes(), n_max)).eigenvalues[0];
  };
  const QuadraticForm b3 = sym(3.0);
  CHECK(floor_at(b3, 8) < floor_at(b3, 4) - 1.0);
  CHECK(floor_at(b3, 12) < floor_at(b3, 8) - 1.0);

  std::mt19937_64 gen(37);
  int indefinite_real = 0;
  for (int t = 0; t < 200 && indefinite_real < 5; ++t) {
    const QuadraticForm q(PhaseSpaceBasis(2), oracle::random_symmetric(2, gen));
    const SpectrumReport r = classify_spectrum(q);
    if (r.classification == SpectrumClass::BoundedBelowDiscrete) {
      const double f20 = floor_at(q, 20);
      const double f24 = floor_at(q, 24);
      CHECK(f24 <= f20 + 1e-9);
      CHECK(f24 >= *r.ground_energy - 1e-9);
      CHECK(f24 - *r.ground_energy <= 1e-2);
    }
    if (r.classification == SpectrumClass::UnboundedLattice) {
      ++indefinite_real;
      CHECK(floor_at(q, 24) < floor_at(q, 12) - 1e-3);
    }
  }
  CHECK(indefinite_real > 0);
}

TEST_CASE("linear operators in the number basis") {
  const FockTruncation t(1, 4);
  Eigen::VectorXcd c(2);
  c << 1.0, Complex(0, -1);
  // x - i p = sqrt(2) a^dagger
  const Eigen::MatrixXcd adag = fock_linear_operator(LinearForm(PhaseSpaceBasis(1), c), t) / std::sqrt(2.0);
  for (int n = 0; n < 4; ++n) CHECK(std::abs(adag(n + 1, n) - std::sqrt(n + 1.0)) <= 1e-14);
}
