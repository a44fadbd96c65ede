#pragma once

// Brute-force spectral oracle: the quadratic form assembled in a truncated
// number basis (per-mode cutoff) and diagonalized densely. Independent of the
// adjoint-matrix route.

#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "quadham/phase_space.hpp"
#include "quadham/spectral.hpp"
#include "quadham/tolerances.hpp"

namespace quadham {

class FockTruncation {
 public:
  static constexpr std::size_t kDefaultCap = 20000;

  FockTruncation(std::size_t modes, int n_max, std::size_t cap = kDefaultCap);

  std::size_t modes() const noexcept { return modes_; }
  int n_max() const noexcept { return n_max_; }
  std::size_t dim() const noexcept { return dim_; }

  /// Occupation numbers of basis state `index`; mode 0 varies slowest.
  std::vector<int> occupations(std::size_t index) const;
  int total_quanta(std::size_t index) const;

 private:
  std::size_t modes_;
  int n_max_;
  std::size_t dim_;
};

/// sum gamma_ij O_i O_j + offset in the truncated basis, with
/// x = (a + a^dagger)/sqrt(2), p = i(a^dagger - a)/sqrt(2). Same-mode products
/// are formed one level above the cutoff so every kept matrix element is exact.
Eigen::MatrixXcd build_fock_matrix(const QuadraticForm& q, const FockTruncation& t,
                                   const Tolerances& tol = {});

/// Matrix of a linear form in the truncated basis.
Eigen::MatrixXcd fock_linear_operator(const LinearForm& z, const FockTruncation& t);

/// True when no matrix element connects different total-quanta shells.
bool is_shell_preserving(const Eigen::MatrixXcd& h, const FockTruncation& t,
                         const Tolerances& tol = {});

struct EnergyCluster {
  double energy = 0.0;
  int count = 0;
};

struct OracleSpectrum {
  /// All dim eigenvalues, ascending.
  Eigen::VectorXd eigenvalues;
  /// Column k is the eigenvector of eigenvalues[k].
  Eigen::MatrixXcd eigenvectors;
  /// n_max for shell-preserving forms (shells 0..n_max lie fully inside the
  /// truncation), 0 otherwise.
  int shell_exact_upto = 0;
  bool shell_preserving = false;
  /// Eigenvalues per complete shell (index = total quanta), shell-preserving only.
  std::vector<std::vector<double>> shell_eigenvalues;
  std::vector<EnergyCluster> clusters;
  double merge_tolerance = 0.0;

  /// Eigenvalues within the merge tolerance of `energy`.
  int multiplicity_of(double energy) const;
};

OracleSpectrum oracle_spectrum(const QuadraticForm& q, const FockTruncation& t,
                               const Tolerances& tol = {});

struct LevelComparison {
  double lattice_energy = 0.0;
  double oracle_energy = 0.0;
  double abs_diff = 0.0;
};

struct DegeneracyComparison {
  double energy = 0.0;
  int lattice_count = 0;
  int oracle_count = 0;
  bool agree = false;
};

struct ComparisonReport {
  bool shell_exact = false;
  /// Complete shells compared, or -1 when the lowest-quarter window was used.
  int shells_compared = -1;
  std::vector<LevelComparison> levels;
  double max_abs_diff = 0.0;
  std::vector<DegeneracyComparison> degeneracies;
  bool degeneracies_agree = true;
  /// Multiplicity of the vacuum energy over the whole oracle spectrum.
  int vacuum_multiplicity = 0;
  std::string note;
};

/// Shell-preserving oracles are compared shell-by-shell against the lattice up
/// to shell_exact_upto (zero-frequency modes expanded); otherwise the lowest
/// quarter of the oracle spectrum is compared with the lowest lattice energies.
ComparisonReport compare_with_lattice(const OracleSpectrum& o, const SpectrumReport& r,
                                      const Tolerances& tol = {});

}  // namespace quadham
