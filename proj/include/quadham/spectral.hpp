#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "quadham/phase_space.hpp"
#include "quadham/tolerances.hpp"

namespace quadham {

/// One distinct eigenvalue of an adjoint matrix.
struct EigenCluster {
  Complex value;
  int algebraic = 0;
  int geometric = 0;
  /// Orthonormal basis of the eigenspace, 2K x geometric.
  Eigen::MatrixXcd basis;
};

struct EigenData {
  /// All 2K eigenvalues, ascending by real part then imaginary part. Imaginary
  /// parts below the reality threshold are set to zero.
  Eigen::VectorXcd eigenvalues;
  /// Eigenspace bases of all clusters side by side (fewer than 2K columns when
  /// defective).
  Eigen::MatrixXcd eigenvectors;
  std::vector<EigenCluster> clusters;
  bool defective = false;
  /// 1 + ||R||_2, the scale of the relative thresholds.
  double scale = 1.0;

  bool all_real() const;
};

/// lambda_plus >= 0; [lowering, raising] = norm_constant = 1 and [H, raising] =
/// increment * raising with increment = +lambda_plus, or -lambda_plus when the
/// creation member of the pair lowers the energy (unbounded forms).
struct FrequencyPair {
  double lambda_plus = 0.0;
  double increment = 0.0;
  LinearForm raising;
  LinearForm lowering;
  double norm_constant = 0.0;
};

enum class SpectrumClass {
  BoundedBelowDiscrete,
  UnboundedLattice,
  CriticalInfiniteMultiplicity,
  DefectiveExceptional,
  NonRealFrequencies,
};

std::string_view to_string(SpectrumClass c);

struct SpectrumReport {
  SpectrumClass classification = SpectrumClass::NonRealFrequencies;
  /// Ordered by lambda_plus descending.
  std::vector<FrequencyPair> pairs;
  std::optional<double> ground_energy;
  /// offset + sum(increments)/2: energy of the state annihilated by every lowering
  /// operator, origin of the ladder lattice. Absent without a lattice.
  std::optional<double> vacuum_energy;
  /// Increments of the creation operators, aligned with `pairs`.
  std::vector<double> lattice_generators;
  /// Whether every lowering operator annihilates exp(-sum x^2/2).
  bool vacuum_is_standard_gaussian = false;
  std::string multiplicity_note;
  /// Spectrum of the symmetric matrix gamma, ascending.
  Eigen::VectorXd gamma_eigenvalues;
  EigenData eigen;
};

/// Eigen-decomposition of H = i R through the real matrix R.
EigenData eigen_decompose(const AdjointMatrix& m, const Tolerances& tol = {});

/// Matches every lambda > 0 with -lambda, builds normalized raising/lowering
/// operators; zero-frequency eigenspaces are split into canonical pairs.
std::vector<FrequencyPair> pair_frequencies(const EigenData& e, const PhaseSpaceBasis& basis,
                                            const Tolerances& tol = {});

SpectrumReport classify_spectrum(const QuadraticForm& q, const Tolerances& tol = {});

struct LatticeLevel {
  double energy = 0.0;
  /// Quanta of each frequency pair, aligned with SpectrumReport::pairs.
  std::vector<int> quanta;
  /// Number of enumerated multi-indices sharing this energy.
  int degeneracy = 1;
  /// Level of a critical spectrum: every energy carries the zero-frequency modes.
  bool infinite_multiplicity = false;
};

struct LatticeOptions {
  /// Also enumerate quanta of zero-frequency pairs (critical spectra). Off, they
  /// are held at zero and levels are flagged infinite_multiplicity.
  bool expand_zero_modes = false;
};

/// E = vacuum_energy + sum n_i g_i over all multi-indices with sum n_i <=
/// max_quanta. Bounded/critical spectra sort by energy; unbounded ones by total
/// quanta then energy; ties broken lexicographically on the quanta.
std::vector<LatticeLevel> spectrum_lattice(const SpectrumReport& r, int max_quanta,
                                           const LatticeOptions& opts = {},
                                           const Tolerances& tol = {});

/// The lowest `count` lattice energies of a bounded-below spectrum, ascending.
std::vector<double> lowest_lattice_energies(const SpectrumReport& r, std::size_t count);

/// lambda with [H, Z] = lambda Z, checked against the adjoint matrix. Throws
/// NotAnEigenoperator when the residual exceeds tol.ladder_residual * |H| |c|.
double ladder_check(const QuadraticForm& q, const LinearForm& z, const Tolerances& tol = {});

/// Sign structure of gamma; anything that is not positive semidefinite counts
/// as Indefinite (the spectrum is then unbounded below).
enum class Definiteness { PositiveDefinite, PositiveSemidefinite, Indefinite };
Definiteness gamma_definiteness(const QuadraticForm& q, const Tolerances& tol = {});

/// Smallest eigenvalue of gamma.
double gamma_min_eigenvalue(const QuadraticForm& q);

}  // namespace quadham
