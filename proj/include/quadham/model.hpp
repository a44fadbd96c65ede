#pragma once

// The charged oscillator in a magnetic field (equivalently a rotating trap):
//   H = p1^2/2m1 + p2^2/2m2 + k1 x1^2/2 + k2 x2^2/2 + omega (x1 p2 - x2 p1),
// its dimensionless three-parameter form
//   (2 / hbar w1) H = px^2 + py^2/mu + x^2 + k y^2 + b (x py - y px),
// and the symmetric one-parameter family mu = k = 1.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "quadham/phase_space.hpp"
#include "quadham/spectral.hpp"
#include "quadham/tolerances.hpp"

namespace quadham {

struct PhysicalParameters {
  double m1 = 1.0;
  double m2 = 1.0;
  double k1 = 1.0;
  double k2 = 1.0;
  double omega = 0.0;
  double hbar = 1.0;
};

struct DimensionlessModel {
  double mu = 1.0;
  double k = 1.0;
  double b = 0.0;
  /// hbar * w1 / 2: physical energy per dimensionless unit.
  double energy_scale = 1.0;
  /// L with L^2 = hbar / sqrt(m1 k1); x1 = L x.
  double length_scale = 1.0;

  bool symmetric() const { return mu == 1.0 && k == 1.0; }
  double to_physical_energy(double dimensionless) const { return energy_scale * dimensionless; }
};

DimensionlessModel reduce_to_dimensionless(const PhysicalParameters& p);

/// Symmetric family member with the given b (mu = k = 1).
DimensionlessModel symmetric_model(double b);

QuadraticForm build_model(const DimensionlessModel& d);

/// H0 = px^2 + py^2 + x^2 + y^2.
QuadraticForm isotropic_oscillator();
/// Lz = x py - y px.
QuadraticForm angular_momentum();

/// S_B = (px - B y/2)^2 + (py + B x/2)^2, expanded.
QuadraticForm sb_operator(double field);

/// Ladder operators of the symmetric family, independent of b, in the basis
/// order (x, y, px, py):
///   Z1 = -y + px - i(x + py)   lambda = -2 - b
///   Z2 =  y + px + i(x - py)   lambda =  2 - b
///   Z3 =  y + px - i(x - py)   lambda =  b - 2
///   Z4 = -y + px + i(x + py)   lambda =  2 + b
LinearForm symmetric_ladder_operator(int index);
/// The frequency attached to symmetric_ladder_operator(index) at parameter b.
double symmetric_ladder_frequency(int index, double b);

/// If q is exactly a member of the symmetric family, its b.
std::optional<double> symmetric_family_parameter(const QuadraticForm& q);

/// Deterministic random positive-definite form: gamma = Q diag(d) Q^T with Q a
/// random orthogonal matrix and d uniform in [lo, hi]; offset 0.
QuadraticForm random_positive_definite_form(std::size_t modes, std::uint64_t seed,
                                            double lo = 0.5, double hi = 1.5);

struct SymmetryReport {
  double parity_residual = 0.0;
  double swap_residual = 0.0;
  double spectrum_residual = 0.0;
  bool parity_ok = false;
  bool swap_ok = false;
  bool spectra_match = false;
  bool passed() const { return parity_ok && swap_ok && spectra_match; }
};

/// Parity commutes with the adjoint matrix; conjugating adj H(b) by the swap
/// (x,y,px,py) -> (y,x,py,px) gives adj H(-b); H(b), H(-b) share frequencies.
SymmetryReport symmetry_checks(const DimensionlessModel& d, const Tolerances& tol = {});

struct ScanSample {
  double b = 0.0;
  SpectrumClass classification = SpectrumClass::NonRealFrequencies;
  std::vector<double> generators;
  std::optional<double> ground_energy;
  double gamma_min = 0.0;
};

struct Transition {
  double b = 0.0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  SpectrumClass from = SpectrumClass::NonRealFrequencies;
  SpectrumClass to = SpectrumClass::NonRealFrequencies;
};

struct PhaseScanResult {
  std::vector<ScanSample> samples;
  std::vector<Transition> transitions;
};

/// Classifies `steps` evenly spaced b in [b_from, b_to] with mu, k taken from
/// `shape`, and locates classification changes by bisection on the smallest
/// eigenvalue of gamma down to `resolution`.
PhaseScanResult phase_scan(const DimensionlessModel& shape, double b_from, double b_to, int steps,
                           const Tolerances& tol = {}, double resolution = 1e-10);

}  // namespace quadham
