#pragma once

namespace quadham {

/// Numerical thresholds shared by the analysis and the oracle. All relative
/// thresholds are multiplied by the stated scale at the point of use.
struct Tolerances {
  double reality = 1e-9;             // |Im lambda|, pairing; x (1 + |R|)
  double zero_frequency = 1e-10;     // x (1 + |R|)
  double rank = 1e-10;               // singular values; x sigma_max
  double definiteness = 1e-10;       // eigenvalues of gamma; x (1 + |gamma|)
  double ladder_residual = 1e-9;     // |Hc - lambda c|; x |H| |c|
  double offset_imaginary = 1e-12;   // absolute
  double hermiticity = 1e-12;        // Fock matrix; x (1 + max|H_ij|)
  double shell_coupling = 1e-13;     // Fock matrix; x (1 + max|H_ij|)
  double oracle_merge = 1e-8;        // x (1 + max|E|)
  double lattice_merge = 1e-9;       // x (1 + max|E|)
  double vacuum_annihilation = 1e-9; // x |c|

  /// Every threshold multiplied by `factor`.
  Tolerances scaled(double factor) const {
    Tolerances t = *this;
    for (double* v : {&t.reality, &t.zero_frequency, &t.rank, &t.definiteness,
                      &t.ladder_residual, &t.offset_imaginary, &t.hermiticity,
                      &t.shell_coupling, &t.oracle_merge, &t.lattice_merge,
                      &t.vacuum_annihilation}) {
      *v *= factor;
    }
    return t;
  }
};

}  // namespace quadham
