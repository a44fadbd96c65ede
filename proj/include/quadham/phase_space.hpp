#pragma once

// Operator basis {x_1..x_K, p_1..p_K}, linear and quadratic forms over it, and
// the exact maps from quadratic forms to adjoint matrices and commutators.
//
// Conventions (hbar = 1):
//   O = (x_1, ..., x_K, p_1, ..., p_K),  [O_m, O_n] = i J_mn,
//   J = [[0, I], [-I, 0]].
// A quadratic form is H = sum_ij gamma_ij O_i O_j + offset with gamma real
// symmetric, so the operator part is Weyl-ordered and every reordering
// constant lives in `offset`.

#include <complex>
#include <cstddef>
#include <span>
#include <string>

#include <Eigen/Dense>

#include "quadham/tolerances.hpp"

namespace quadham {

using Complex = std::complex<double>;

/// Position in the ordered operator basis (0-based).
struct OperatorIndex {
  std::size_t value = 0;
  friend bool operator==(OperatorIndex, OperatorIndex) = default;
};

class PhaseSpaceBasis {
 public:
  explicit PhaseSpaceBasis(std::size_t modes);

  std::size_t modes() const noexcept { return modes_; }
  std::size_t dimension() const noexcept { return 2 * modes_; }

  OperatorIndex x(std::size_t mode) const;
  OperatorIndex p(std::size_t mode) const;
  bool is_position(OperatorIndex op) const { return op.value < modes_; }
  std::size_t mode_of(OperatorIndex op) const { return op.value % modes_; }

  /// J with [O_m, O_n] = i J_mn.
  Eigen::MatrixXd symplectic_matrix() const;

  /// "x", "y", "p_x", ... for K <= 3, "x1", "p1", ... otherwise.
  std::string operator_name(OperatorIndex op) const;
  /// Name of the coordinate of a mode ("x", "y", "z" or "x1"...).
  std::string coordinate_name(std::size_t mode) const;

  friend bool operator==(const PhaseSpaceBasis&, const PhaseSpaceBasis&) = default;

 private:
  std::size_t modes_;
};

/// Z = sum_i c_i O_i.
class LinearForm {
 public:
  LinearForm(PhaseSpaceBasis basis, Eigen::VectorXcd coeffs);

  const PhaseSpaceBasis& basis() const noexcept { return basis_; }
  const Eigen::VectorXcd& coeffs() const noexcept { return coeffs_; }

  /// Z^dagger: coefficients conjugated entrywise.
  LinearForm adjoint() const;
  bool is_zero() const { return coeffs_.isZero(0.0); }

  /// Human-readable rendering such as "-y + p_x + i(x + p_y)" for
  /// coefficients that are real multiples of 1 and i.
  std::string to_string() const;

 private:
  PhaseSpaceBasis basis_;
  Eigen::VectorXcd coeffs_;
};

/// coefficient * O_left * O_right, operator order as written.
struct MonomialTerm {
  OperatorIndex left;
  OperatorIndex right;
  double coefficient = 0.0;
};

class QuadraticForm {
 public:
  /// `gamma` must be exactly symmetric with finite entries.
  QuadraticForm(PhaseSpaceBasis basis, Eigen::MatrixXd gamma, double offset = 0.0);

  const PhaseSpaceBasis& basis() const noexcept { return basis_; }
  const Eigen::MatrixXd& gamma() const noexcept { return gamma_; }
  double offset() const noexcept { return offset_; }

  bool is_zero() const { return gamma_.isZero(0.0) && offset_ == 0.0; }

  friend QuadraticForm operator+(const QuadraticForm& a, const QuadraticForm& b);
  friend QuadraticForm operator*(double s, const QuadraticForm& q);
  friend bool operator==(const QuadraticForm& a, const QuadraticForm& b);

 private:
  PhaseSpaceBasis basis_;
  Eigen::MatrixXd gamma_;
  double offset_;
};

/// Builds the Weyl-symmetric form of sum_t c_t O_{l_t} O_{r_t} + constant.
/// Each product is split as c/2 (O_l O_r + O_r O_l) + c/2 [O_l, O_r]; the
/// commutator constants i c J_lr / 2 are accumulated and must cancel.
QuadraticForm make_quadratic_form(std::size_t modes, std::span<const MonomialTerm> terms,
                                  double constant = 0.0, const Tolerances& tol = {});

/// Same as make_quadratic_form for a dense coefficient matrix C read as
/// sum_ij C_ij O_i O_j (C need not be symmetric).
QuadraticForm quadratic_form_from_matrix(const PhaseSpaceBasis& basis,
                                         const Eigen::MatrixXd& coefficients,
                                         double constant = 0.0, const Tolerances& tol = {});

/// The matrix H with [H, O_i] = sum_j H_ji O_j.
class AdjointMatrix {
 public:
  const Eigen::MatrixXcd& entries() const noexcept { return entries_; }
  const QuadraticForm& source() const noexcept { return source_; }
  /// The real matrix R = (gamma + gamma^T) J; entries() == i R.
  const Eigen::MatrixXd& real_generator() const noexcept { return real_; }

 private:
  friend AdjointMatrix adjoint_representation(const QuadraticForm& q);
  AdjointMatrix(QuadraticForm source, Eigen::MatrixXd real);

  QuadraticForm source_;
  Eigen::MatrixXd real_;
  Eigen::MatrixXcd entries_;
};

AdjointMatrix adjoint_representation(const QuadraticForm& q);

/// [a.O, b.O] = i a^T J b.
Complex linear_commutator(const LinearForm& a, const LinearForm& b);

/// The form q with [A, B] = i q. Zero iff the adjoint matrices commute.
QuadraticForm quadratic_commutator(const QuadraticForm& a, const QuadraticForm& b);

/// Coefficients of [H, Z] in the operator basis, i.e. H c.
Eigen::VectorXcd commutator_action(const AdjointMatrix& h, const LinearForm& z);

}  // namespace quadham
