#include "quadham/phase_space.hpp"

#include <cmath>
#include <cstdio>
#include <utility>

#include "quadham/error.hpp"

namespace quadham {

namespace {

void require_same_basis(const PhaseSpaceBasis& a, const PhaseSpaceBasis& b, const char* what) {
  if (a != b) {
    throw InvalidInput(std::string(what) + ": basis mismatch (" + std::to_string(a.modes()) +
                       " vs " + std::to_string(b.modes()) + " modes)");
  }
}

std::string format_magnitude(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// Renders sum_i v_i name_i with signs; empty string for an all-zero vector.
std::string render_real_combination(const PhaseSpaceBasis& basis, const Eigen::VectorXd& v) {
  std::string out;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double c = v[i];
    if (c == 0.0) continue;
    const bool negative = c < 0.0;
    if (out.empty()) {
      if (negative) out += "-";
    } else {
      out += negative ? " - " : " + ";
    }
    const double mag = std::abs(c);
    if (mag != 1.0) out += format_magnitude(mag);
    out += basis.operator_name(OperatorIndex{static_cast<std::size_t>(i)});
  }
  return out;
}

}  // namespace

PhaseSpaceBasis::PhaseSpaceBasis(std::size_t modes) : modes_(modes) {
  if (modes == 0) throw InvalidInput("phase space needs at least one mode");
}

OperatorIndex PhaseSpaceBasis::x(std::size_t mode) const {
  if (mode >= modes_) throw InvalidInput("mode index out of range");
  return OperatorIndex{mode};
}

OperatorIndex PhaseSpaceBasis::p(std::size_t mode) const {
  if (mode >= modes_) throw InvalidInput("mode index out of range");
  return OperatorIndex{modes_ + mode};
}

Eigen::MatrixXd PhaseSpaceBasis::symplectic_matrix() const {
  const auto k = static_cast<Eigen::Index>(modes_);
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(2 * k, 2 * k);
  j.topRightCorner(k, k).setIdentity();
  j.bottomLeftCorner(k, k) = -Eigen::MatrixXd::Identity(k, k);
  return j;
}

std::string PhaseSpaceBasis::coordinate_name(std::size_t mode) const {
  if (modes_ <= 3) return std::string(1, "xyz"[mode]);
  return "x" + std::to_string(mode + 1);
}

std::string PhaseSpaceBasis::operator_name(OperatorIndex op) const {
  const std::size_t mode = mode_of(op);
  if (is_position(op)) return coordinate_name(mode);
  if (modes_ == 1) return "p";
  if (modes_ <= 3) return "p_" + coordinate_name(mode);
  return "p" + std::to_string(mode + 1);
}

LinearForm::LinearForm(PhaseSpaceBasis basis, Eigen::VectorXcd coeffs)
    : basis_(basis), coeffs_(std::move(coeffs)) {
  if (static_cast<std::size_t>(coeffs_.size()) != basis_.dimension()) {
    throw InvalidInput("linear form has " + std::to_string(coeffs_.size()) +
                       " coefficients, basis needs " + std::to_string(basis_.dimension()));
  }
  if (!coeffs_.allFinite()) throw InvalidInput("linear form coefficients must be finite");
}

LinearForm LinearForm::adjoint() const { return LinearForm(basis_, coeffs_.conjugate()); }

std::string LinearForm::to_string() const {
  const std::string re = render_real_combination(basis_, coeffs_.real());
  const std::string im = render_real_combination(basis_, coeffs_.imag());
  if (im.empty()) return re.empty() ? "0" : re;
  const bool single_imag = (coeffs_.imag().array() != 0.0).count() == 1;
  std::string imag_part;
  if (single_imag) {
    imag_part = im.front() == '-' ? "-i" + im.substr(1) : "i" + im;
  } else {
    imag_part = "i(" + im + ")";
  }
  if (re.empty()) return imag_part;
  if (imag_part.front() == '-') return re + " - " + imag_part.substr(1);
  return re + " + " + imag_part;
}

QuadraticForm::QuadraticForm(PhaseSpaceBasis basis, Eigen::MatrixXd gamma, double offset)
    : basis_(basis), gamma_(std::move(gamma)), offset_(offset) {
  const auto n = static_cast<Eigen::Index>(basis_.dimension());
  if (gamma_.rows() != n || gamma_.cols() != n) {
    throw InvalidInput("gamma must be " + std::to_string(n) + "x" + std::to_string(n));
  }
  if (!gamma_.allFinite() || !std::isfinite(offset_)) {
    throw InvalidInput("quadratic form entries must be finite");
  }
  if (gamma_ != gamma_.transpose()) throw InvalidInput("gamma must be exactly symmetric");
}

QuadraticForm operator+(const QuadraticForm& a, const QuadraticForm& b) {
  require_same_basis(a.basis_, b.basis_, "quadratic form sum");
  return QuadraticForm(a.basis_, a.gamma_ + b.gamma_, a.offset_ + b.offset_);
}

QuadraticForm operator*(double s, const QuadraticForm& q) {
  return QuadraticForm(q.basis_, s * q.gamma_, s * q.offset_);
}

bool operator==(const QuadraticForm& a, const QuadraticForm& b) {
  return a.basis_ == b.basis_ && a.gamma_ == b.gamma_ && a.offset_ == b.offset_;
}

QuadraticForm make_quadratic_form(std::size_t modes, std::span<const MonomialTerm> terms,
                                  double constant, const Tolerances& tol) {
  const PhaseSpaceBasis basis(modes);
  const auto n = basis.dimension();
  const Eigen::MatrixXd j = basis.symplectic_matrix();
  Eigen::MatrixXd gamma = Eigen::MatrixXd::Zero(n, n);
  double imaginary_offset = 0.0;
  for (const auto& t : terms) {
    if (t.left.value >= n || t.right.value >= n) {
      throw InvalidInput("monomial index out of range for " + std::to_string(modes) + " modes");
    }
    if (!std::isfinite(t.coefficient)) throw InvalidInput("monomial coefficient must be finite");
    const auto l = static_cast<Eigen::Index>(t.left.value);
    const auto r = static_cast<Eigen::Index>(t.right.value);
    gamma(l, r) += 0.5 * t.coefficient;
    gamma(r, l) += 0.5 * t.coefficient;
    imaginary_offset += 0.5 * t.coefficient * j(l, r);
  }
  if (!std::isfinite(constant)) throw InvalidInput("constant term must be finite");
  if (std::abs(imaginary_offset) > tol.offset_imaginary) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "non-Hermitian input: imaginary constant %.3e", imaginary_offset);
    throw InvalidInput(buf);
  }
  return QuadraticForm(basis, std::move(gamma), constant);
}

QuadraticForm quadratic_form_from_matrix(const PhaseSpaceBasis& basis,
                                         const Eigen::MatrixXd& coefficients, double constant,
                                         const Tolerances& tol) {
  const auto n = static_cast<Eigen::Index>(basis.dimension());
  if (coefficients.rows() != n || coefficients.cols() != n) {
    throw InvalidInput("coefficient matrix must be " + std::to_string(n) + "x" +
                       std::to_string(n));
  }
  std::vector<MonomialTerm> terms;
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) {
      if (coefficients(a, b) != 0.0 || !std::isfinite(coefficients(a, b))) {
        terms.push_back({OperatorIndex{static_cast<std::size_t>(a)},
                         OperatorIndex{static_cast<std::size_t>(b)}, coefficients(a, b)});
      }
    }
  }
  return make_quadratic_form(basis.modes(), terms, constant, tol);
}

AdjointMatrix::AdjointMatrix(QuadraticForm source, Eigen::MatrixXd real)
    : source_(std::move(source)), real_(std::move(real)) {
  entries_.resize(real_.rows(), real_.cols());
  entries_.real().setZero();
  entries_.imag() = real_;
}

AdjointMatrix adjoint_representation(const QuadraticForm& q) {
  // [O_a O_b, O_c] = i (J_bc O_a + J_ac O_b) gives H_jc = i ((gamma + gamma^T) J)_jc.
  const Eigen::MatrixXd s = q.gamma() + q.gamma().transpose();
  return AdjointMatrix(q, s * q.basis().symplectic_matrix());
}

Complex linear_commutator(const LinearForm& a, const LinearForm& b) {
  require_same_basis(a.basis(), b.basis(), "linear commutator");
  const Eigen::MatrixXcd j = a.basis().symplectic_matrix().cast<Complex>();
  const Complex s = a.coeffs().transpose() * j * b.coeffs();
  return Complex(0.0, 1.0) * s;
}

QuadraticForm quadratic_commutator(const QuadraticForm& a, const QuadraticForm& b) {
  require_same_basis(a.basis(), b.basis(), "quadratic commutator");
  // adj([A,B]) = [adj A, adj B] with adj(Q) = 2i gamma_Q J, and adj(i q) = -2 gamma_q J,
  // so gamma_q = 2 (gA J gB - gB J gA). Commutators of Weyl-ordered quadratics carry
  // no constant term.
  const Eigen::MatrixXd j = a.basis().symplectic_matrix();
  const Eigen::MatrixXd m = a.gamma() * j * b.gamma();
  Eigen::MatrixXd g = 2.0 * (m + m.transpose());
  return QuadraticForm(a.basis(), std::move(g), 0.0);
}

Eigen::VectorXcd commutator_action(const AdjointMatrix& h, const LinearForm& z) {
  require_same_basis(h.source().basis(), z.basis(), "commutator action");
  return h.entries() * z.coeffs();
}

}  // namespace quadham
