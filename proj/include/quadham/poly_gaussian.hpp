#pragma once

// States of the form  scale * f(x_1..x_K) * exp(-sum x_i^2 / 2)  with f a
// polynomial with exact Gaussian-rational coefficients. The scale is kept
// symbolic as sqrt(radicand) * pi^pi_power so that normalized states such as
// (1 - x^2 - y^2)/sqrt(pi) are represented without rounding.
//
// Operators act in position representation: x_i multiplies, p_i = -i d/dx_i,
// so on f G (G the Gaussian) p_i gives (-i df/dx_i + i x_i f) G.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "quadham/exact.hpp"
#include "quadham/phase_space.hpp"
#include "quadham/tolerances.hpp"

namespace quadham {

using Exponents = std::vector<unsigned>;

/// sqrt(radicand) * pi^pi_power * value.
struct ScaledValue {
  ExactComplex value;
  Rational radicand = 1;
  Rational pi_power = 0;

  bool is_zero() const { return value.is_zero(); }
  bool is_one() const { return radicand == 1 && pi_power == 0 && value == ExactComplex(1); }
  std::complex<double> to_complex() const;
};

class PolyGaussian {
 public:
  /// Zero state in K modes.
  explicit PolyGaussian(std::size_t modes);

  std::size_t modes() const noexcept { return modes_; }
  /// Coefficient map; never contains explicit zeros.
  const std::map<Exponents, ExactComplex>& terms() const noexcept { return terms_; }
  const Rational& radicand() const noexcept { return radicand_; }
  const Rational& pi_power() const noexcept { return pi_power_; }
  bool normalized() const noexcept { return normalized_; }

  bool is_zero() const { return terms_.empty(); }
  unsigned degree() const;
  ExactComplex coefficient(const Exponents& e) const;

  void add_term(const Exponents& e, const ExactComplex& c);
  void set_scale(Rational radicand, Rational pi_power);
  PolyGaussian scaled(const ExactComplex& c) const;

  /// <this|this> in closed form from Gaussian moments.
  ScaledValue squared_norm() const;
  /// Divides by the (positive) norm; phase is kept. Perfect-square radicands are
  /// folded into the coefficients.
  PolyGaussian normalize() const;

  /// Canonical rendering, e.g. "(1 − x² − y²)/√π · exp(−(x²+y²)/2)". Real-part
  /// terms first, then imaginary-part terms, each in graded-lex order
  /// (ascending degree, higher power of the earlier coordinate first).
  std::string to_string() const;

  friend bool operator==(const PolyGaussian& a, const PolyGaussian& b);

 private:
  std::size_t modes_;
  std::map<Exponents, ExactComplex> terms_;
  Rational radicand_ = 1;
  Rational pi_power_ = 0;
  bool normalized_ = false;
};

/// <a|b> = integral of conj(a) b, exact.
ScaledValue inner_product(const PolyGaussian& a, const PolyGaussian& b);

/// Normalized ground state pi^(-K/4) exp(-sum x_i^2 / 2).
PolyGaussian vacuum(std::size_t modes);

/// Z applied to s, exact.
PolyGaussian apply_linear_form(const LinearForm& z, const PolyGaussian& s);

/// (sum gamma_ij O_i O_j + offset) applied to s, exact.
PolyGaussian apply_quadratic_form(const QuadraticForm& q, const PolyGaussian& s);

/// raise_m^m raise_n^n vacuum(2), normalized. With raise_m = Z4 and raise_n = Z2
/// of the symmetric magnetic oscillator this is psi_mn with
/// E_mn = 2 + (b+2) m + (2-b) n and Lz psi_mn = (m - n) psi_mn.
PolyGaussian build_eigenfunction(const LinearForm& raise_m, const LinearForm& raise_n,
                                 unsigned m, unsigned n);

/// The exact scalar c with result == c * input, if one exists (zero input
/// only matches zero result, with c = 0).
std::optional<ExactComplex> eigen_ratio(const PolyGaussian& result, const PolyGaussian& input);

/// True when z annihilates the standard Gaussian vacuum; `tol` is relative to |c|.
bool annihilates_vacuum(const LinearForm& z, const Tolerances& tol = {});

}  // namespace quadham
