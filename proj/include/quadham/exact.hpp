#pragma once

// Exact rational and Gaussian-rational arithmetic for the symbolic
// wavefunction layer. Every finite double converts exactly.

#include <complex>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace quadham {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Converts a finite double exactly (doubles are dyadic rationals).
Rational exact_rational(double v);

/// "3", "-3/2".
std::string to_string(const Rational& r);

/// Returns true and sets `root` if r >= 0 is the square of a rational.
bool rational_sqrt(const Rational& r, Rational& root);

/// Splits r > 0 as root^2 / n with n a square-free integer, so sqrt(r) = root / sqrt(n).
void split_square(const Rational& r, Rational& root, BigInt& n);

/// re + i im with rational parts.
struct ExactComplex {
  Rational re;
  Rational im;

  ExactComplex() = default;
  ExactComplex(Rational r, Rational i = 0) : re(std::move(r)), im(std::move(i)) {}
  ExactComplex(int r) : re(r), im(0) {}
  explicit ExactComplex(std::complex<double> z);

  bool is_zero() const { return re == 0 && im == 0; }
  ExactComplex conj() const { return {re, -im}; }
  Rational norm() const { return re * re + im * im; }
  std::complex<double> to_complex() const;

  friend ExactComplex operator+(const ExactComplex& a, const ExactComplex& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend ExactComplex operator-(const ExactComplex& a, const ExactComplex& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend ExactComplex operator-(const ExactComplex& a) { return {-a.re, -a.im}; }
  friend ExactComplex operator*(const ExactComplex& a, const ExactComplex& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend ExactComplex operator/(const ExactComplex& a, const ExactComplex& b);
  ExactComplex& operator+=(const ExactComplex& b) { return *this = *this + b; }
  friend bool operator==(const ExactComplex& a, const ExactComplex& b) {
    return a.re == b.re && a.im == b.im;
  }

  static ExactComplex i() { return {0, 1}; }
};

}  // namespace quadham
