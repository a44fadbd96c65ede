#include "quadham/exact.hpp"

#include <cmath>

#include "quadham/error.hpp"

namespace quadham {

Rational exact_rational(double v) {
  if (!std::isfinite(v)) throw InvalidInput("cannot convert a non-finite value to a rational");
  return Rational(v);
}

std::string to_string(const Rational& r) {
  const BigInt& num = numerator(r);
  const BigInt& den = denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

bool rational_sqrt(const Rational& r, Rational& root) {
  if (r < 0) return false;
  const BigInt num = numerator(r);
  const BigInt den = denominator(r);
  const BigInt sn = sqrt(num);
  const BigInt sd = sqrt(den);
  if (sn * sn != num || sd * sd != den) return false;
  root = Rational(sn, sd);
  return true;
}

void split_square(const Rational& r, Rational& root, BigInt& n) {
  if (r <= 0) throw InvalidInput("split_square needs a positive rational");
  const BigInt num = numerator(r);
  const BigInt den = denominator(r);
  // r = num^2 / (num den); pull square factors out of num den.
  BigInt rest = num * den;
  BigInt square = 1;
  for (BigInt d = 2; d * d <= rest; ++d) {
    while (rest % (d * d) == 0) {
      rest /= d * d;
      square *= d;
    }
  }
  root = Rational(num, square);
  n = rest;
}

ExactComplex::ExactComplex(std::complex<double> z)
    : re(exact_rational(z.real())), im(exact_rational(z.imag())) {}

std::complex<double> ExactComplex::to_complex() const {
  return {re.convert_to<double>(), im.convert_to<double>()};
}

ExactComplex operator/(const ExactComplex& a, const ExactComplex& b) {
  const Rational d = b.norm();
  if (d == 0) throw ComputationError("exact division by zero");
  const ExactComplex n = a * b.conj();
  return {n.re / d, n.im / d};
}

}  // namespace quadham
