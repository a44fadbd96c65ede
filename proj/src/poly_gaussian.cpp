#include "quadham/poly_gaussian.hpp"

#include <algorithm>
#include <cmath>

#include "quadham/error.hpp"

namespace quadham {

namespace {

// integral x^n exp(-x^2) dx / sqrt(pi) = (n-1)!! / 2^(n/2) for even n, 0 for odd n.
Rational gaussian_moment(unsigned n) {
  if (n % 2 != 0) return 0;
  Rational r = 1;
  for (unsigned k = 1; k < n; k += 2) r *= k;
  for (unsigned k = 0; k < n / 2; ++k) r /= 2;
  return r;
}

// sum conj(a_alpha) b_beta prod_i moment(alpha_i + beta_i), scale excluded.
ExactComplex raw_overlap(const PolyGaussian& a, const PolyGaussian& b) {
  ExactComplex total;
  for (const auto& [ea, ca] : a.terms()) {
    const ExactComplex left = ca.conj();
    for (const auto& [eb, cb] : b.terms()) {
      Rational weight = 1;
      for (std::size_t i = 0; i < ea.size() && weight != 0; ++i) {
        weight *= gaussian_moment(ea[i] + eb[i]);
      }
      if (weight != 0) total += left * cb * ExactComplex(weight);
    }
  }
  return total;
}

// Applies a single basis operator times `factor` to s and accumulates into out.
void accumulate_operator(OperatorIndex op, std::size_t modes, const ExactComplex& factor,
                         const PolyGaussian& s, PolyGaussian& out) {
  const std::size_t i = op.value % modes;
  const bool position = op.value < modes;
  for (const auto& [e, c] : s.terms()) {
    const ExactComplex fc = factor * c;
    Exponents up = e;
    ++up[i];
    if (position) {
      out.add_term(up, fc);
      continue;
    }
    // p (f G) = (-i f' + i x f) G
    out.add_term(up, ExactComplex::i() * fc);
    if (e[i] > 0) {
      Exponents down = e;
      --down[i];
      out.add_term(down, -ExactComplex::i() * fc * ExactComplex(Rational(e[i])));
    }
  }
}

PolyGaussian apply_basis_operator(OperatorIndex op, const PolyGaussian& s) {
  PolyGaussian out(s.modes());
  out.set_scale(s.radicand(), s.pi_power());
  accumulate_operator(op, s.modes(), ExactComplex(1), s, out);
  return out;
}

void require_modes(std::size_t expected, std::size_t actual) {
  if (expected != actual) {
    throw InvalidInput("state has " + std::to_string(actual) + " modes, operator has " +
                       std::to_string(expected));
  }
}

const char* const kSuperscripts[] = {"⁰", "¹", "²", "³", "⁴", "⁵", "⁶", "⁷", "⁸", "⁹"};

std::string superscript(unsigned n) {
  std::string digits = std::to_string(n);
  std::string out;
  for (char d : digits) out += kSuperscripts[d - '0'];
  return out;
}

std::string monomial(const Exponents& e, const PhaseSpaceBasis& basis) {
  std::string out;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e[i] == 0) continue;
    out += basis.coordinate_name(i);
    if (e[i] > 1) out += superscript(e[i]);
  }
  return out;
}

bool is_integer(const Rational& r) { return denominator(r) == 1; }

std::string render_term(const Rational& magnitude, const std::string& mono, bool imaginary) {
  const bool followed = imaginary || !mono.empty();
  std::string mag;
  if (magnitude != 1) {
    mag = is_integer(magnitude) || !followed ? to_string(magnitude)
                                             : "(" + to_string(magnitude) + ")";
  } else if (!followed) {
    mag = "1";
  }
  return mag + (imaginary ? "i" : "") + mono;
}

unsigned total_degree(const Exponents& e) {
  unsigned d = 0;
  for (unsigned v : e) d += v;
  return d;
}

}  // namespace

std::complex<double> ScaledValue::to_complex() const {
  const double s = std::sqrt(radicand.convert_to<double>()) *
                   std::pow(M_PI, pi_power.convert_to<double>());
  return s * value.to_complex();
}

PolyGaussian::PolyGaussian(std::size_t modes) : modes_(modes) {
  if (modes == 0) throw InvalidInput("state needs at least one mode");
}

unsigned PolyGaussian::degree() const {
  unsigned d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, total_degree(e));
  return d;
}

ExactComplex PolyGaussian::coefficient(const Exponents& e) const {
  const auto it = terms_.find(e);
  return it == terms_.end() ? ExactComplex() : it->second;
}

void PolyGaussian::add_term(const Exponents& e, const ExactComplex& c) {
  if (e.size() != modes_) throw InvalidInput("exponent tuple has wrong length");
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
  normalized_ = false;
}

void PolyGaussian::set_scale(Rational radicand, Rational pi_power) {
  if (radicand <= 0) throw InvalidInput("scale radicand must be positive");
  radicand_ = std::move(radicand);
  pi_power_ = std::move(pi_power);
  normalized_ = false;
}

PolyGaussian PolyGaussian::scaled(const ExactComplex& c) const {
  PolyGaussian out(modes_);
  out.set_scale(radicand_, pi_power_);
  for (const auto& [e, v] : terms_) out.add_term(e, c * v);
  return out;
}

ScaledValue PolyGaussian::squared_norm() const { return inner_product(*this, *this); }

PolyGaussian PolyGaussian::normalize() const {
  if (is_zero()) throw ComputationError("cannot normalize the zero state");
  const Rational s = raw_overlap(*this, *this).re;
  PolyGaussian out(modes_);
  Rational root;
  BigInt core;
  split_square(1 / s, root, core);
  const Rational radicand(1, core);
  for (const auto& [e, c] : terms_) out.add_term(e, c * ExactComplex(root));
  out.set_scale(radicand, Rational(-static_cast<long>(modes_), 4));
  out.normalized_ = true;
  return out;
}

namespace {

std::string gaussian_text(const PhaseSpaceBasis& basis, std::size_t modes) {
  if (modes == 1) return "exp(−" + basis.coordinate_name(0) + "²/2)";
  std::string sum;
  for (std::size_t i = 0; i < modes; ++i) {
    if (i > 0) sum += "+";
    sum += basis.coordinate_name(i) + "²";
  }
  return "exp(−(" + sum + ")/2)";
}

}  // namespace

std::string PolyGaussian::to_string() const {
  const PhaseSpaceBasis basis(modes_);
  std::vector<Exponents> order;
  for (const auto& [e, c] : terms_) order.push_back(e);
  std::sort(order.begin(), order.end(), [](const Exponents& a, const Exponents& b) {
    const unsigned da = total_degree(a);
    const unsigned db = total_degree(b);
    if (da != db) return da < db;
    return a > b;
  });

  std::string body;
  int count = 0;
  auto emit = [&](const Rational& v, const Exponents& e, bool imaginary) {
    if (v == 0) return;
    const bool negative = v < 0;
    if (count == 0) {
      if (negative) body += "−";
    } else {
      body += negative ? " − " : " + ";
    }
    body += render_term(negative ? Rational(-v) : v, monomial(e, basis), imaginary);
    ++count;
  };
  for (const auto& e : order) emit(terms_.at(e).re, e, false);
  for (const auto& e : order) emit(terms_.at(e).im, e, true);

  std::string out = count == 0 ? "0" : (count > 1 ? "(" + body + ")" : body);
  const bool inverse_integer = numerator(radicand_) == 1 && denominator(radicand_) != 1;
  if (inverse_integer && pi_power_ == Rational(-1, 2)) {
    out += "/√(" + quadham::to_string(1 / radicand_) + "π)";
    return out + " · " + gaussian_text(basis, modes_);
  }
  if (inverse_integer) {
    out += "/√" + quadham::to_string(1 / radicand_);
  } else if (radicand_ != 1) {
    out += "·√(" + quadham::to_string(radicand_) + ")";
  }
  if (pi_power_ == Rational(-1, 2)) {
    out += "/√π";
  } else if (pi_power_ == Rational(1, 2)) {
    out += "·√π";
  } else if (pi_power_ < 0) {
    out += "/π^(" + quadham::to_string(-pi_power_) + ")";
  } else if (pi_power_ > 0) {
    out += "·π^(" + quadham::to_string(pi_power_) + ")";
  }
  return out + " · " + gaussian_text(basis, modes_);
}

bool operator==(const PolyGaussian& a, const PolyGaussian& b) {
  return a.modes_ == b.modes_ && a.terms_ == b.terms_ && a.radicand_ == b.radicand_ &&
         a.pi_power_ == b.pi_power_;
}

ScaledValue inner_product(const PolyGaussian& a, const PolyGaussian& b) {
  require_modes(a.modes(), b.modes());
  ScaledValue out;
  out.value = raw_overlap(a, b);
  out.radicand = a.radicand() * b.radicand();
  out.pi_power = a.pi_power() + b.pi_power() + Rational(static_cast<long>(a.modes()), 2);
  Rational root;
  if (out.radicand != 1 && rational_sqrt(out.radicand, root)) {
    out.value = out.value * ExactComplex(root);
    out.radicand = 1;
  }
  if (out.value.is_zero()) {
    out.radicand = 1;
    out.pi_power = 0;
  }
  return out;
}

PolyGaussian vacuum(std::size_t modes) {
  PolyGaussian s(modes);
  s.add_term(Exponents(modes, 0), ExactComplex(1));
  PolyGaussian out = s.normalize();
  return out;
}

PolyGaussian apply_linear_form(const LinearForm& z, const PolyGaussian& s) {
  const std::size_t k = z.basis().modes();
  require_modes(k, s.modes());
  PolyGaussian out(k);
  out.set_scale(s.radicand(), s.pi_power());
  for (std::size_t op = 0; op < 2 * k; ++op) {
    const Complex c = z.coeffs()[static_cast<Eigen::Index>(op)];
    if (c == Complex(0.0, 0.0)) continue;
    accumulate_operator(OperatorIndex{op}, k, ExactComplex(c), s, out);
  }
  return out;
}

PolyGaussian apply_quadratic_form(const QuadraticForm& q, const PolyGaussian& s) {
  const std::size_t k = q.basis().modes();
  require_modes(k, s.modes());
  PolyGaussian out = s.scaled(ExactComplex(exact_rational(q.offset())));
  for (std::size_t j = 0; j < 2 * k; ++j) {
    bool column_used = false;
    for (std::size_t i = 0; i < 2 * k; ++i) {
      column_used |= q.gamma()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) != 0.0;
    }
    if (!column_used) continue;
    const PolyGaussian inner = apply_basis_operator(OperatorIndex{j}, s);
    for (std::size_t i = 0; i < 2 * k; ++i) {
      const double g = q.gamma()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (g == 0.0) continue;
      accumulate_operator(OperatorIndex{i}, k, ExactComplex(exact_rational(g)), inner, out);
    }
  }
  return out;
}

PolyGaussian build_eigenfunction(const LinearForm& raise_m, const LinearForm& raise_n,
                                 unsigned m, unsigned n) {
  PolyGaussian s = vacuum(raise_m.basis().modes());
  for (unsigned k = 0; k < n; ++k) s = apply_linear_form(raise_n, s);
  for (unsigned k = 0; k < m; ++k) s = apply_linear_form(raise_m, s);
  if (s.is_zero()) throw ComputationError("ladder application annihilated the vacuum");
  return s.normalize();
}

std::optional<ExactComplex> eigen_ratio(const PolyGaussian& result, const PolyGaussian& input) {
  if (result.modes() != input.modes()) return std::nullopt;
  if (input.is_zero()) {
    if (result.is_zero()) return ExactComplex();
    return std::nullopt;
  }
  if (result.is_zero()) return ExactComplex();
  if (result.radicand() != input.radicand() || result.pi_power() != input.pi_power()) {
    return std::nullopt;
  }
  const auto& [e0, c0] = *input.terms().begin();
  const ExactComplex ratio = result.coefficient(e0) / c0;
  if (result.terms().size() != input.terms().size()) return std::nullopt;
  for (const auto& [e, c] : input.terms()) {
    if (!(result.coefficient(e) == ratio * c)) return std::nullopt;
  }
  return ratio;
}

bool annihilates_vacuum(const LinearForm& z, const Tolerances& tol) {
  const PolyGaussian r = apply_linear_form(z, vacuum(z.basis().modes()));
  double worst = 0.0;
  for (const auto& [e, c] : r.terms()) worst = std::max(worst, std::abs(c.to_complex()));
  return worst <= tol.vacuum_annihilation * std::max(z.coeffs().norm(), 1e-300);
}

}  // namespace quadham
