#include "quadham/model.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "quadham/error.hpp"

namespace quadham {

namespace {

constexpr std::size_t kX = 0;
constexpr std::size_t kY = 1;
constexpr std::size_t kPx = 2;
constexpr std::size_t kPy = 3;

MonomialTerm term(std::size_t l, std::size_t r, double c) {
  return {OperatorIndex{l}, OperatorIndex{r}, c};
}

void require_positive(double v, const char* name) {
  if (!std::isfinite(v) || v <= 0.0) throw InvalidInput(std::string(name) + " must be positive and finite");
}

// (sum_i c_i O_i)^2 for a real coefficient vector, expanded monomial by monomial.
std::vector<MonomialTerm> square_terms(const std::vector<std::pair<std::size_t, double>>& lin) {
  std::vector<MonomialTerm> out;
  for (const auto& [i, ci] : lin) {
    for (const auto& [j, cj] : lin) out.push_back(term(i, j, ci * cj));
  }
  return out;
}

int sign_of(Definiteness d) {
  switch (d) {
    case Definiteness::PositiveDefinite: return 1;
    case Definiteness::PositiveSemidefinite: return 0;
    case Definiteness::Indefinite: return -1;
  }
  return -1;
}

}  // namespace

DimensionlessModel reduce_to_dimensionless(const PhysicalParameters& p) {
  require_positive(p.m1, "m1");
  require_positive(p.m2, "m2");
  require_positive(p.k1, "k1");
  require_positive(p.k2, "k2");
  require_positive(p.hbar, "hbar");
  if (!std::isfinite(p.omega)) throw InvalidInput("omega must be finite");
  const double w1 = std::sqrt(p.k1 / p.m1);
  DimensionlessModel d;
  d.mu = p.m2 / p.m1;
  d.k = p.k2 / p.k1;
  d.b = 2.0 * p.omega / w1;
  d.energy_scale = p.hbar * w1 / 2.0;
  d.length_scale = std::sqrt(p.hbar / std::sqrt(p.m1 * p.k1));
  return d;
}

DimensionlessModel symmetric_model(double b) {
  DimensionlessModel d;
  d.b = b;
  return d;
}

QuadraticForm build_model(const DimensionlessModel& d) {
  require_positive(d.mu, "mu");
  require_positive(d.k, "k");
  if (!std::isfinite(d.b)) throw InvalidInput("b must be finite");
  const std::vector<MonomialTerm> terms = {
      term(kPx, kPx, 1.0),     term(kPy, kPy, 1.0 / d.mu), term(kX, kX, 1.0),
      term(kY, kY, d.k),       term(kX, kPy, d.b),         term(kY, kPx, -d.b),
  };
  return make_quadratic_form(2, terms);
}

QuadraticForm isotropic_oscillator() { return build_model(symmetric_model(0.0)); }

QuadraticForm angular_momentum() {
  const std::vector<MonomialTerm> terms = {term(kX, kPy, 1.0), term(kY, kPx, -1.0)};
  return make_quadratic_form(2, terms);
}

QuadraticForm sb_operator(double field) {
  if (!std::isfinite(field)) throw InvalidInput("field must be finite");
  auto terms = square_terms({{kPx, 1.0}, {kY, -field / 2.0}});
  const auto second = square_terms({{kPy, 1.0}, {kX, field / 2.0}});
  terms.insert(terms.end(), second.begin(), second.end());
  return make_quadratic_form(2, terms);
}

LinearForm symmetric_ladder_operator(int index) {
  const Complex i(0.0, 1.0);
  Eigen::VectorXcd c(4);
  switch (index) {
    case 1: c << -i, -1.0, 1.0, -i; break;
    case 2: c << i, 1.0, 1.0, -i; break;
    case 3: c << -i, 1.0, 1.0, i; break;
    case 4: c << i, -1.0, 1.0, i; break;
    default: throw InvalidInput("ladder operator index must be 1..4");
  }
  return LinearForm(PhaseSpaceBasis(2), c);
}

double symmetric_ladder_frequency(int index, double b) {
  switch (index) {
    case 1: return -2.0 - b;
    case 2: return 2.0 - b;
    case 3: return b - 2.0;
    case 4: return 2.0 + b;
    default: throw InvalidInput("ladder operator index must be 1..4");
  }
}

std::optional<double> symmetric_family_parameter(const QuadraticForm& q) {
  if (q.basis().modes() != 2 || q.offset() != 0.0) return std::nullopt;
  const double b = 2.0 * q.gamma()(kX, kPy);
  const QuadraticForm expected = build_model(symmetric_model(b));
  if (!(expected == q)) return std::nullopt;
  return b;
}

QuadraticForm random_positive_definite_form(std::size_t modes, std::uint64_t seed, double lo,
                                            double hi) {
  if (!(lo > 0.0) || !(hi >= lo)) throw InvalidInput("need 0 < lo <= hi");
  const PhaseSpaceBasis basis(modes);
  const auto n = static_cast<Eigen::Index>(basis.dimension());
  std::mt19937_64 gen(seed);
  // 53-bit uniform in [0, 1), identical on every platform
  auto uniform = [&gen]() { return static_cast<double>(gen() >> 11) * 0x1.0p-53; };
  Eigen::MatrixXd a(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) a(i, j) = 2.0 * uniform() - 1.0;
  }
  const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(a).householderQ();
  Eigen::VectorXd d(n);
  for (Eigen::Index i = 0; i < n; ++i) d[i] = lo + (hi - lo) * uniform();
  const Eigen::MatrixXd g = q * d.asDiagonal() * q.transpose();
  return QuadraticForm(basis, 0.5 * (g + g.transpose()), 0.0);
}

SymmetryReport symmetry_checks(const DimensionlessModel& d, const Tolerances& tol) {
  if (!d.symmetric()) throw InvalidInput("symmetry checks need the symmetric model (mu = k = 1)");
  const AdjointMatrix h = adjoint_representation(build_model(d));
  DimensionlessModel flipped = d;
  flipped.b = -d.b;
  const AdjointMatrix hf = adjoint_representation(build_model(flipped));

  SymmetryReport rep;
  const Eigen::MatrixXcd parity = -Eigen::MatrixXcd::Identity(4, 4);
  rep.parity_residual = (parity * h.entries() * parity - h.entries()).cwiseAbs().maxCoeff();
  rep.parity_ok = rep.parity_residual == 0.0;

  Eigen::MatrixXcd swap = Eigen::MatrixXcd::Zero(4, 4);
  swap(kX, kY) = swap(kY, kX) = swap(kPx, kPy) = swap(kPy, kPx) = 1.0;
  rep.swap_residual = (swap * h.entries() * swap.transpose() - hf.entries()).cwiseAbs().maxCoeff();
  rep.swap_ok = rep.swap_residual == 0.0;

  const EigenData e = eigen_decompose(h, tol);
  const EigenData ef = eigen_decompose(hf, tol);
  rep.spectrum_residual = (e.eigenvalues - ef.eigenvalues).cwiseAbs().maxCoeff();
  rep.spectra_match = rep.spectrum_residual <= tol.reality * e.scale;
  return rep;
}

PhaseScanResult phase_scan(const DimensionlessModel& shape, double b_from, double b_to, int steps,
                           const Tolerances& tol, double resolution) {
  if (steps < 2) throw InvalidInput("phase scan needs at least 2 steps");
  if (!(b_from < b_to) || !std::isfinite(b_from) || !std::isfinite(b_to)) {
    throw InvalidInput("phase scan needs a finite range with from < to");
  }
  auto form_at = [&](double b) {
    DimensionlessModel d = shape;
    d.b = b;
    return build_model(d);
  };

  PhaseScanResult out;
  std::vector<int> signs;
  for (int i = 0; i < steps; ++i) {
    const double b = b_from + (b_to - b_from) * static_cast<double>(i) / (steps - 1);
    const QuadraticForm q = form_at(b);
    const SpectrumReport r = classify_spectrum(q, tol);
    ScanSample s;
    s.b = b;
    s.classification = r.classification;
    s.generators = r.lattice_generators;
    s.ground_energy = r.ground_energy;
    s.gamma_min = r.gamma_eigenvalues.size() > 0 ? r.gamma_eigenvalues[0] : 0.0;
    out.samples.push_back(std::move(s));
    signs.push_back(sign_of(gamma_definiteness(q, tol)));
  }

  const auto n = out.samples.size();
  for (std::size_t i = 0; i < n; ++i) {
    const ScanSample& s = out.samples[i];
    if (signs[i] == 0) {
      Transition t;
      t.b = t.bracket_lo = t.bracket_hi = s.b;
      t.from = i > 0 ? out.samples[i - 1].classification : s.classification;
      t.to = i + 1 < n ? out.samples[i + 1].classification : s.classification;
      out.transitions.push_back(t);
      continue;
    }
    if (i + 1 == n) break;
    const ScanSample& next = out.samples[i + 1];
    double lo = s.b;
    double hi = next.b;
    if (signs[i + 1] != 0 && signs[i + 1] != signs[i]) {
      // smallest eigenvalue of gamma changes sign inside (lo, hi)
      const bool lo_positive = s.gamma_min > 0.0;
      while (hi - lo > resolution) {
        const double mid = 0.5 * (lo + hi);
        if ((gamma_min_eigenvalue(form_at(mid)) > 0.0) == lo_positive) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
    } else if (signs[i + 1] == signs[i] && next.classification != s.classification) {
      // change not driven by definiteness (e.g. frequencies leaving the real axis)
      while (hi - lo > resolution) {
        const double mid = 0.5 * (lo + hi);
        if (classify_spectrum(form_at(mid), tol).classification == s.classification) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
    } else {
      continue;
    }
    Transition t;
    t.bracket_lo = lo;
    t.bracket_hi = hi;
    t.b = 0.5 * (lo + hi);
    t.from = s.classification;
    t.to = next.classification;
    out.transitions.push_back(t);
  }
  return out;
}

}  // namespace quadham
