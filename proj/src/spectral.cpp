#include "quadham/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "quadham/error.hpp"
#include "quadham/poly_gaussian.hpp"

namespace quadham {

namespace {

double spectral_norm(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues()(0);
}

// Groups indices whose values are within `tol` of each other (transitively).
std::vector<std::vector<Eigen::Index>> cluster_values(const Eigen::VectorXcd& v, double tol) {
  const Eigen::Index n = v.size();
  std::vector<Eigen::Index> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](Eigen::Index i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = a + 1; b < n; ++b) {
      if (std::abs(v[a] - v[b]) <= tol) parent[find(b)] = find(a);
    }
  }
  std::vector<std::vector<Eigen::Index>> groups;
  std::vector<Eigen::Index> slot(static_cast<std::size_t>(n), -1);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index root = find(i);
    if (slot[root] < 0) {
      slot[root] = static_cast<Eigen::Index>(groups.size());
      groups.emplace_back();
    }
    groups[slot[root]].push_back(i);
  }
  return groups;
}

// Rotates c so that its first significant coefficient is real and positive.
// Rounding dust below 1e-14 of the largest coefficient is cleared.
Eigen::VectorXcd fix_phase(const Eigen::VectorXcd& c) {
  const double top = c.cwiseAbs().maxCoeff();
  Eigen::VectorXcd out = c;
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    if (std::abs(c[i]) > 1e-8 * top) {
      out = c * (std::abs(c[i]) / c[i]);
      break;
    }
  }
  auto clean = [&](double v) { return std::abs(v) <= 1e-14 * top ? 0.0 : v; };
  for (auto& z : out) z = Complex(clean(z.real()), clean(z.imag()));
  return out;
}

FrequencyPair make_pair(const PhaseSpaceBasis& basis, double lambda_plus, double increment,
                        const Eigen::VectorXcd& raising) {
  const Eigen::VectorXcd r = fix_phase(raising);
  LinearForm up(basis, r);
  LinearForm down(basis, r.conjugate());
  const double norm = linear_commutator(down, up).real();
  return FrequencyPair{lambda_plus, increment, std::move(up), std::move(down), norm};
}

// Pairs of a nonzero +lambda / -lambda cluster. Within the +lambda eigenspace the
// Hermitian form G = i V^H J V is diagonalized; its sign tells which member of
// each pair is the creation operator ([Z^dagger, Z] > 0).
void pair_nonzero_cluster(const PhaseSpaceBasis& basis, const EigenCluster& plus,
                          double lambda_plus, std::vector<FrequencyPair>& out) {
  const Eigen::MatrixXcd j = basis.symplectic_matrix().cast<Complex>();
  const Eigen::MatrixXcd& v = plus.basis;
  Eigen::MatrixXcd g = Complex(0.0, 1.0) * (v.adjoint() * j * v);
  g = (0.5 * (g + g.adjoint())).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(g);
  if (es.info() != Eigen::Success) throw ComputationError("symplectic norm eigensolve failed");
  for (Eigen::Index k = 0; k < g.rows(); ++k) {
    const double d = es.eigenvalues()[k];
    if (std::abs(d) < 1e-12) throw ComputationError("ladder operator with vanishing norm");
    const Eigen::VectorXcd w = v * es.eigenvectors().col(k) / std::sqrt(std::abs(d));
    if (d > 0) {
      out.push_back(make_pair(basis, lambda_plus, lambda_plus, w));
    } else {
      out.push_back(make_pair(basis, lambda_plus, -lambda_plus, w.conjugate()));
    }
  }
}

// The zero-frequency eigenspace is the (real) null space of R. A symplectic
// Gram-Schmidt pass yields canonical pairs (q, p) with [q, p] = i; then
// a^dagger = (q - i p)/sqrt(2).
void pair_zero_cluster(const PhaseSpaceBasis& basis, const EigenCluster& zero, double rank_tol,
                       std::vector<FrequencyPair>& out) {
  const Eigen::Index n = zero.basis.rows();
  Eigen::MatrixXd span(n, 2 * zero.basis.cols());
  span << zero.basis.real(), zero.basis.imag();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(span, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv[rank] > rank_tol * sv[0]) ++rank;
  if (rank != zero.geometric || rank % 2 != 0) {
    throw ComputationError("zero-frequency eigenspace is not a symplectic subspace");
  }
  std::vector<Eigen::VectorXd> pool;
  for (Eigen::Index c = 0; c < rank; ++c) pool.emplace_back(svd.matrixU().col(c));

  const Eigen::MatrixXd j = basis.symplectic_matrix();
  auto omega = [&](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return a.dot(j * b);
  };
  while (!pool.empty()) {
    const Eigen::VectorXd q = pool.front();
    pool.erase(pool.begin());
    std::size_t best = 0;
    double best_val = 0.0;
    for (std::size_t k = 0; k < pool.size(); ++k) {
      const double w = std::abs(omega(q, pool[k]));
      if (w > best_val) {
        best_val = w;
        best = k;
      }
    }
    if (pool.empty() || best_val < 1e-10) {
      throw ComputationError("zero-frequency eigenspace is isotropic; no ladder pairs");
    }
    const Eigen::VectorXd p = pool[best] / omega(q, pool[best]);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(best));
    for (auto& u : pool) u = (u - omega(u, p) * q + omega(u, q) * p).eval();

    const Eigen::VectorXcd raising =
        (q.cast<Complex>() - Complex(0.0, 1.0) * p.cast<Complex>()) / std::sqrt(2.0);
    out.push_back(make_pair(basis, 0.0, 0.0, raising));
  }
}

std::string format_energy(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

std::string_view to_string(SpectrumClass c) {
  switch (c) {
    case SpectrumClass::BoundedBelowDiscrete: return "BoundedBelowDiscrete";
    case SpectrumClass::UnboundedLattice: return "UnboundedLattice";
    case SpectrumClass::CriticalInfiniteMultiplicity: return "CriticalInfiniteMultiplicity";
    case SpectrumClass::DefectiveExceptional: return "DefectiveExceptional";
    case SpectrumClass::NonRealFrequencies: return "NonRealFrequencies";
  }
  return "unknown";
}

bool EigenData::all_real() const {
  return (eigenvalues.imag().array() == 0.0).all();
}

EigenData eigen_decompose(const AdjointMatrix& m, const Tolerances& tol) {
  const Eigen::MatrixXd& r = m.real_generator();
  if (!r.allFinite()) throw InvalidInput("adjoint matrix has non-finite entries");
  const Eigen::Index n = r.rows();

  EigenData out;
  out.scale = 1.0 + spectral_norm(r);

  Eigen::EigenSolver<Eigen::MatrixXd> es(r, false);
  if (es.info() != Eigen::Success) throw ComputationError("eigenvalue iteration did not converge");

  // eigenvalues of H = i R are i * eigenvalues(R)
  Eigen::VectorXcd lambda = Complex(0.0, 1.0) * es.eigenvalues();
  const double real_tol = tol.reality * out.scale;
  for (auto& l : lambda) {
    if (std::abs(l.imag()) <= real_tol) l = Complex(l.real(), 0.0);
  }
  std::vector<Complex> sorted(lambda.begin(), lambda.end());
  std::sort(sorted.begin(), sorted.end(), [](Complex a, Complex b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  out.eigenvalues = Eigen::Map<Eigen::VectorXcd>(sorted.data(), n);

  const Eigen::MatrixXcd& h = m.entries();
  std::vector<Eigen::MatrixXcd> bases;
  for (const auto& group : cluster_values(out.eigenvalues, real_tol)) {
    EigenCluster c;
    Complex sum = 0.0;
    for (Eigen::Index i : group) sum += out.eigenvalues[i];
    c.value = sum / static_cast<double>(group.size());
    c.algebraic = static_cast<int>(group.size());

    const Eigen::MatrixXcd shifted = h - c.value * Eigen::MatrixXcd::Identity(n, n);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(shifted, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    Eigen::Index rank = 0;
    while (rank < n && sv[rank] > tol.rank * sv[0]) ++rank;
    c.geometric = std::min(static_cast<int>(n - rank), c.algebraic);
    c.basis = svd.matrixV().rightCols(c.geometric);
    if (c.geometric < c.algebraic) out.defective = true;
    bases.push_back(c.basis);
    out.clusters.push_back(std::move(c));
  }
  Eigen::Index cols = 0;
  for (const auto& b : bases) cols += b.cols();
  out.eigenvectors.resize(n, cols);
  Eigen::Index at = 0;
  for (const auto& b : bases) {
    out.eigenvectors.middleCols(at, b.cols()) = b;
    at += b.cols();
  }
  return out;
}

std::vector<FrequencyPair> pair_frequencies(const EigenData& e, const PhaseSpaceBasis& basis,
                                            const Tolerances& tol) {
  if (!e.all_real()) throw ComputationError("non-real natural frequencies; no ladder pairs");
  if (e.defective) throw ComputationError("defective adjoint matrix; ladder operators missing");

  const double pair_tol = tol.reality * e.scale;
  const double zero_tol = tol.zero_frequency * e.scale;
  std::vector<FrequencyPair> out;
  std::vector<bool> used(e.clusters.size(), false);

  for (std::size_t a = 0; a < e.clusters.size(); ++a) {
    const EigenCluster& c = e.clusters[a];
    const double v = c.value.real();
    if (std::abs(v) <= zero_tol) {
      used[a] = true;
      pair_zero_cluster(basis, c, tol.rank, out);
      continue;
    }
    if (v < 0) continue;
    bool found = false;
    for (std::size_t b = 0; b < e.clusters.size(); ++b) {
      const EigenCluster& partner = e.clusters[b];
      if (used[b] || partner.algebraic != c.algebraic) continue;
      if (std::abs(partner.value.real() + v) <= pair_tol) {
        used[a] = used[b] = true;
        found = true;
        pair_nonzero_cluster(basis, c, 0.5 * (v - partner.value.real()), out);
        break;
      }
    }
    if (!found) {
      throw ComputationError("unpaired eigenvalue " + format_energy(v));
    }
  }
  for (std::size_t a = 0; a < e.clusters.size(); ++a) {
    if (!used[a]) {
      throw ComputationError("unpaired eigenvalue " + format_energy(e.clusters[a].value.real()));
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const FrequencyPair& x, const FrequencyPair& y) {
    if (x.lambda_plus != y.lambda_plus) return x.lambda_plus > y.lambda_plus;
    return x.increment > y.increment;
  });
  return out;
}

double gamma_min_eigenvalue(const QuadraticForm& q) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(q.gamma(), Eigen::EigenvaluesOnly);
  return es.eigenvalues()[0];
}

Definiteness gamma_definiteness(const QuadraticForm& q, const Tolerances& tol) {
  const double threshold = tol.definiteness * (1.0 + spectral_norm(q.gamma()));
  const double lo = gamma_min_eigenvalue(q);
  if (lo > threshold) return Definiteness::PositiveDefinite;
  if (lo >= -threshold) return Definiteness::PositiveSemidefinite;
  return Definiteness::Indefinite;
}

SpectrumReport classify_spectrum(const QuadraticForm& q, const Tolerances& tol) {
  SpectrumReport r;
  r.eigen = eigen_decompose(adjoint_representation(q), tol);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> gs(q.gamma(), Eigen::EigenvaluesOnly);
  r.gamma_eigenvalues = gs.eigenvalues();

  if (!r.eigen.all_real()) {
    r.classification = SpectrumClass::NonRealFrequencies;
    r.multiplicity_note = "complex natural frequencies: no ladder lattice";
    return r;
  }
  if (r.eigen.defective) {
    r.classification = SpectrumClass::DefectiveExceptional;
    r.multiplicity_note = "defective adjoint matrix: ladder operators are missing";
    return r;
  }

  r.pairs = pair_frequencies(r.eigen, q.basis(), tol);
  double half_sum_plus = 0.0;
  double half_sum_signed = 0.0;
  bool has_zero = false;
  const double zero_tol = tol.zero_frequency * r.eigen.scale;
  r.vacuum_is_standard_gaussian = true;
  for (const auto& p : r.pairs) {
    half_sum_plus += 0.5 * p.lambda_plus;
    half_sum_signed += 0.5 * p.increment;
    has_zero |= p.lambda_plus <= zero_tol;
    r.vacuum_is_standard_gaussian &= annihilates_vacuum(p.lowering, tol);
  }
  r.vacuum_energy = q.offset() + half_sum_signed;

  const Definiteness def = gamma_definiteness(q, tol);
  if (def == Definiteness::PositiveDefinite ||
      (def == Definiteness::PositiveSemidefinite && !has_zero)) {
    r.classification = SpectrumClass::BoundedBelowDiscrete;
    r.ground_energy = q.offset() + half_sum_plus;
    for (const auto& p : r.pairs) r.lattice_generators.push_back(p.lambda_plus);
    r.multiplicity_note = "discrete spectrum bounded from below; finite multiplicities";
  } else if (def == Definiteness::PositiveSemidefinite) {
    r.classification = SpectrumClass::CriticalInfiniteMultiplicity;
    r.ground_energy = q.offset() + half_sum_plus;
    for (const auto& p : r.pairs) r.lattice_generators.push_back(p.lambda_plus);
    r.multiplicity_note =
        "zero natural frequency: every level has infinite multiplicity";
  } else {
    r.classification = SpectrumClass::UnboundedLattice;
    for (const auto& p : r.pairs) r.lattice_generators.push_back(p.increment);
    r.multiplicity_note = "indefinite form: ladder lattice unbounded from below";
  }
  return r;
}

std::vector<LatticeLevel> spectrum_lattice(const SpectrumReport& r, int max_quanta,
                                           const LatticeOptions& opts, const Tolerances& tol) {
  if (r.classification == SpectrumClass::NonRealFrequencies ||
      r.classification == SpectrumClass::DefectiveExceptional || !r.vacuum_energy) {
    throw LatticeUnavailable("no ladder lattice for a " + std::string(to_string(r.classification)) +
                             " spectrum");
  }
  if (max_quanta < 0) throw InvalidInput("max_quanta must be non-negative");

  const std::size_t modes = r.lattice_generators.size();
  const bool critical = r.classification == SpectrumClass::CriticalInfiniteMultiplicity;
  const double zero_tol = tol.zero_frequency * r.eigen.scale;
  std::vector<bool> active(modes, true);
  if (critical && !opts.expand_zero_modes) {
    for (std::size_t i = 0; i < modes; ++i) {
      active[i] = std::abs(r.lattice_generators[i]) > zero_tol;
    }
  }

  std::vector<LatticeLevel> levels;
  std::vector<int> quanta(modes, 0);
  auto recurse = [&](auto&& self, std::size_t mode, int remaining) -> void {
    if (mode == modes) {
      LatticeLevel lvl;
      lvl.energy = *r.vacuum_energy;
      for (std::size_t i = 0; i < modes; ++i) lvl.energy += quanta[i] * r.lattice_generators[i];
      lvl.quanta = quanta;
      lvl.infinite_multiplicity = critical && !opts.expand_zero_modes;
      levels.push_back(std::move(lvl));
      return;
    }
    const int top = active[mode] ? remaining : 0;
    for (int k = 0; k <= top; ++k) {
      quanta[mode] = k;
      self(self, mode + 1, remaining - k);
    }
    quanta[mode] = 0;
  };
  recurse(recurse, 0, max_quanta);

  // Merge energies into clusters (chained within tolerance) ordered by energy.
  double emax = 0.0;
  for (const auto& l : levels) emax = std::max(emax, std::abs(l.energy));
  const double merge = tol.lattice_merge * (1.0 + emax);
  for (auto& l : levels) {
    if (std::abs(l.energy) <= merge) l.energy = 0.0;
  }
  std::vector<std::size_t> idx(levels.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(),
            [&](std::size_t a, std::size_t b) { return levels[a].energy < levels[b].energy; });
  std::vector<double> cluster_energy(levels.size());
  std::size_t start = 0;
  while (start < idx.size()) {
    std::size_t end = start + 1;
    while (end < idx.size() && levels[idx[end]].energy - levels[idx[end - 1]].energy <= merge) ++end;
    for (std::size_t k = start; k < end; ++k) {
      cluster_energy[idx[k]] = levels[idx[start]].energy;
      levels[idx[k]].degeneracy = static_cast<int>(end - start);
    }
    start = end;
  }

  const bool by_total = r.classification == SpectrumClass::UnboundedLattice;
  std::vector<std::size_t> order(levels.size());
  std::iota(order.begin(), order.end(), 0);
  auto total = [&](std::size_t i) {
    return std::accumulate(levels[i].quanta.begin(), levels[i].quanta.end(), 0);
  };
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (by_total && total(a) != total(b)) return total(a) < total(b);
    if (cluster_energy[a] != cluster_energy[b]) return cluster_energy[a] < cluster_energy[b];
    return levels[a].quanta < levels[b].quanta;
  });
  std::vector<LatticeLevel> out;
  out.reserve(levels.size());
  for (std::size_t i : order) out.push_back(std::move(levels[i]));
  return out;
}

std::vector<double> lowest_lattice_energies(const SpectrumReport& r, std::size_t count) {
  if (r.classification != SpectrumClass::BoundedBelowDiscrete) {
    throw LatticeUnavailable("lowest levels need a bounded-below discrete spectrum");
  }
  const double gmin = *std::min_element(r.lattice_generators.begin(), r.lattice_generators.end());
  for (int q = 1;; ++q) {
    std::vector<double> e;
    for (const auto& l : spectrum_lattice(r, q)) e.push_back(l.energy);
    std::sort(e.begin(), e.end());
    if (e.size() >= count && e[count - 1] <= *r.vacuum_energy + (q + 1) * gmin) {
      e.resize(count);
      return e;
    }
  }
}

double ladder_check(const QuadraticForm& q, const LinearForm& z, const Tolerances& tol) {
  if (z.is_zero()) throw InvalidInput("ladder check needs a nonzero linear form");
  const AdjointMatrix h = adjoint_representation(q);
  const Eigen::VectorXcd c = z.coeffs();
  const Eigen::VectorXcd hc = commutator_action(h, z);
  const Complex lambda = c.dot(hc) / c.squaredNorm();
  const double residual = (hc - lambda * c).norm();
  const double threshold = tol.ladder_residual * spectral_norm(h.real_generator()) * c.norm();
  if (residual > threshold) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "not an eigenoperator: residual %.3e exceeds %.3e", residual,
                  threshold);
    throw NotAnEigenoperator(buf, residual);
  }
  if (std::abs(lambda.imag()) > tol.reality * (1.0 + spectral_norm(h.real_generator()))) {
    throw NotAnEigenoperator("eigenoperator with a non-real frequency", residual);
  }
  return lambda.real();
}

}  // namespace quadham
