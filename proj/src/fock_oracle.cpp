#include "quadham/fock_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "quadham/error.hpp"

namespace quadham {

namespace {

using Mat = Eigen::MatrixXcd;

// x and p of one mode on levels 0..size-1.
Mat single_mode_operator(bool position, int size) {
  Mat a = Mat::Zero(size, size);
  for (int n = 1; n < size; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  const Mat ad = a.adjoint();
  if (position) return (a + ad) / std::sqrt(2.0);
  return Complex(0.0, 1.0) * (ad - a) / std::sqrt(2.0);
}

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

// Embeds per-mode factors into the full space; missing modes get the identity.
Mat embed(const std::vector<Mat>& factors) {
  Mat out = factors.front();
  for (std::size_t m = 1; m < factors.size(); ++m) out = kron(out, factors[m]);
  return out;
}

std::vector<EnergyCluster> cluster_sorted(const Eigen::VectorXd& e, double tol) {
  std::vector<EnergyCluster> out;
  Eigen::Index start = 0;
  while (start < e.size()) {
    Eigen::Index end = start + 1;
    while (end < e.size() && e[end] - e[end - 1] <= tol) ++end;
    double sum = 0.0;
    for (Eigen::Index k = start; k < end; ++k) sum += e[k];
    out.push_back({sum / static_cast<double>(end - start), static_cast<int>(end - start)});
    start = end;
  }
  return out;
}

}  // namespace

FockTruncation::FockTruncation(std::size_t modes, int n_max, std::size_t cap)
    : modes_(modes), n_max_(n_max), dim_(1) {
  if (modes == 0) throw InvalidInput("truncation needs at least one mode");
  if (n_max < 0) throw InvalidInput("n_max must be non-negative");
  for (std::size_t m = 0; m < modes; ++m) {
    dim_ *= static_cast<std::size_t>(n_max + 1);
    if (dim_ > cap) {
      throw InvalidInput("Fock dimension exceeds the cap of " + std::to_string(cap));
    }
  }
}

std::vector<int> FockTruncation::occupations(std::size_t index) const {
  std::vector<int> occ(modes_);
  const auto base = static_cast<std::size_t>(n_max_ + 1);
  for (std::size_t m = modes_; m-- > 0;) {
    occ[m] = static_cast<int>(index % base);
    index /= base;
  }
  return occ;
}

int FockTruncation::total_quanta(std::size_t index) const {
  const auto occ = occupations(index);
  return std::accumulate(occ.begin(), occ.end(), 0);
}

Eigen::MatrixXcd build_fock_matrix(const QuadraticForm& q, const FockTruncation& t,
                                   const Tolerances& tol) {
  if (q.basis().modes() != t.modes()) throw InvalidInput("truncation and form disagree on modes");
  const std::size_t k = t.modes();
  const int keep = t.n_max() + 1;
  const auto dim = static_cast<Eigen::Index>(t.dim());

  // Operators one level larger so that same-mode products are exact on kept levels.
  const Mat x_big = single_mode_operator(true, keep + 1);
  const Mat p_big = single_mode_operator(false, keep + 1);
  auto big = [&](std::size_t op) -> const Mat& { return op < k ? x_big : p_big; };
  const Mat ident = Mat::Identity(keep, keep);

  Mat h = q.offset() * Mat::Identity(dim, dim);
  for (std::size_t i = 0; i < 2 * k; ++i) {
    for (std::size_t j = 0; j < 2 * k; ++j) {
      const double g = q.gamma()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (g == 0.0) continue;
      const std::size_t mi = i % k;
      const std::size_t mj = j % k;
      std::vector<Mat> factors(k, ident);
      if (mi == mj) {
        factors[mi] = (big(i) * big(j)).topLeftCorner(keep, keep);
      } else {
        factors[mi] = big(i).topLeftCorner(keep, keep);
        factors[mj] = big(j).topLeftCorner(keep, keep);
      }
      h += g * embed(factors);
    }
  }
  const double scale = 1.0 + h.cwiseAbs().maxCoeff();
  const double herm = (h - h.adjoint()).cwiseAbs().maxCoeff();
  if (herm > tol.hermiticity * scale) {
    throw ComputationError("assembled Fock matrix is not Hermitian");
  }
  return h;
}

Eigen::MatrixXcd fock_linear_operator(const LinearForm& z, const FockTruncation& t) {
  if (z.basis().modes() != t.modes()) throw InvalidInput("truncation and form disagree on modes");
  const std::size_t k = t.modes();
  const int keep = t.n_max() + 1;
  const Mat x = single_mode_operator(true, keep);
  const Mat p = single_mode_operator(false, keep);
  const auto dim = static_cast<Eigen::Index>(t.dim());
  Mat out = Mat::Zero(dim, dim);
  for (std::size_t op = 0; op < 2 * k; ++op) {
    const Complex c = z.coeffs()[static_cast<Eigen::Index>(op)];
    if (c == Complex(0.0, 0.0)) continue;
    std::vector<Mat> factors(k, Mat::Identity(keep, keep));
    factors[op % k] = op < k ? x : p;
    out += c * embed(factors);
  }
  return out;
}

bool is_shell_preserving(const Eigen::MatrixXcd& h, const FockTruncation& t,
                         const Tolerances& tol) {
  const double threshold = tol.shell_coupling * (1.0 + h.cwiseAbs().maxCoeff());
  std::vector<int> shell(t.dim());
  for (std::size_t s = 0; s < t.dim(); ++s) shell[s] = t.total_quanta(s);
  for (Eigen::Index i = 0; i < h.rows(); ++i) {
    for (Eigen::Index j = 0; j < h.cols(); ++j) {
      if (shell[i] != shell[j] && std::abs(h(i, j)) > threshold) return false;
    }
  }
  return true;
}

int OracleSpectrum::multiplicity_of(double energy) const {
  int n = 0;
  for (double e : eigenvalues) n += std::abs(e - energy) <= merge_tolerance;
  return n;
}

OracleSpectrum oracle_spectrum(const QuadraticForm& q, const FockTruncation& t,
                               const Tolerances& tol) {
  const Mat h = build_fock_matrix(q, t, tol);
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  if (es.info() != Eigen::Success) throw ComputationError("oracle eigensolve did not converge");

  OracleSpectrum out;
  out.eigenvalues = es.eigenvalues();
  out.eigenvectors = es.eigenvectors();
  out.merge_tolerance = tol.oracle_merge * (1.0 + out.eigenvalues.cwiseAbs().maxCoeff());
  out.clusters = cluster_sorted(out.eigenvalues, out.merge_tolerance);

  out.shell_preserving = is_shell_preserving(h, t, tol);
  if (out.shell_preserving) {
    out.shell_exact_upto = t.n_max();
    for (int s = 0; s <= t.n_max(); ++s) {
      std::vector<Eigen::Index> members;
      for (std::size_t i = 0; i < t.dim(); ++i) {
        if (t.total_quanta(i) == s) members.push_back(static_cast<Eigen::Index>(i));
      }
      const auto n = static_cast<Eigen::Index>(members.size());
      Mat block(n, n);
      for (Eigen::Index a = 0; a < n; ++a) {
        for (Eigen::Index b = 0; b < n; ++b) block(a, b) = h(members[a], members[b]);
      }
      Eigen::SelfAdjointEigenSolver<Mat> bs(block, Eigen::EigenvaluesOnly);
      if (bs.info() != Eigen::Success) throw ComputationError("shell eigensolve did not converge");
      out.shell_eigenvalues.emplace_back(bs.eigenvalues().begin(), bs.eigenvalues().end());
    }
  }
  return out;
}

ComparisonReport compare_with_lattice(const OracleSpectrum& o, const SpectrumReport& r,
                                      const Tolerances& tol) {
  ComparisonReport rep;
  rep.shell_exact = o.shell_preserving;
  if (!r.vacuum_energy) {
    rep.note = "no lattice for this classification";
    rep.degeneracies_agree = false;
    return rep;
  }
  rep.vacuum_multiplicity = o.multiplicity_of(*r.vacuum_energy);

  std::vector<double> lattice;
  std::vector<double> oracle;
  if (o.shell_preserving) {
    rep.shells_compared = o.shell_exact_upto;
    LatticeOptions opts;
    opts.expand_zero_modes = true;
    for (const auto& l : spectrum_lattice(r, o.shell_exact_upto, opts, tol)) {
      lattice.push_back(l.energy);
    }
    for (const auto& shell : o.shell_eigenvalues) oracle.insert(oracle.end(), shell.begin(), shell.end());
    rep.note = "complete shells 0.." + std::to_string(o.shell_exact_upto) + " compared";
  } else {
    const auto window = static_cast<std::size_t>(o.eigenvalues.size() / 4);
    if (r.classification != SpectrumClass::BoundedBelowDiscrete || window == 0) {
      rep.note = "form is not shell-preserving and has no bounded lattice to compare";
      rep.degeneracies_agree = false;
      return rep;
    }
    lattice = lowest_lattice_energies(r, window);
    oracle.assign(o.eigenvalues.data(), o.eigenvalues.data() + window);
    rep.note = "lowest quarter of the oracle spectrum compared (truncation tail excluded)";
  }
  std::sort(lattice.begin(), lattice.end());
  std::sort(oracle.begin(), oracle.end());
  if (lattice.size() != oracle.size()) {
    rep.note += "; level counts differ";
    rep.degeneracies_agree = false;
  }
  const std::size_t n = std::min(lattice.size(), oracle.size());
  for (std::size_t i = 0; i < n; ++i) {
    const double d = std::abs(lattice[i] - oracle[i]);
    rep.levels.push_back({lattice[i], oracle[i], d});
    rep.max_abs_diff = std::max(rep.max_abs_diff, d);
  }

  const Eigen::VectorXd lv = Eigen::Map<const Eigen::VectorXd>(lattice.data(), static_cast<Eigen::Index>(n));
  const Eigen::VectorXd ov = Eigen::Map<const Eigen::VectorXd>(oracle.data(), static_cast<Eigen::Index>(n));
  const auto lc = cluster_sorted(lv, o.merge_tolerance);
  const auto oc = cluster_sorted(ov, o.merge_tolerance);
  const std::size_t m = std::max(lc.size(), oc.size());
  for (std::size_t i = 0; i < m; ++i) {
    DegeneracyComparison d;
    d.energy = i < lc.size() ? lc[i].energy : oc[i].energy;
    d.lattice_count = i < lc.size() ? lc[i].count : 0;
    d.oracle_count = i < oc.size() ? oc[i].count : 0;
    d.agree = d.lattice_count == d.oracle_count && i < lc.size() && i < oc.size() &&
              std::abs(lc[i].energy - oc[i].energy) <= o.merge_tolerance;
    rep.degeneracies_agree &= d.agree;
    rep.degeneracies.push_back(d);
  }
  return rep;
}

}  // namespace quadham
