#include "quenchlab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "quenchlab/errors.hpp"

namespace quenchlab {

namespace {

void check_site(const FockBasis& basis, int site) {
  if (site < 0 || site >= basis.sites()) {
    throw ArgumentError("site " + std::to_string(site) + " outside [0, " + std::to_string(basis.sites()) + ")");
  }
}

}  // namespace

double fidelity(const StateVector& a, const StateVector& b) {
  const FockBasis& A = a.basis();
  const FockBasis& B = b.basis();
  if (A == B) return std::min(1.0, std::norm(a.inner(b)));
  if (A.sites() != B.sites()) throw ArgumentError("fidelity of states on chains of different length");
  // Prefer the direction that is structurally guaranteed; otherwise let
  // embed_state decide whether the weight fits.
  if (embeddable(A, B)) return std::min(1.0, std::norm(embed_state(a, b.basis_ptr()).inner(b)));
  if (embeddable(B, A)) return std::min(1.0, std::norm(a.inner(embed_state(b, a.basis_ptr()))));
  if (A.levels() <= B.levels()) return std::min(1.0, std::norm(embed_state(a, b.basis_ptr()).inner(b)));
  return std::min(1.0, std::norm(a.inner(embed_state(b, a.basis_ptr()))));
}

std::vector<std::vector<double>> level_populations(const StateVector& psi) {
  const FockBasis& basis = psi.basis();
  std::vector<std::vector<double>> pops(static_cast<std::size_t>(basis.sites()),
                                        std::vector<double>(static_cast<std::size_t>(basis.levels()), 0.0));
  const auto& amps = psi.amplitudes();
  for (std::size_t i = 0; i < basis.dim(); ++i) {
    const double w = std::norm(amps[static_cast<Eigen::Index>(i)]);
    if (w == 0.0) continue;
    auto n = basis.levels_of(i);
    for (std::size_t j = 0; j < n.size(); ++j) pops[j][n[j]] += w;
  }
  return pops;
}

double level_population(const StateVector& psi, int site, int level) {
  const FockBasis& basis = psi.basis();
  check_site(basis, site);
  if (level < 0 || level >= basis.levels()) {
    throw ArgumentError("level " + std::to_string(level) + " outside [0, " + std::to_string(basis.levels()) + ")");
  }
  const auto& amps = psi.amplitudes();
  double p = 0.0;
  for (std::size_t i = 0; i < basis.dim(); ++i) {
    if (basis.levels_of(i)[static_cast<std::size_t>(site)] == level) p += std::norm(amps[static_cast<Eigen::Index>(i)]);
  }
  return p;
}

std::vector<std::array<double, 3>> pauli_expectations(const StateVector& psi) {
  const FockBasis& basis = psi.basis();
  const auto& amps = psi.amplitudes();
  std::vector<std::array<double, 3>> out(static_cast<std::size_t>(basis.sites()), {0.0, 0.0, 0.0});
  for (std::size_t i = 0; i < basis.dim(); ++i) {
    const cplx c = amps[static_cast<Eigen::Index>(i)];
    if (c == cplx{}) continue;
    auto n = basis.levels_of(i);
    for (int j = 0; j < basis.sites(); ++j) {
      auto& e = out[static_cast<std::size_t>(j)];
      const Level nj = n[static_cast<std::size_t>(j)];
      if (nj == 1) {
        e[2] -= std::norm(c);
      } else if (nj == 0) {
        e[2] += std::norm(c);
        // Coherence with the partner that has site j raised to level 1.
        if (auto k = basis.find_code(basis.code_of(i) + basis.site_weight(j))) {
          const cplx z = std::conj(c) * amps[static_cast<Eigen::Index>(*k)];
          e[0] += 2.0 * z.real();
          e[1] += 2.0 * z.imag();
        }
      }
    }
  }
  return out;
}

double pauli_expectation(const StateVector& psi, int site, PauliAxis axis) {
  check_site(psi.basis(), site);
  const auto all = pauli_expectations(psi);
  return all[static_cast<std::size_t>(site)][static_cast<std::size_t>(axis)];
}

double anharmonicity_expectation(const StateVector& psi) {
  const FockBasis& basis = psi.basis();
  const auto& amps = psi.amplitudes();
  double a = 0.0;
  for (std::size_t i = 0; i < basis.dim(); ++i) {
    const double w = std::norm(amps[static_cast<Eigen::Index>(i)]);
    if (w == 0.0) continue;
    double v = 0.0;
    for (Level n : basis.levels_of(i)) v += static_cast<double>(n) * (n - 1.0);
    a += w * v;
  }
  return a;
}

double half_chain_entropy(const StateVector& psi, int cut) {
  const FockBasis& basis = psi.basis();
  if (cut < 1 || cut >= basis.sites()) {
    throw ArgumentError("entropy cut " + std::to_string(cut) + " outside [1, " + std::to_string(basis.sites() - 1) + "]");
  }
  const std::uint64_t right = basis.site_weight(cut - 1);  // K^(L-cut)
  const std::uint64_t left = basis.site_weight(0) * static_cast<std::uint64_t>(basis.levels()) / right;
  if (static_cast<double>(left) * static_cast<double>(right) > 1e8) {
    throw ResourceError("reduced-state matrix too large for a dense singular value decomposition");
  }
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(left), static_cast<Eigen::Index>(right));
  const auto& amps = psi.amplitudes();
  for (std::size_t i = 0; i < basis.dim(); ++i) {
    const std::uint64_t code = basis.code_of(i);
    m(static_cast<Eigen::Index>(code / right), static_cast<Eigen::Index>(code % right)) = amps[static_cast<Eigen::Index>(i)];
  }
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(m);
  double s = 0.0;
  for (Eigen::Index k = 0; k < svd.singularValues().size(); ++k) {
    const double sv = svd.singularValues()[k];
    const double lambda = sv * sv;
    if (lambda > 1e-300) s -= lambda * std::log(lambda);
  }
  return std::max(0.0, s);
}

double page_entropy(int sites, int cut, int levels) {
  const int small = std::min(cut, sites - cut);
  const int large = sites - small;
  const double ln_k = std::log(static_cast<double>(levels));
  // m/n = K^(small - large)
  return small * ln_k - 0.5 * std::exp((small - large) * ln_k);
}

// ---------------------------------------------------------------------------

SpectrumReport sector_spectrum(int sites, int particles, int levels, const HamiltonianProfiles& profiles,
                               std::size_t dense_cap) {
  if (profiles.has_transverse()) {
    throw UsageError("sector spectra need a particle-conserving Hamiltonian (no transverse field)");
  }
  const BasisPtr basis = build_basis(sites, levels, particles);
  if (basis->dim() > dense_cap) {
    throw ResourceError("sector dimension " + std::to_string(basis->dim()) + " exceeds the dense eigensolver cap " +
                        std::to_string(dense_cap));
  }
  const SparseOperator hop = build_hopping(basis, profiles.coupling);
  const SparseOperator onsite = build_onsite_anharmonicity(basis, profiles.anharmonicity);
  const SparseOperator H = linear_combination({{1.0, &hop}, {1.0, &onsite}});

  // Every matrix element is real in the Fock basis.
  const Eigen::MatrixXd dense = H.to_dense().real();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense);
  if (solver.info() != Eigen::Success) throw NumericsError("dense eigensolver did not converge");

  const SparseOperator A = build_anharmonicity_operator(basis);
  const Eigen::VectorXd a_diag = A.diagonal().real();
  std::set<int> attainable;
  for (Eigen::Index i = 0; i < a_diag.size(); ++i) attainable.insert(static_cast<int>(std::lround(a_diag[i])));
  const std::vector<int> labels(attainable.begin(), attainable.end());

  SpectrumReport report;
  const auto n = static_cast<std::size_t>(dense.rows());
  report.eigenvalues.resize(n);
  report.anharmonicity.resize(n);
  report.band.resize(n);
  report.ambiguous.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto col = static_cast<Eigen::Index>(k);
    report.eigenvalues[k] = solver.eigenvalues()[col];
    const double expect = solver.eigenvectors().col(col).cwiseAbs2().dot(a_diag);
    report.anharmonicity[k] = expect;
    double best = std::numeric_limits<double>::infinity();
    double second = std::numeric_limits<double>::infinity();
    int label = labels.front();
    for (int l : labels) {
      const double d = std::abs(expect - l);
      if (d < best) {
        second = best;
        best = d;
        label = l;
      } else if (d < second) {
        second = d;
      }
    }
    report.band[k] = label;
    report.ambiguous[k] = second - best < 0.5;
  }
  for (int l : labels) {
    Band b;
    b.anharmonicity = l;
    b.lowest = std::numeric_limits<double>::infinity();
    b.highest = -std::numeric_limits<double>::infinity();
    double sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      if (report.band[k] != l) continue;
      ++b.count;
      sum += report.eigenvalues[k];
      b.lowest = std::min(b.lowest, report.eigenvalues[k]);
      b.highest = std::max(b.highest, report.eigenvalues[k]);
    }
    if (b.count == 0) continue;
    b.center = sum / static_cast<double>(b.count);
    report.bands.push_back(b);
  }
  return report;
}

FrequencyPeak dominant_frequency(std::span<const double> series, double dt_ns) {
  const std::size_t n = series.size();
  if (n < 16) throw ArgumentError("dominant_frequency needs at least 16 samples, got " + std::to_string(n));
  if (!(dt_ns > 0.0) || !std::isfinite(dt_ns)) throw ArgumentError("sample spacing must be positive");

  double mean = 0.0;
  for (double v : series) mean += v;
  mean /= static_cast<double>(n);

  std::vector<double> x(n);
  double energy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n - 1));
    x[i] = w * (series[i] - mean);
    energy += x[i] * x[i];
  }

  FrequencyPeak peak;
  peak.resolution_mhz = 1e3 / (static_cast<double>(n) * dt_ns);
  if (energy < 1e-24 * static_cast<double>(n)) return peak;

  const std::size_t half = n / 2;
  std::vector<double> mag(half + 1);
  for (std::size_t k = 0; k <= half; ++k) {
    std::complex<double> acc{};
    const double step = -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) acc += x[i] * std::polar(1.0, step * static_cast<double>(i));
    mag[k] = std::abs(acc);
  }

  std::size_t best = 0;
  for (std::size_t k = 1; k <= half; ++k) {
    const bool left_ok = mag[k] >= mag[k - 1];
    const bool right_ok = k == half || mag[k] >= mag[k + 1];
    if (left_ok && right_ok && (best == 0 || mag[k] > mag[best])) best = k;
  }
  if (best == 0) return peak;

  double offset = 0.0;
  if (best < half) {
    const double a = mag[best - 1], b = mag[best], c = mag[best + 1];
    const double denom = a - 2.0 * b + c;
    if (denom < 0.0) offset = std::clamp(0.5 * (a - c) / denom, -0.5, 0.5);
  }
  peak.found = true;
  peak.frequency_mhz = (static_cast<double>(best) + offset) * peak.resolution_mhz;
  peak.magnitude = mag[best];
  return peak;
}

}  // namespace quenchlab
