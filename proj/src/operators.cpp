#include "quenchlab/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "quenchlab/errors.hpp"

namespace quenchlab {

using Triplet = Eigen::Triplet<cplx, int>;

CouplingProfile CouplingProfile::uniform(int sites, double J) {
  return {std::vector<double>(static_cast<std::size_t>(std::max(sites - 1, 0)), J)};
}

AnharmonicityProfile AnharmonicityProfile::uniform(int sites, double U) {
  return {std::vector<double>(static_cast<std::size_t>(std::max(sites, 0)), U)};
}

TransverseProfile TransverseProfile::uniform(int sites, double Omega) {
  return {std::vector<double>(static_cast<std::size_t>(std::max(sites, 0)), Omega)};
}

bool HamiltonianProfiles::has_transverse() const {
  return std::any_of(transverse.Omega.begin(), transverse.Omega.end(), [](double w) { return w != 0.0; });
}

// ---------------------------------------------------------------------------

SparseOperator::SparseOperator(BasisPtr basis, Matrix matrix, bool hermitian)
    : basis_(std::move(basis)), matrix_(std::move(matrix)), hermitian_(hermitian) {
  if (!basis_) throw ArgumentError("operator needs a basis");
  const auto n = static_cast<Eigen::Index>(basis_->dim());
  if (matrix_.rows() != n || matrix_.cols() != n) throw ArgumentError("operator shape does not match basis dimension");
  matrix_.makeCompressed();
}

SparseOperator SparseOperator::zero(BasisPtr basis) {
  const auto n = static_cast<Eigen::Index>(basis->dim());
  return SparseOperator(std::move(basis), Matrix(n, n), true);
}

bool SparseOperator::is_diagonal() const {
  for (Eigen::Index r = 0; r < matrix_.outerSize(); ++r) {
    for (Matrix::InnerIterator it(matrix_, r); it; ++it) {
      if (it.col() != r && it.value() != cplx{}) return false;
    }
  }
  return true;
}

void SparseOperator::apply(const Eigen::VectorXcd& in, Eigen::VectorXcd& out) const {
  out.noalias() = matrix_ * in;
}

Eigen::VectorXcd SparseOperator::diagonal() const { return matrix_.diagonal(); }

Eigen::MatrixXcd SparseOperator::to_dense() const { return Eigen::MatrixXcd(matrix_); }

double SparseOperator::hermiticity_defect() const {
  Matrix adj = matrix_.adjoint();
  Matrix diff = matrix_ - adj;
  double worst = 0.0;
  for (Eigen::Index r = 0; r < diff.outerSize(); ++r) {
    for (Matrix::InnerIterator it(diff, r); it; ++it) worst = std::max(worst, std::abs(it.value()));
  }
  return worst;
}

SparseOperator linear_combination(std::span<const std::pair<double, const SparseOperator*>> terms) {
  if (terms.empty()) throw ArgumentError("linear combination of zero terms");
  const BasisPtr& basis = terms.front().second->basis_ptr();
  SparseOperator::Matrix sum(static_cast<Eigen::Index>(basis->dim()), static_cast<Eigen::Index>(basis->dim()));
  bool hermitian = true;
  for (const auto& [c, op] : terms) {
    if (!(op->basis() == *basis)) throw ArgumentError("linear combination of operators over different bases");
    hermitian = hermitian && op->hermitian();
    if (c == 0.0) continue;
    sum = sum + c * op->matrix();
  }
  sum.prune(cplx{});
  return SparseOperator(basis, std::move(sum), hermitian);
}

SparseOperator linear_combination(std::initializer_list<std::pair<double, const SparseOperator*>> terms) {
  return linear_combination(std::span<const std::pair<double, const SparseOperator*>>(terms.begin(), terms.size()));
}

// ---------------------------------------------------------------------------

namespace {

void require_length(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    throw ArgumentError(std::string(what) + " has length " + std::to_string(got) + ", expected " + std::to_string(want));
  }
}

SparseOperator from_triplets(const BasisPtr& basis, const std::vector<Triplet>& triplets, bool hermitian) {
  const auto n = static_cast<Eigen::Index>(basis->dim());
  SparseOperator::Matrix m(n, n);
  m.setFromTriplets(triplets.begin(), triplets.end());
  return SparseOperator(basis, std::move(m), hermitian);
}

template <class DiagonalFn>
SparseOperator diagonal_operator(const BasisPtr& basis, DiagonalFn&& value_of) {
  std::vector<Triplet> triplets;
  triplets.reserve(basis->dim());
  for (std::size_t i = 0; i < basis->dim(); ++i) {
    const double v = value_of(basis->levels_of(i));
    if (v != 0.0) triplets.emplace_back(static_cast<int>(i), static_cast<int>(i), v);
  }
  return from_triplets(basis, triplets, true);
}

}  // namespace

SparseOperator build_hopping(const BasisPtr& basis, const CouplingProfile& profile) {
  const int L = basis->sites();
  const int top = basis->levels() - 1;
  require_length(profile.J.size(), static_cast<std::size_t>(L - 1), "coupling profile");

  std::vector<Triplet> triplets;
  triplets.reserve(basis->dim() * static_cast<std::size_t>(L));
  for (std::size_t i = 0; i < basis->dim(); ++i) {
    auto n = basis->levels_of(i);
    const std::uint64_t code = basis->code_of(i);
    for (int j = 0; j + 1 < L; ++j) {
      const double J = profile.J[static_cast<std::size_t>(j)];
      if (J == 0.0) continue;
      const int nj = n[static_cast<std::size_t>(j)];
      const int nk = n[static_cast<std::size_t>(j) + 1];
      // a+_j a_{j+1}; the h.c. term is its transpose partner.
      if (nk == 0 || nj == top) continue;
      const std::uint64_t target = code + basis->site_weight(j) - basis->site_weight(j + 1);
      auto f = basis->find_code(target);
      if (!f) continue;
      const double v = J * std::sqrt(static_cast<double>((nj + 1) * nk));
      triplets.emplace_back(static_cast<int>(*f), static_cast<int>(i), v);
      triplets.emplace_back(static_cast<int>(i), static_cast<int>(*f), v);
    }
  }
  return from_triplets(basis, triplets, true);
}

SparseOperator build_onsite_anharmonicity(const BasisPtr& basis, const AnharmonicityProfile& profile) {
  require_length(profile.U.size(), static_cast<std::size_t>(basis->sites()), "anharmonicity profile");
  for (double u : profile.U) {
    if (u < 0.0) throw ArgumentError("anharmonicity magnitudes U_j must be >= 0 (the operator applies the minus sign)");
  }
  return diagonal_operator(basis, [&](std::span<const Level> n) {
    double v = 0.0;
    for (std::size_t j = 0; j < n.size(); ++j) v += -0.5 * profile.U[j] * n[j] * (n[j] - 1.0);
    return v;
  });
}

SparseOperator build_number_weighted(const BasisPtr& basis, std::span<const double> weights) {
  require_length(weights.size(), static_cast<std::size_t>(basis->sites()), "number weights");
  return diagonal_operator(basis, [&](std::span<const Level> n) {
    double v = 0.0;
    for (std::size_t j = 0; j < n.size(); ++j) v += weights[j] * n[j];
    return v;
  });
}

SparseOperator build_total_number(const BasisPtr& basis) {
  std::vector<double> ones(static_cast<std::size_t>(basis->sites()), 1.0);
  return build_number_weighted(basis, ones);
}

SparseOperator build_transverse(const BasisPtr& basis, const TransverseProfile& profile) {
  require_length(profile.Omega.size(), static_cast<std::size_t>(basis->sites()), "transverse profile");
  if (!basis->is_full()) {
    throw UsageError("transverse field breaks particle-number conservation; build it on a full-space basis");
  }
  const int top = basis->levels() - 1;
  std::vector<Triplet> triplets;
  triplets.reserve(basis->dim() * static_cast<std::size_t>(basis->sites()) * 2);
  for (std::size_t i = 0; i < basis->dim(); ++i) {
    auto n = basis->levels_of(i);
    for (int j = 0; j < basis->sites(); ++j) {
      const double omega = profile.Omega[static_cast<std::size_t>(j)];
      const int nj = n[static_cast<std::size_t>(j)];
      if (omega == 0.0 || nj == top) continue;
      // a+_j raises site j; a_j is the transpose partner.
      const auto f = static_cast<int>(basis->code_of(i) + basis->site_weight(j));
      const double v = 0.5 * omega * std::sqrt(static_cast<double>(nj + 1));
      triplets.emplace_back(f, static_cast<int>(i), v);
      triplets.emplace_back(static_cast<int>(i), f, v);
    }
  }
  return from_triplets(basis, triplets, true);
}

SparseOperator build_anharmonicity_operator(const BasisPtr& basis) {
  return diagonal_operator(basis, [](std::span<const Level> n) {
    double v = 0.0;
    for (Level k : n) v += static_cast<double>(k) * (k - 1.0);
    return v;
  });
}

// ---------------------------------------------------------------------------

double bessel_j0(double x) {
  x = std::abs(x);
  if (x < 1e-8) return 1.0 - 0.25 * x * x;

  if (x > 25.0) {
    // Hankel asymptotic expansion, truncated at the smallest term.
    double p = 0.0, q = 0.0;
    double term = 1.0;  // a_k / x^k with a_0 = 1
    double last = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 200; ++k) {
      if (std::abs(term) > last) break;
      last = std::abs(term);
      switch (k % 4) {
        case 0: p += term; break;
        case 1: q += term; break;
        case 2: p -= term; break;
        case 3: q -= term; break;
      }
      if (last < 1e-17) break;
      const double odd = 2.0 * k + 1.0;
      term *= -odd * odd / (8.0 * (k + 1) * x);
    }
    const double chi = x - 0.25 * std::numbers::pi;
    return std::sqrt(2.0 / (std::numbers::pi * x)) * (p * std::cos(chi) - q * std::sin(chi));
  }

  // Miller backward recurrence normalized by J0 + 2 sum_k J_2k = 1.
  const int start = 2 * (static_cast<int>(x / 2.0) + 26);
  double next = 0.0;      // J_{k+1}
  double current = 1e-30; // J_k
  double even_sum = 0.0;
  for (int k = start; k > 0; --k) {
    const double prev = 2.0 * k / x * current - next;  // J_{k-1}
    next = current;
    current = prev;
    if ((k - 1) % 2 == 0 && k - 1 > 0) even_sum += current;
    if (std::abs(current) > 1e200) {
      current *= 1e-200;
      next *= 1e-200;
      even_sum *= 1e-200;
    }
  }
  return current / (current + 2.0 * even_sum);
}

double effective_coupling(double J, double eps, double nu) {
  if (nu == 0.0 || !std::isfinite(nu)) throw ArgumentError("drive frequency must be nonzero");
  return J * bessel_j0(eps / nu);
}

}  // namespace quenchlab
