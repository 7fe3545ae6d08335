#pragma once

#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Sparse>

#include "quenchlab/fockspace.hpp"

namespace quenchlab {

/// Nearest-neighbour couplings J_{j,j+1} in rad/ns, length L-1.
struct CouplingProfile {
  std::vector<double> J;
  static CouplingProfile uniform(int sites, double J);
};

/// On-site interaction magnitudes U_j >= 0 in rad/ns, length L. The operator
/// applies the sign: H_U = sum_j (-U_j/2) n_j (n_j - 1).
struct AnharmonicityProfile {
  std::vector<double> U;
  static AnharmonicityProfile uniform(int sites, double U);
};

/// Transverse field strengths Omega_j in rad/ns, length L.
struct TransverseProfile {
  std::vector<double> Omega;
  static TransverseProfile uniform(int sites, double Omega);
};

/// Couplings for every Hamiltonian term, in rad/ns.
struct HamiltonianProfiles {
  CouplingProfile coupling;
  AnharmonicityProfile anharmonicity;
  TransverseProfile transverse;

  bool has_transverse() const;
};

/// Sparse complex matrix over a FockBasis.
///
/// `hermitian` is set by builders that emit every off-diagonal entry together
/// with its conjugate partner, so A == A^dagger holds exactly.
class SparseOperator {
 public:
  using Matrix = Eigen::SparseMatrix<cplx, Eigen::RowMajor, int>;

  SparseOperator(BasisPtr basis, Matrix matrix, bool hermitian);

  /// Zero operator over the basis.
  static SparseOperator zero(BasisPtr basis);

  const FockBasis& basis() const { return *basis_; }
  const BasisPtr& basis_ptr() const { return basis_; }
  const Matrix& matrix() const { return matrix_; }
  bool hermitian() const { return hermitian_; }
  bool is_diagonal() const;
  std::size_t dim() const { return basis_->dim(); }

  /// out = A * in.
  void apply(const Eigen::VectorXcd& in, Eigen::VectorXcd& out) const;
  Eigen::VectorXcd diagonal() const;
  Eigen::MatrixXcd to_dense() const;

  /// max |A_ij - conj(A_ji)| over stored entries.
  double hermiticity_defect() const;

 private:
  BasisPtr basis_;
  Matrix matrix_;
  bool hermitian_;
};

/// sum_k c_k A_k with real coefficients; all terms must share the basis.
/// The result is Hermitian when every term is.
SparseOperator linear_combination(std::span<const std::pair<double, const SparseOperator*>> terms);
SparseOperator linear_combination(std::initializer_list<std::pair<double, const SparseOperator*>> terms);

/// sum_j J_{j,j+1} (a+_j a_{j+1} + h.c.) with sqrt(n+1) ladder elements,
/// truncated at level K-1.
SparseOperator build_hopping(const BasisPtr& basis, const CouplingProfile& profile);

/// Diagonal sum_j (-U_j/2) n_j (n_j - 1).
SparseOperator build_onsite_anharmonicity(const BasisPtr& basis, const AnharmonicityProfile& profile);

/// Diagonal sum_j w_j n_j.
SparseOperator build_number_weighted(const BasisPtr& basis, std::span<const double> weights);

/// Total particle number, sum_j n_j.
SparseOperator build_total_number(const BasisPtr& basis);

/// (1/2) sum_j Omega_j (a+_j + a_j). Requires a full-space basis (UsageError otherwise).
SparseOperator build_transverse(const BasisPtr& basis, const TransverseProfile& profile);

/// Diagonal sum_j n_j (n_j - 1).
SparseOperator build_anharmonicity_operator(const BasisPtr& basis);

/// Bessel function of the first kind of order zero, accurate to ~1e-14.
double bessel_j0(double x);

/// J_eff = J * J0(eps / nu). Units only need to agree; nu must be nonzero.
double effective_coupling(double J, double eps, double nu);

}  // namespace quenchlab
