#include "quenchlab/krylov.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "quenchlab/errors.hpp"

namespace quenchlab {

namespace {

constexpr int kMinEarlyExit = 4;

// Eigendecomposition of the k x k Lanczos tridiagonal.
struct Projection {
  int k = 0;
  Eigen::VectorXd lambda;
  Eigen::MatrixXd Q;

  void compute(const std::vector<double>& alpha, const std::vector<double>& beta, int size) {
    k = size;
    if (k == 1) {
      lambda = Eigen::VectorXd::Constant(1, alpha[0]);
      Q = Eigen::MatrixXd::Ones(1, 1);
      return;
    }
    Eigen::VectorXd diag = Eigen::Map<const Eigen::VectorXd>(alpha.data(), k);
    Eigen::VectorXd sub = Eigen::Map<const Eigen::VectorXd>(beta.data(), k - 1);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    if (es.info() != Eigen::Success) throw NumericsError("tridiagonal eigensolver failed");
    lambda = es.eigenvalues();
    Q = es.eigenvectors();
  }

  // exp(-i T tau) e_1 in the Lanczos basis.
  Eigen::VectorXcd coefficients(double direction, double tau) const {
    Eigen::VectorXcd c(k);
    for (int i = 0; i < k; ++i) c[i] = std::polar(Q(0, i), -direction * lambda[i] * tau);
    return Q.cast<std::complex<double>>() * c;
  }
};

}  // namespace

KrylovStats KrylovExpm::apply(const LinearMap& H, Eigen::VectorXcd& psi, double dt) {
  KrylovStats stats;
  if (dt == 0.0 || psi.size() == 0) return stats;

  const Eigen::Index n = psi.size();
  const int m = static_cast<int>(std::min<Eigen::Index>(std::max(options_.max_dim, 2), n));
  if (static_cast<int>(basis_.size()) < m) basis_.resize(static_cast<std::size_t>(m));
  work_.resize(n);

  const double direction = dt > 0.0 ? 1.0 : -1.0;
  double remaining = std::abs(dt);
  double tau_prev = 0.0;
  std::vector<double> alpha, beta;
  alpha.reserve(static_cast<std::size_t>(m));
  beta.reserve(static_cast<std::size_t>(m));

  while (remaining > 0.0) {
    if (++stats.substeps > options_.max_substeps) {
      throw NumericsError("Krylov propagation exceeded " + std::to_string(options_.max_substeps) + " substeps");
    }
    const double scale = psi.norm();
    if (scale == 0.0) return stats;

    // Lanczos tridiagonalization started from psi. The recurrence stops
    // early once the full remaining step already meets the tolerance.
    alpha.clear();
    beta.clear();
    basis_[0] = psi / scale;
    int k = 0;
    bool invariant = false;
    bool converged = false;
    double residual = 0.0;
    Projection proj;
    for (int j = 0; j < m; ++j) {
      H(basis_[static_cast<std::size_t>(j)], work_);
      ++stats.matvecs;
      const double a = basis_[static_cast<std::size_t>(j)].dot(work_).real();
      work_ -= a * basis_[static_cast<std::size_t>(j)];
      if (j > 0) work_ -= beta[static_cast<std::size_t>(j) - 1] * basis_[static_cast<std::size_t>(j) - 1];
      if (options_.reorthogonalize) {
        for (int i = 0; i <= j; ++i) {
          work_ -= basis_[static_cast<std::size_t>(i)].dot(work_) * basis_[static_cast<std::size_t>(i)];
        }
      }
      alpha.push_back(a);
      k = j + 1;
      const double b = work_.norm();
      const double local_scale = std::abs(a) + (j > 0 ? beta[static_cast<std::size_t>(j) - 1] : 0.0);
      if (b <= 1e-13 * local_scale || b == 0.0) {
        invariant = true;  // Krylov space is H-invariant; the projection is exact
        break;
      }
      residual = b;
      if (k >= kMinEarlyExit || k == m) {
        proj.compute(alpha, beta, k);
        if (k == m || b * std::abs(proj.coefficients(direction, remaining)[k - 1]) <= options_.tol) {
          converged = k < m;
          break;
        }
      }
      beta.push_back(b);
      basis_[static_cast<std::size_t>(j) + 1] = work_ / b;
    }
    if (invariant) proj.compute(alpha, beta, k);

    double tau = remaining;
    Eigen::VectorXcd y;
    if (invariant || converged) {
      y = proj.coefficients(direction, tau);
    } else {
      if (tau_prev > 0.0) tau = std::min(remaining, 2.0 * tau_prev);
      int tries = 0;
      while (true) {
        y = proj.coefficients(direction, tau);
        const double err = residual * std::abs(y[k - 1]);
        if (err <= options_.tol) break;
        if (++tries > 200) throw NumericsError("Krylov step size underflow at subspace dimension " + std::to_string(k));
        const double shrink = 0.9 * std::pow(options_.tol / err, 1.0 / k);
        tau *= std::clamp(shrink, 0.05, 0.9);
      }
    }

    psi.setZero();
    for (int i = 0; i < k; ++i) psi += (scale * y[i]) * basis_[static_cast<std::size_t>(i)];

    remaining -= tau;
    tau_prev = tau;
    if (remaining <= 1e-15 * std::abs(dt)) break;
  }
  return stats;
}

}  // namespace quenchlab
