#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace quenchlab {

/// y = H x for a Hermitian H.
using LinearMap = std::function<void(const Eigen::VectorXcd& x, Eigen::VectorXcd& y)>;

struct KrylovOptions {
  int max_dim = 30;          // Lanczos subspace dimension per substep
  double tol = 1e-10;        // a-posteriori error bound per substep
  int max_substeps = 1000000;
  bool reorthogonalize = false;  // full Gram-Schmidt against all Lanczos vectors
};

struct KrylovStats {
  int substeps = 0;
  long matvecs = 0;
};

/// Computes psi <- exp(-i H dt) psi with Lanczos, splitting dt into substeps
/// whose residual estimate beta_m |[exp(-i T tau)]_{m,1}| stays below tol.
/// dt may be negative. Owns its workspace, so one instance per thread.
class KrylovExpm {
 public:
  explicit KrylovExpm(KrylovOptions options = {}) : options_(options) {}

  KrylovStats apply(const LinearMap& H, Eigen::VectorXcd& psi, double dt);

  const KrylovOptions& options() const { return options_; }

 private:
  KrylovOptions options_;
  std::vector<Eigen::VectorXcd> basis_;
  Eigen::VectorXcd work_;
};

}  // namespace quenchlab
