#pragma once

// Independent reference computations shared by the unit and acceptance tests.

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "quenchlab/fockspace.hpp"

namespace oracle {

using cplx = std::complex<double>;

inline Eigen::VectorXcd random_vector(std::size_t dim, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::VectorXcd v(static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = cplx(g(rng), g(rng));
  return v / v.norm();
}

inline quenchlab::StateVector random_state(const quenchlab::BasisPtr& basis, std::mt19937_64& rng) {
  return quenchlab::StateVector(basis, random_vector(basis->dim(), rng));
}

inline Eigen::MatrixXcd random_hermitian(std::size_t dim, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::MatrixXcd a(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) a(i, j) = cplx(g(rng), g(rng));
  }
  return 0.5 * (a + a.adjoint());
}

// exp(-i H t) v by full eigendecomposition.
inline Eigen::VectorXcd dense_evolve(const Eigen::MatrixXcd& H, const Eigen::VectorXcd& v, double t) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
  const Eigen::VectorXcd phases = (es.eigenvalues().cast<cplx>() * cplx(0.0, -t)).array().exp();
  return es.eigenvectors() * phases.asDiagonal() * (es.eigenvectors().adjoint() * v);
}

// Brute-force occupation list of L sites, K levels, optional N, in
// lexicographic order with site 1 most significant.
inline std::vector<std::vector<int>> enumerate(int L, int K, int N = -1) {
  std::vector<std::vector<int>> out;
  std::vector<int> occ(static_cast<std::size_t>(L), 0);
  long total = 1;
  for (int j = 0; j < L; ++j) total *= K;
  for (long c = 0; c < total; ++c) {
    long rest = c;
    int sum = 0;
    for (int j = L - 1; j >= 0; --j) {
      occ[static_cast<std::size_t>(j)] = static_cast<int>(rest % K);
      sum += occ[static_cast<std::size_t>(j)];
      rest /= K;
    }
    if (N < 0 || sum == N) out.push_back(occ);
  }
  return out;
}

inline long binomial(int n, int k) {
  long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Matrix of a single-site ladder operator element by element from the
// occupation list: <m| a+_site |n> = sqrt(n_site + 1) when m = n + e_site.
inline Eigen::MatrixXcd dense_raise(const std::vector<std::vector<int>>& states, int site) {
  const auto d = static_cast<Eigen::Index>(states.size());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
  for (Eigen::Index c = 0; c < d; ++c) {
    for (Eigen::Index r = 0; r < d; ++r) {
      auto up = states[static_cast<std::size_t>(c)];
      up[static_cast<std::size_t>(site)] += 1;
      if (up == states[static_cast<std::size_t>(r)]) {
        m(r, c) = std::sqrt(static_cast<double>(states[static_cast<std::size_t>(c)][static_cast<std::size_t>(site)] + 1));
      }
    }
  }
  return m;
}

// H0 + H_U + T element by element from occupations (T needs the full space).
inline Eigen::MatrixXcd dense_model(const std::vector<std::vector<int>>& states, const std::vector<double>& J,
                                    const std::vector<double>& U, const std::vector<double>& Omega) {
  const auto d = static_cast<Eigen::Index>(states.size());
  const int L = static_cast<int>(states.front().size());
  Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(d, d);
  // Hopping elements directly from occupations so sector lists work too.
  for (Eigen::Index c = 0; c < d; ++c) {
    for (Eigen::Index r = 0; r < d; ++r) {
      const auto& from = states[static_cast<std::size_t>(c)];
      const auto& to = states[static_cast<std::size_t>(r)];
      for (int j = 0; j + 1 < L; ++j) {
        auto moved = from;
        moved[static_cast<std::size_t>(j)] += 1;
        moved[static_cast<std::size_t>(j) + 1] -= 1;
        if (moved == to) {
          const double v = J[static_cast<std::size_t>(j)] *
                           std::sqrt(static_cast<double>((from[static_cast<std::size_t>(j)] + 1) * from[static_cast<std::size_t>(j) + 1]));
          H(r, c) += v;
          H(c, r) += v;
        }
      }
    }
  }
  for (Eigen::Index i = 0; i < d; ++i) {
    for (int j = 0; j < L; ++j) {
      const double n = states[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      H(i, i) += -0.5 * U[static_cast<std::size_t>(j)] * n * (n - 1.0);
    }
  }
  if (!Omega.empty()) {
    for (int j = 0; j < L; ++j) {
      const Eigen::MatrixXcd up = dense_raise(states, j);
      H += 0.5 * Omega[static_cast<std::size_t>(j)] * (up + up.adjoint());
    }
  }
  return H;
}

}  // namespace oracle
