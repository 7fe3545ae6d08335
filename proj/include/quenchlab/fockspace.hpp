#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

namespace quenchlab {

using cplx = std::complex<double>;
using Level = std::uint8_t;

/// Per-site occupation numbers (n_1, ..., n_L), site 1 first.
using Occupation = std::vector<int>;

/// Truncated bosonic Fock space of L sites with K levels each, optionally
/// restricted to a fixed total particle number N.
///
/// States are ordered lexicographically with site 1 as the most significant
/// digit, i.e. by the base-K code sum_j n_j K^(L-1-j). For the full space the
/// code is the index; sector bases keep the same order filtered to sum n_j = N
/// and resolve codes through a hash map.
///
/// Instances are immutable and shared through BasisPtr.
class FockBasis {
 public:
  FockBasis(int sites, int levels, std::optional<int> sector);

  int sites() const { return sites_; }
  int levels() const { return levels_; }
  std::optional<int> sector() const { return sector_; }
  bool is_full() const { return !sector_.has_value(); }
  std::size_t dim() const { return codes_.size(); }

  /// Occupation of state i; throws ArgumentError when i >= dim().
  Occupation occupation_at(std::size_t i) const;
  /// Position of occ; throws LookupError when occ is not in this basis.
  std::size_t index_of(std::span<const int> occ) const;

  /// Unchecked view of the levels of state i (length L).
  std::span<const Level> levels_of(std::size_t i) const {
    return {table_.data() + i * static_cast<std::size_t>(sites_), static_cast<std::size_t>(sites_)};
  }
  std::uint64_t code_of(std::size_t i) const { return codes_[i]; }
  /// K^(L-1-site): code increment for adding one particle on `site` (0-based).
  std::uint64_t site_weight(int site) const { return weights_[static_cast<std::size_t>(site)]; }
  /// Index of the state with the given code, if it belongs to this basis.
  std::optional<std::size_t> find_code(std::uint64_t code) const;

  /// Same (L, K, sector) implies identical state ordering.
  bool operator==(const FockBasis& other) const {
    return sites_ == other.sites_ && levels_ == other.levels_ && sector_ == other.sector_;
  }

 private:
  int sites_;
  int levels_;
  std::optional<int> sector_;
  std::vector<std::uint64_t> weights_;
  std::vector<std::uint64_t> codes_;
  std::vector<Level> table_;  // dim x L, row-major
  std::unordered_map<std::uint64_t, std::uint32_t> lookup_;  // sector bases only
};

using BasisPtr = std::shared_ptr<const FockBasis>;

/// Builds a basis; throws ArgumentError for L < 1, K < 2 or N outside [0, L(K-1)].
BasisPtr build_basis(int sites, int levels, std::optional<int> sector = std::nullopt);

/// Unit-norm amplitude vector over a FockBasis.
class StateVector {
 public:
  /// Takes ownership of amplitudes. Throws ArgumentError on a size mismatch
  /// or when the norm differs from 1 by more than 1e-10.
  StateVector(BasisPtr basis, Eigen::VectorXcd amplitudes);

  /// Scales amplitudes to unit norm first; throws ArgumentError for a zero vector.
  static StateVector normalized(BasisPtr basis, Eigen::VectorXcd amplitudes);
  static StateVector basis_state(BasisPtr basis, std::size_t index);

  const FockBasis& basis() const { return *basis_; }
  const BasisPtr& basis_ptr() const { return basis_; }
  const Eigen::VectorXcd& amplitudes() const { return amplitudes_; }
  // Propagators write through this; they are responsible for unitarity.
  Eigen::VectorXcd& amplitudes() { return amplitudes_; }

  std::size_t dim() const { return static_cast<std::size_t>(amplitudes_.size()); }
  double norm() const { return amplitudes_.norm(); }
  cplx inner(const StateVector& other) const;  // <this|other>, same basis required

 private:
  BasisPtr basis_;
  Eigen::VectorXcd amplitudes_;
};

/// Product state from per-site tokens: digit d puts the site in level d,
/// '+' is (|0> + |1>)/sqrt(2). Throws ParseError for a wrong length, an
/// unknown token or a level >= K, and ArgumentError when the state has
/// weight outside a sector-restricted basis.
StateVector parse_product_state(std::string_view tokens, const BasisPtr& basis);

/// Product state with per-site amplitudes (c0, c1) on levels {0, 1}; each
/// pair is normalized independently.
StateVector product_state(std::span<const std::array<cplx, 2>> site_amplitudes, const BasisPtr& basis);

/// Copies amplitudes onto the matching occupations of `target` (same L,
/// K_target >= K_source). Throws ArgumentError for incompatible L, K or
/// sector, including weight on occupations missing from a sector target.
StateVector embed_state(const StateVector& state, const BasisPtr& target);

/// True when states of `from` can be embedded into `to` without loss.
bool embeddable(const FockBasis& from, const FockBasis& to);

}  // namespace quenchlab
