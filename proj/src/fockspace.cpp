#include "quenchlab/fockspace.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "quenchlab/errors.hpp"

namespace quenchlab {

namespace {

constexpr std::size_t kMaxDim = std::size_t{1} << 28;

// Enumerate occupations of sites [site, L) with `remaining` particles in
// ascending lexicographic order.
void enumerate_sector(int site, int sites, int levels, int remaining, std::uint64_t code,
                      const std::vector<std::uint64_t>& weights, std::vector<Level>& current,
                      std::vector<std::uint64_t>& codes, std::vector<Level>& flat) {
  if (site == sites) {
    if (remaining == 0) {
      codes.push_back(code);
      flat.insert(flat.end(), current.begin(), current.end());
      if (codes.size() > kMaxDim) throw ResourceError("sector basis exceeds the dimension cap");
    }
    return;
  }
  const int sites_left = sites - site - 1;
  for (int n = 0; n < levels && n <= remaining; ++n) {
    // Remaining sites must be able to absorb what is left.
    if (remaining - n > sites_left * (levels - 1)) continue;
    current[static_cast<std::size_t>(site)] = static_cast<Level>(n);
    enumerate_sector(site + 1, sites, levels, remaining - n, code + weights[static_cast<std::size_t>(site)] * n,
                     weights, current, codes, flat);
  }
}

}  // namespace

FockBasis::FockBasis(int sites, int levels, std::optional<int> sector)
    : sites_(sites), levels_(levels), sector_(sector) {
  if (sites < 1) throw ArgumentError("basis needs at least one site, got L=" + std::to_string(sites));
  if (levels < 2 || levels > 255) throw ArgumentError("levels per site must be in [2, 255], got K=" + std::to_string(levels));
  if (sector && (*sector < 0 || *sector > sites * (levels - 1))) {
    throw ArgumentError("particle number N=" + std::to_string(*sector) + " outside [0, " +
                        std::to_string(sites * (levels - 1)) + "]");
  }
  // Codes must fit in 64 bits.
  if (static_cast<double>(sites) * std::log2(static_cast<double>(levels)) >= 63.0) {
    throw ResourceError("K^L does not fit a 64-bit occupation code");
  }

  weights_.assign(static_cast<std::size_t>(sites), 1);
  for (int j = sites - 2; j >= 0; --j) {
    weights_[static_cast<std::size_t>(j)] = weights_[static_cast<std::size_t>(j) + 1] * static_cast<std::uint64_t>(levels);
  }
  const std::uint64_t full_dim = weights_[0] * static_cast<std::uint64_t>(levels);

  if (!sector) {
    if (full_dim > kMaxDim) throw ResourceError("full basis K^L=" + std::to_string(full_dim) + " exceeds the dimension cap");
    codes_.resize(full_dim);
    table_.resize(full_dim * static_cast<std::size_t>(sites));
    for (std::uint64_t c = 0; c < full_dim; ++c) {
      codes_[c] = c;
      std::uint64_t rest = c;
      for (int j = sites - 1; j >= 0; --j) {
        table_[c * static_cast<std::size_t>(sites) + static_cast<std::size_t>(j)] = static_cast<Level>(rest % static_cast<std::uint64_t>(levels));
        rest /= static_cast<std::uint64_t>(levels);
      }
    }
    return;
  }

  std::vector<Level> current(static_cast<std::size_t>(sites), 0);
  enumerate_sector(0, sites, levels, *sector, 0, weights_, current, codes_, table_);
  lookup_.reserve(codes_.size());
  for (std::size_t i = 0; i < codes_.size(); ++i) lookup_.emplace(codes_[i], static_cast<std::uint32_t>(i));
}

Occupation FockBasis::occupation_at(std::size_t i) const {
  if (i >= dim()) throw ArgumentError("basis index " + std::to_string(i) + " out of range [0, " + std::to_string(dim()) + ")");
  auto view = levels_of(i);
  return Occupation(view.begin(), view.end());
}

std::optional<std::size_t> FockBasis::find_code(std::uint64_t code) const {
  if (!sector_) {
    if (code < codes_.size()) return static_cast<std::size_t>(code);
    return std::nullopt;
  }
  auto it = lookup_.find(code);
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

std::size_t FockBasis::index_of(std::span<const int> occ) const {
  if (occ.size() != static_cast<std::size_t>(sites_)) {
    throw LookupError("occupation has " + std::to_string(occ.size()) + " sites, basis has " + std::to_string(sites_));
  }
  std::uint64_t code = 0;
  for (std::size_t j = 0; j < occ.size(); ++j) {
    if (occ[j] < 0 || occ[j] >= levels_) {
      throw LookupError("level " + std::to_string(occ[j]) + " on site " + std::to_string(j + 1) + " outside [0, " +
                        std::to_string(levels_ - 1) + "]");
    }
    code += weights_[j] * static_cast<std::uint64_t>(occ[j]);
  }
  auto idx = find_code(code);
  if (!idx) throw LookupError("occupation is not in the N=" + std::to_string(*sector_) + " sector");
  return *idx;
}

BasisPtr build_basis(int sites, int levels, std::optional<int> sector) {
  return std::make_shared<const FockBasis>(sites, levels, sector);
}

// ---------------------------------------------------------------------------

StateVector::StateVector(BasisPtr basis, Eigen::VectorXcd amplitudes)
    : basis_(std::move(basis)), amplitudes_(std::move(amplitudes)) {
  if (!basis_) throw ArgumentError("state vector needs a basis");
  if (static_cast<std::size_t>(amplitudes_.size()) != basis_->dim()) {
    throw ArgumentError("amplitude vector length " + std::to_string(amplitudes_.size()) + " does not match basis dimension " +
                        std::to_string(basis_->dim()));
  }
  if (std::abs(amplitudes_.norm() - 1.0) > 1e-10) {
    throw ArgumentError("state vector is not normalized (norm " + std::to_string(amplitudes_.norm()) + ")");
  }
}

StateVector StateVector::normalized(BasisPtr basis, Eigen::VectorXcd amplitudes) {
  const double n = amplitudes.norm();
  if (!(n > 0.0)) throw ArgumentError("cannot normalize a zero vector");
  amplitudes /= n;
  return StateVector(std::move(basis), std::move(amplitudes));
}

StateVector StateVector::basis_state(BasisPtr basis, std::size_t index) {
  if (!basis) throw ArgumentError("state vector needs a basis");
  if (index >= basis->dim()) throw ArgumentError("basis index out of range");
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis->dim()));
  amps[static_cast<Eigen::Index>(index)] = 1.0;
  return StateVector(std::move(basis), std::move(amps));
}

cplx StateVector::inner(const StateVector& other) const {
  if (!(*basis_ == *other.basis_)) throw ArgumentError("inner product of states over different bases");
  return amplitudes_.dot(other.amplitudes_);  // conjugates the left operand
}

// ---------------------------------------------------------------------------

namespace {

// Scatter a tensor product of per-site level amplitudes into the basis.
StateVector scatter_product(const std::vector<std::vector<std::pair<int, cplx>>>& sites, const BasisPtr& basis) {
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis->dim()));
  const std::size_t L = sites.size();
  std::vector<std::size_t> cursor(L, 0);
  double dropped = 0.0;
  while (true) {
    cplx amp = 1.0;
    std::uint64_t code = 0;
    for (std::size_t j = 0; j < L; ++j) {
      const auto& [level, a] = sites[j][cursor[j]];
      amp *= a;
      code += basis->site_weight(static_cast<int>(j)) * static_cast<std::uint64_t>(level);
    }
    if (auto idx = basis->find_code(code)) {
      amps[static_cast<Eigen::Index>(*idx)] += amp;
    } else {
      dropped += std::norm(amp);
    }
    // Odometer over the per-site choices, last site fastest.
    std::ptrdiff_t j = static_cast<std::ptrdiff_t>(L) - 1;
    while (j >= 0 && ++cursor[static_cast<std::size_t>(j)] == sites[static_cast<std::size_t>(j)].size()) {
      cursor[static_cast<std::size_t>(j)] = 0;
      --j;
    }
    if (j < 0) break;
  }
  if (dropped > 1e-14) {
    throw ArgumentError("product state has weight " + std::to_string(dropped) + " outside the N=" +
                        std::to_string(basis->sector().value_or(-1)) + " sector");
  }
  return StateVector::normalized(basis, std::move(amps));
}

}  // namespace

StateVector parse_product_state(std::string_view tokens, const BasisPtr& basis) {
  if (!basis) throw ArgumentError("product state needs a basis");
  if (tokens.size() != static_cast<std::size_t>(basis->sites())) {
    throw ParseError("product state '" + std::string(tokens) + "' has " + std::to_string(tokens.size()) +
                     " tokens, basis has L=" + std::to_string(basis->sites()));
  }
  const double h = 1.0 / std::sqrt(2.0);
  std::vector<std::vector<std::pair<int, cplx>>> sites;
  sites.reserve(tokens.size());
  for (std::size_t j = 0; j < tokens.size(); ++j) {
    const char t = tokens[j];
    if (t == '+') {
      sites.push_back({{0, h}, {1, h}});
    } else if (t >= '0' && t <= '9') {
      const int d = t - '0';
      if (d >= basis->levels()) {
        throw ParseError("level " + std::to_string(d) + " at position " + std::to_string(j + 1) + " needs K > " + std::to_string(d));
      }
      sites.push_back({{d, 1.0}});
    } else {
      throw ParseError(std::string("unknown product-state token '") + t + "' at position " + std::to_string(j + 1));
    }
  }
  return scatter_product(sites, basis);
}

StateVector product_state(std::span<const std::array<cplx, 2>> site_amplitudes, const BasisPtr& basis) {
  if (!basis) throw ArgumentError("product state needs a basis");
  if (site_amplitudes.size() != static_cast<std::size_t>(basis->sites())) {
    throw ArgumentError("expected " + std::to_string(basis->sites()) + " amplitude pairs, got " + std::to_string(site_amplitudes.size()));
  }
  std::vector<std::vector<std::pair<int, cplx>>> sites;
  for (const auto& pair : site_amplitudes) {
    const double n = std::sqrt(std::norm(pair[0]) + std::norm(pair[1]));
    if (!(n > 0.0)) throw ArgumentError("site amplitude pair is zero");
    std::vector<std::pair<int, cplx>> site;
    for (int level = 0; level < 2; ++level) {
      if (pair[static_cast<std::size_t>(level)] != cplx{}) site.emplace_back(level, pair[static_cast<std::size_t>(level)] / n);
    }
    sites.push_back(std::move(site));
  }
  return scatter_product(sites, basis);
}

bool embeddable(const FockBasis& from, const FockBasis& to) {
  return from.sites() == to.sites() && from.levels() <= to.levels() && (to.is_full() || from.sector() == to.sector());
}

StateVector embed_state(const StateVector& state, const BasisPtr& target) {
  const FockBasis& src = state.basis();
  if (!target) throw ArgumentError("embedding needs a target basis");
  if (src.sites() != target->sites()) {
    throw ArgumentError("cannot embed L=" + std::to_string(src.sites()) + " state into L=" + std::to_string(target->sites()) + " basis");
  }
  if (src.levels() > target->levels()) {
    throw ArgumentError("cannot embed K=" + std::to_string(src.levels()) + " state into K=" + std::to_string(target->levels()) + " basis");
  }
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(target->dim()));
  const auto& in = state.amplitudes();
  for (std::size_t i = 0; i < src.dim(); ++i) {
    const cplx a = in[static_cast<Eigen::Index>(i)];
    std::uint64_t code = 0;
    auto lv = src.levels_of(i);
    for (int j = 0; j < src.sites(); ++j) code += target->site_weight(j) * lv[static_cast<std::size_t>(j)];
    auto idx = target->find_code(code);
    if (!idx) {
      if (a != cplx{}) throw ArgumentError("state has weight outside the target sector");
      continue;
    }
    out[static_cast<Eigen::Index>(*idx)] = a;
  }
  // Exact copy: the norm is unchanged bit for bit up to summation order.
  return StateVector(target, std::move(out));
}

}  // namespace quenchlab
