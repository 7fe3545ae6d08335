#include "quenchlab/propagator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <mutex>
#include <numbers>
#include <string>
#include <thread>
#include <vector>

#include "quenchlab/errors.hpp"

namespace quenchlab {

namespace {

constexpr double kTimeSlack = 1e-9;  // ns; sample times closer than this merge

void require_hermitian(const SparseOperator& H) {
  if (!H.hermitian()) throw ArgumentError("propagation needs a Hermitian operator");
}

void require_same_basis(const FockBasis& a, const FockBasis& b) {
  if (!(a == b)) throw ArgumentError("operator and state live on different bases");
}

// y = ws H x + wd diag(d) x. Real Hamiltonians (no complex entries) use a
// hand-rolled CSR loop over real values, which halves the memory traffic of
// the dominant sparse product.
class Kernel {
 public:
  explicit Kernel(const SparseOperator& H) {
    const auto& m = H.matrix();
    bool real = true;
    for (Eigen::Index k = 0; k < m.nonZeros() && real; ++k) real = m.valuePtr()[k].imag() == 0.0;
    if (!real) {
      complex_ = m;
      return;
    }
    real_ = true;
    rows_ = m.rows();
    outer_.assign(m.outerIndexPtr(), m.outerIndexPtr() + rows_ + 1);
    inner_.assign(m.innerIndexPtr(), m.innerIndexPtr() + m.nonZeros());
    values_.resize(static_cast<std::size_t>(m.nonZeros()));
    for (Eigen::Index k = 0; k < m.nonZeros(); ++k) values_[static_cast<std::size_t>(k)] = m.valuePtr()[k].real();
  }

  void apply(const Eigen::VectorXcd& x, Eigen::VectorXcd& y, double ws = 1.0, const Eigen::VectorXd* d = nullptr,
             double wd = 0.0) const {
    if (!real_) {
      y.noalias() = complex_ * x;
      if (ws != 1.0) y *= ws;
      if (d && wd != 0.0) y.array() += wd * d->array().cast<cplx>() * x.array();
      return;
    }
    y.resize(rows_);
    const double* v = values_.data();
    const int* col = inner_.data();
    for (Eigen::Index r = 0; r < rows_; ++r) {
      double re = 0.0, im = 0.0;
      for (int k = outer_[static_cast<std::size_t>(r)]; k < outer_[static_cast<std::size_t>(r) + 1]; ++k) {
        const cplx xc = x[col[k]];
        re += v[k] * xc.real();
        im += v[k] * xc.imag();
      }
      cplx acc(ws * re, ws * im);
      if (d) acc += (wd * (*d)[r]) * x[r];
      y[r] = acc;
    }
  }

 private:
  SparseOperator::Matrix complex_;
  bool real_ = false;
  Eigen::Index rows_ = 0;
  std::vector<int> outer_;
  std::vector<int> inner_;
  std::vector<double> values_;
};

// Substep integrator for H_static + cos(nu (t - origin)) diag(d).
class DrivenStepper {
 public:
  DrivenStepper(const Kernel& H_static, const Eigen::VectorXd& diagonal, double nu, double origin,
                DriveIntegrator integrator, KrylovExpm& krylov)
      : H_(H_static), d_(diagonal), nu_(nu), origin_(origin), integrator_(integrator), krylov_(krylov) {}

  // Advance psi from t0 to t1 with equal substeps no longer than dt_sub.
  void run(Eigen::VectorXcd& psi, double t0, double t1, double dt_sub) {
    const double span = t1 - t0;
    if (span == 0.0) return;
    const auto steps = static_cast<long>(std::max(1.0, std::ceil(std::abs(span) / dt_sub - 1e-9)));
    const double h = span / static_cast<double>(steps);
    for (long s = 0; s < steps; ++s) step(psi, t0 + static_cast<double>(s) * h, h);
  }

 private:
  double drive_at(double t) const { return std::cos(nu_ * (t - origin_)); }

  void exponentiate(Eigen::VectorXcd& psi, double drive_weight, double h) {
    LinearMap map = [&](const Eigen::VectorXcd& x, Eigen::VectorXcd& y) { H_.apply(x, y, 1.0, &d_, drive_weight); };
    krylov_.apply(map, psi, h);
  }

  void step(Eigen::VectorXcd& psi, double t, double h) {
    if (integrator_ == DriveIntegrator::kMidpoint) {
      exponentiate(psi, drive_at(t + 0.5 * h), h);
      return;
    }
    // Gauss-Legendre nodes; each exponential carries half of H_static, applied
    // as a half-length step of H_static + 2 (...) D.
    const double r = std::sqrt(3.0) / 6.0;
    const double f1 = drive_at(t + (0.5 - r) * h);
    const double f2 = drive_at(t + (0.5 + r) * h);
    const double a1 = (3.0 - 2.0 * std::sqrt(3.0)) / 12.0;
    const double a2 = (3.0 + 2.0 * std::sqrt(3.0)) / 12.0;
    exponentiate(psi, 2.0 * (a2 * f1 + a1 * f2), 0.5 * h);
    exponentiate(psi, 2.0 * (a1 * f1 + a2 * f2), 0.5 * h);
  }

  const Kernel& H_;
  const Eigen::VectorXd& d_;
  double nu_;
  double origin_;
  DriveIntegrator integrator_;
  KrylovExpm& krylov_;
};

void static_step(KrylovExpm& krylov, const Kernel& H, Eigen::VectorXcd& psi, double dt) {
  LinearMap map = [&](const Eigen::VectorXcd& x, Eigen::VectorXcd& y) { H.apply(x, y); };
  krylov.apply(map, psi, dt);
}

// Offsets in (0, duration] at which a segment is sampled; always ends at duration.
std::vector<double> segment_sample_offsets(const Segment& segment, double start, const Sampling& sampling) {
  std::vector<double> offsets;
  const double duration = segment.duration;
  if (sampling.kind == Sampling::Kind::kUniform) {
    if (!(sampling.dt > 0.0)) throw ArgumentError("uniform sampling needs dt > 0");
    // Global grid k * dt so samples line up across segments.
    auto k = static_cast<long>(std::floor(start / sampling.dt + kTimeSlack)) + 1;
    for (;; ++k) {
      const double off = static_cast<double>(k) * sampling.dt - start;
      if (off >= duration - kTimeSlack) break;
      if (off > kTimeSlack) offsets.push_back(off);
    }
  } else {
    if (!segment.drive || !segment.drive->active()) {
      throw ArgumentError("stroboscopic sampling needs a driven segment");
    }
    if (sampling.periods_per_sample < 1) throw ArgumentError("stroboscopic sampling needs periods_per_sample >= 1");
    const double step = segment.drive->period() * sampling.periods_per_sample;
    for (long n = 1;; ++n) {
      const double off = static_cast<double>(n) * step;
      if (off >= duration - kTimeSlack) break;
      offsets.push_back(off);
    }
  }
  offsets.push_back(duration);
  return offsets;
}

void validate_segment(const Segment& segment) {
  if (!(segment.duration >= 0.0)) throw ArgumentError("segment duration must be >= 0");
  if (!segment.profiles) throw ArgumentError("segment has no Hamiltonian profiles");
  if (std::abs(segment.coupling_sign) != 1 || std::abs(segment.transverse_sign) != 1) {
    throw ArgumentError("segment signs must be +1 or -1");
  }
  if (segment.drive && segment.drive->active() && !(segment.drive->nu > 0.0)) {
    throw ArgumentError("driven segment needs nu > 0");
  }
}

double drive_origin(const Segment& segment, double segment_start) {
  return segment.phase == DrivePhase::kRestart ? segment_start : segment.drive->phase_origin;
}

double substep_for(const Segment& segment, const DriveOptions& options) {
  if (options.substeps_per_period < 1) throw ArgumentError("substeps_per_period must be >= 1");
  return segment.drive->period() / options.substeps_per_period;
}

class OperatorCache {
 public:
  explicit OperatorCache(BasisPtr basis) : basis_(std::move(basis)) {}

  const ModelOperators& get(const std::shared_ptr<const HamiltonianProfiles>& profiles) {
    auto it = cache_.find(profiles.get());
    if (it != cache_.end()) return *it->second;
    auto ops = std::make_unique<ModelOperators>(basis_, profiles);
    const ModelOperators& ref = *ops;
    cache_.emplace(profiles.get(), std::move(ops));
    return ref;
  }

 private:
  BasisPtr basis_;
  std::map<const HamiltonianProfiles*, std::unique_ptr<ModelOperators>> cache_;
};

// Picks the substep so that refinement changes the segment end state by less
// than the gate. Returns the substep length to use.
double gated_substep(const Kernel& H, const Eigen::VectorXd& diagonal, const Segment& segment, double origin_local,
                     const Eigen::VectorXcd& psi, const PropagationOptions& options) {
  double h = substep_for(segment, options.drive);
  if (options.drive.convergence_gate <= 0.0) return h;
  KrylovExpm krylov(options.krylov);
  auto evolve = [&](double step) {
    Eigen::VectorXcd v = psi;
    DrivenStepper(H, diagonal, segment.drive->nu, origin_local, options.drive.integrator, krylov).run(v, 0.0, segment.duration, step);
    return v;
  };
  Eigen::VectorXcd coarse = evolve(h);
  for (int i = 0; i < options.drive.max_halvings; ++i) {
    Eigen::VectorXcd fine = evolve(0.5 * h);
    const double change = (fine - coarse).norm();
    h *= 0.5;
    if (change < options.drive.convergence_gate) return h;
    coarse = std::move(fine);
  }
  throw NumericsError("driven integrator did not converge within " + std::to_string(options.drive.max_halvings) + " halvings");
}

}  // namespace

// ---------------------------------------------------------------------------

double DriveSpec::period() const {
  if (!(nu > 0.0)) throw ArgumentError("drive period needs nu > 0");
  return 2.0 * std::numbers::pi / nu;
}

bool DriveSpec::active() const {
  return std::any_of(eps.begin(), eps.end(), [](double e) { return e != 0.0; });
}

std::vector<double> staggered_odd_amplitudes(int sites, double eps) {
  std::vector<double> out(static_cast<std::size_t>(std::max(sites, 0)), 0.0);
  double sign = 1.0;
  for (std::size_t j = 0; j < out.size(); j += 2) {
    out[j] = sign * eps;
    sign = -sign;
  }
  return out;
}

Segment reverse_of(const Segment& segment, const std::optional<DriveSpec>& drive_override) {
  Segment out = segment;
  out.transverse_sign = -segment.transverse_sign;
  if (drive_override) {
    out.drive = drive_override;
    return out;
  }
  out.coupling_sign = -segment.coupling_sign;
  if (out.drive) {
    for (double& e : out.drive->eps) e = -e;
  }
  return out;
}

double Protocol::total_duration() const {
  double t = 0.0;
  for (const auto& s : segments) t += s.duration;
  return t;
}

// ---------------------------------------------------------------------------

ModelOperators::ModelOperators(BasisPtr basis, std::shared_ptr<const HamiltonianProfiles> profiles)
    : basis_(std::move(basis)),
      profiles_(std::move(profiles)),
      hopping_(build_hopping(basis_, profiles_->coupling)),
      anharmonicity_(build_onsite_anharmonicity(basis_, profiles_->anharmonicity)) {
  if (profiles_->has_transverse()) transverse_ = build_transverse(basis_, profiles_->transverse);
}

SparseOperator ModelOperators::static_hamiltonian(int coupling_sign, int transverse_sign, bool include_anharmonicity) const {
  std::vector<std::pair<double, const SparseOperator*>> terms;
  terms.emplace_back(static_cast<double>(coupling_sign), &hopping_);
  if (include_anharmonicity) terms.emplace_back(1.0, &anharmonicity_);
  if (transverse_) terms.emplace_back(static_cast<double>(transverse_sign), &*transverse_);
  return linear_combination(terms);
}

SparseOperator ModelOperators::static_hamiltonian(const Segment& segment) const {
  return static_hamiltonian(segment.coupling_sign, segment.transverse_sign, segment.include_anharmonicity);
}

// ---------------------------------------------------------------------------

StateVector evolve_static(const SparseOperator& H, const StateVector& psi, double dt, const KrylovOptions& options) {
  require_hermitian(H);
  require_same_basis(H.basis(), psi.basis());
  Eigen::VectorXcd v = psi.amplitudes();
  KrylovExpm krylov(options);
  static_step(krylov, Kernel(H), v, dt);
  return StateVector(psi.basis_ptr(), std::move(v));
}

StateVector evolve_driven(const SparseOperator& H_static, const SparseOperator& D, const DriveSpec& drive,
                          const StateVector& psi, double t0, double t1, double dt_sub, DriveIntegrator integrator,
                          const KrylovOptions& options) {
  require_hermitian(H_static);
  require_same_basis(H_static.basis(), psi.basis());
  require_same_basis(D.basis(), psi.basis());
  if (!(dt_sub > 0.0)) throw ArgumentError("driven substep dt_sub must be > 0");
  if (!D.is_diagonal()) throw ArgumentError("drive operator must be diagonal");
  Eigen::VectorXcd v = psi.amplitudes();
  KrylovExpm krylov(options);
  if (!drive.active()) {
    static_step(krylov, Kernel(H_static), v, t1 - t0);
  } else {
    if (!(drive.nu > 0.0)) throw ArgumentError("driven evolution needs nu > 0");
    const Eigen::VectorXd diagonal = D.diagonal().real();
    const Kernel kernel(H_static);
    DrivenStepper(kernel, diagonal, drive.nu, drive.phase_origin, integrator, krylov).run(v, t0, t1, dt_sub);
  }
  return StateVector(psi.basis_ptr(), std::move(v));
}

namespace {

// A particle-number block of the state being propagated. Blocks evolve
// independently when every segment conserves N; `target` maps block indices
// back into the caller's basis (empty for the unsplit case).
struct Block {
  BasisPtr basis;
  Eigen::VectorXcd psi;
  std::vector<std::size_t> target;
  OperatorCache cache;
  KrylovExpm krylov;

  Block(BasisPtr b, Eigen::VectorXcd v, std::vector<std::size_t> t)
      : basis(b), psi(std::move(v)), target(std::move(t)), cache(std::move(b)) {}
};

bool conserves_number(const Segment& s) { return !s.profiles->has_transverse(); }

std::vector<Block> split_blocks(const Eigen::VectorXcd& psi, const BasisPtr& basis, bool split) {
  std::vector<Block> blocks;
  if (!split || !basis->is_full()) {
    blocks.emplace_back(basis, psi, std::vector<std::size_t>{});
    return blocks;
  }
  const int max_n = basis->sites() * (basis->levels() - 1);
  std::vector<std::vector<std::size_t>> members(static_cast<std::size_t>(max_n) + 1);
  std::vector<bool> occupied(static_cast<std::size_t>(max_n) + 1, false);
  for (std::size_t i = 0; i < basis->dim(); ++i) {
    int n = 0;
    for (Level l : basis->levels_of(i)) n += l;
    members[static_cast<std::size_t>(n)].push_back(i);
    if (psi[static_cast<Eigen::Index>(i)] != cplx{}) occupied[static_cast<std::size_t>(n)] = true;
  }
  for (int n = 0; n <= max_n; ++n) {
    if (!occupied[static_cast<std::size_t>(n)]) continue;
    auto sector = build_basis(basis->sites(), basis->levels(), n);
    const auto& idx = members[static_cast<std::size_t>(n)];
    // Both orders are lexicographic in the occupation code, so they align.
    Eigen::VectorXcd v(static_cast<Eigen::Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) v[static_cast<Eigen::Index>(k)] = psi[static_cast<Eigen::Index>(idx[k])];
    blocks.emplace_back(sector, std::move(v), idx);
  }
  return blocks;
}

StateVector assemble(const std::vector<Block>& blocks, const BasisPtr& basis) {
  if (blocks.size() == 1 && blocks.front().target.empty()) return StateVector(basis, blocks.front().psi);
  Eigen::VectorXcd full = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis->dim()));
  for (const auto& b : blocks) {
    for (std::size_t k = 0; k < b.target.size(); ++k) full[static_cast<Eigen::Index>(b.target[k])] = b.psi[static_cast<Eigen::Index>(k)];
  }
  // Each block is unitary on its own, so the norm only carries round-off.
  return StateVector::normalized(basis, std::move(full));
}

// Operators of one segment on one block.
struct BlockSegment {
  Kernel H;
  Eigen::VectorXd drive_diagonal;

  BlockSegment(Block& block, const Segment& segment, bool driven)
      : H(block.cache.get(segment.profiles).static_hamiltonian(segment)) {
    if (driven) drive_diagonal = build_number_weighted(block.basis, segment.drive->eps).diagonal().real();
  }
};

// Runs task(k) for k < count on up to `threads` threads. Tasks touch disjoint
// blocks, so results do not depend on the thread count.
void for_each_block(std::size_t count, int threads, const std::function<void(std::size_t)>& task) {
  const auto workers = std::min<std::size_t>(count, static_cast<std::size_t>(std::max(1, threads)));
  if (workers <= 1) {
    for (std::size_t k = 0; k < count; ++k) task(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t k = next++; k < count; k = next++) {
        try {
          task(k);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

bool splittable(std::initializer_list<const std::vector<Segment>*> lists, const PropagationOptions& options) {
  if (!options.split_sectors) return false;
  for (const auto* list : lists) {
    for (const auto& s : *list) {
      if (!conserves_number(s)) return false;
    }
  }
  return true;
}

}  // namespace

Trajectory run_protocol(const Protocol& protocol, const StateVector& psi0, const Sampler& sampler,
                        const PropagationOptions& options) {
  for (const auto& s : protocol.segments) validate_segment(s);

  const BasisPtr& basis = psi0.basis_ptr();
  auto blocks = split_blocks(psi0.amplitudes(), basis, splittable({&protocol.segments}, options));
  for (auto& b : blocks) b.krylov = KrylovExpm(options.krylov);

  Trajectory traj;
  auto sample = [&](double t) {
    traj.times.push_back(t);
    if (!protocol.record_states && !sampler) return;
    const StateVector psi = assemble(blocks, basis);
    if (protocol.record_states) traj.states.push_back(psi);
    if (sampler) traj.records.push_back(sampler(t, psi));
  };
  sample(0.0);

  double start = 0.0;
  for (const auto& segment : protocol.segments) {
    if (segment.duration <= kTimeSlack) {
      start += segment.duration;
      continue;
    }
    const bool driven = segment.drive && segment.drive->active();
    const auto offsets = segment_sample_offsets(segment, start, protocol.sampling);
    std::vector<BlockSegment> ops;
    ops.reserve(blocks.size());
    for (auto& b : blocks) ops.emplace_back(b, segment, driven);

    if (!driven) {
      double local = 0.0;
      for (double off : offsets) {
        for_each_block(blocks.size(), options.threads,
                       [&](std::size_t k) { static_step(blocks[k].krylov, ops[k].H, blocks[k].psi, off - local); });
        local = off;
        sample(start + off);
      }
    } else {
      // Local time runs from 0 at the segment start.
      const double origin = drive_origin(segment, start) - start;
      double h = substep_for(segment, options.drive);
      for (std::size_t k = 0; k < blocks.size(); ++k) {
        h = std::min(h, gated_substep(ops[k].H, ops[k].drive_diagonal, segment, origin, blocks[k].psi, options));
      }
      std::vector<DrivenStepper> steppers;
      steppers.reserve(blocks.size());
      for (std::size_t k = 0; k < blocks.size(); ++k) {
        steppers.emplace_back(ops[k].H, ops[k].drive_diagonal, segment.drive->nu, origin, options.drive.integrator,
                              blocks[k].krylov);
      }
      double local = 0.0;
      for (double off : offsets) {
        for_each_block(blocks.size(), options.threads, [&](std::size_t k) { steppers[k].run(blocks[k].psi, local, off, h); });
        local = off;
        sample(start + off);
      }
    }
    start += segment.duration;
  }
  return traj;
}

EchoCurve run_echo_curve(const Segment& forward, const Segment& backward, const StateVector& psi0,
                         const Sampling& sampling, const Sampler& sampler, const PropagationOptions& options) {
  validate_segment(forward);
  validate_segment(backward);
  const bool f_driven = forward.drive && forward.drive->active();
  const bool b_driven = backward.drive && backward.drive->active();
  if ((f_driven || b_driven) && sampling.kind != Sampling::Kind::kStroboscopic) {
    throw ArgumentError("echo curves of driven segments need stroboscopic sampling");
  }
  if (f_driven && b_driven && std::abs(forward.drive->nu - backward.drive->nu) > 1e-12 * forward.drive->nu) {
    throw ArgumentError("forward and backward drives must share the drive frequency");
  }
  // Sample offsets come from whichever segment is driven.
  Segment schedule = forward;
  if (!f_driven && b_driven) schedule.drive = backward.drive;
  const auto offsets = segment_sample_offsets(schedule, 0.0, sampling);

  const BasisPtr& basis = psi0.basis_ptr();
  const std::vector<Segment> both{forward, backward};
  const bool split = splittable({&both}, options);
  auto fblocks = split_blocks(psi0.amplitudes(), basis, split);
  auto bblocks = split_blocks(psi0.amplitudes(), basis, split);
  for (auto& b : fblocks) b.krylov = KrylovExpm(options.krylov);
  for (auto& b : bblocks) b.krylov = KrylovExpm(options.krylov);

  std::vector<BlockSegment> fops, bops;
  fops.reserve(fblocks.size());
  bops.reserve(bblocks.size());
  for (auto& b : fblocks) fops.emplace_back(b, forward, f_driven);
  for (auto& b : bblocks) bops.emplace_back(b, backward, b_driven);
  const double origin_f = f_driven ? drive_origin(forward, 0.0) : 0.0;
  const double origin_b = b_driven ? drive_origin(backward, 0.0) : 0.0;

  std::vector<DrivenStepper> fsteps, bsteps;
  for (std::size_t k = 0; f_driven && k < fblocks.size(); ++k) {
    fsteps.emplace_back(fops[k].H, fops[k].drive_diagonal, forward.drive->nu, origin_f, options.drive.integrator,
                        fblocks[k].krylov);
  }
  for (std::size_t k = 0; b_driven && k < bblocks.size(); ++k) {
    bsteps.emplace_back(bops[k].H, bops[k].drive_diagonal, backward.drive->nu, origin_b, options.drive.integrator,
                        bblocks[k].krylov);
  }

  EchoCurve curve;
  auto sample = [&](double t) {
    // Blocks share the sector layout, so the overlap is a sum over blocks.
    cplx overlap{};
    for (std::size_t k = 0; k < fblocks.size(); ++k) overlap += bblocks[k].psi.dot(fblocks[k].psi);
    curve.times.push_back(t);
    curve.echo.push_back(std::min(1.0, std::norm(overlap)));
    if (sampler) curve.records.push_back(sampler(t, assemble(fblocks, basis)));
  };
  sample(0.0);

  double local = 0.0;
  for (double off : offsets) {
    const double delta = off - local;
    if (b_driven) {
      const double periods = delta / backward.drive->period();
      if (std::abs(periods - std::round(periods)) > 1e-6) {
        throw ArgumentError("echo curves with a driven backward segment need whole drive periods between samples");
      }
    }
    // Tasks [0, n) advance forward blocks, [n, 2n) backward blocks.
    const std::size_t n = fblocks.size();
    for_each_block(2 * n, options.threads, [&](std::size_t task) {
      const std::size_t k = task % n;
      if (task < n) {
        if (f_driven) {
          fsteps[k].run(fblocks[k].psi, local, off, substep_for(forward, options.drive));
        } else {
          static_step(fblocks[k].krylov, fops[k].H, fblocks[k].psi, delta);
        }
      } else if (b_driven) {
        // U_b(t + delta)^dagger = U_b(delta)^dagger U_b(t)^dagger for whole
        // periods; U_b(delta)^dagger runs the local clock backwards.
        bsteps[k].run(bblocks[k].psi, delta, 0.0, substep_for(backward, options.drive));
      } else {
        static_step(bblocks[k].krylov, bops[k].H, bblocks[k].psi, -delta);
      }
    });
    local = off;
    sample(off);
  }
  return curve;
}

}  // namespace quenchlab
