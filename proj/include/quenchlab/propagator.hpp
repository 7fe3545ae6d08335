#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "quenchlab/fockspace.hpp"
#include "quenchlab/krylov.hpp"
#include "quenchlab/operators.hpp"
#include "quenchlab/records.hpp"

namespace quenchlab {

/// Sinusoidal frequency modulation omega_j(t) = eps_j cos(nu (t - phase_origin)).
/// eps and nu in rad/ns, phase_origin in ns.
struct DriveSpec {
  std::vector<double> eps;
  double nu = 0.0;
  double phase_origin = 0.0;

  double period() const;  // 2 pi / nu
  bool active() const;    // any eps_j != 0
};

/// Staggered drive on odd sites (1-based): +eps, -eps, +eps, ... on sites
/// 1, 3, 5, ..., zero on even sites.
std::vector<double> staggered_odd_amplitudes(int sites, double eps);

enum class DrivePhase {
  kRestart,     // phase origin at each segment start
  kContinuous,  // phase origin taken from DriveSpec::phase_origin
};

enum class DriveIntegrator {
  kMidpoint,         // exp(-i h H(t + h/2)), second order
  kCommutatorFree4,  // two-exponential Gauss-Legendre scheme, fourth order
};

struct DriveOptions {
  DriveIntegrator integrator = DriveIntegrator::kCommutatorFree4;
  /// Substeps per drive period; the substep is period / substeps_per_period.
  int substeps_per_period = 128;
  /// Halve the substep until two successive resolutions differ by less than
  /// this over a segment (0 disables the gate).
  double convergence_gate = 0.0;
  int max_halvings = 6;
};

/// One piece of a protocol. H = s_J H_0 + [H_U] + s_Omega T + cos(...) sum_j eps_j n_j.
/// H_U never changes sign.
struct Segment {
  double duration = 0.0;  // ns
  int coupling_sign = +1;
  int transverse_sign = +1;
  bool include_anharmonicity = true;
  std::optional<DriveSpec> drive;
  DrivePhase phase = DrivePhase::kRestart;
  std::shared_ptr<const HamiltonianProfiles> profiles;
};

/// Sign-flip time reversal: negates s_J, s_Omega and drive amplitudes. With
/// a drive override (Floquet reversal) the drive is replaced instead and s_J
/// is kept.
Segment reverse_of(const Segment& segment, const std::optional<DriveSpec>& drive_override = std::nullopt);

struct Sampling {
  enum class Kind { kUniform, kStroboscopic };
  Kind kind = Kind::kUniform;
  double dt = 1.0;          // ns, uniform sampling
  int periods_per_sample = 1;  // stroboscopic sampling

  static Sampling uniform(double dt) { return {Kind::kUniform, dt, 1}; }
  static Sampling stroboscopic(int periods = 1) { return {Kind::kStroboscopic, 0.0, periods}; }
};

struct Protocol {
  std::vector<Segment> segments;
  Sampling sampling;
  bool record_states = false;

  double total_duration() const;
};

/// Sample times; states only when the protocol asked for them.
struct Trajectory {
  std::vector<double> times;
  std::vector<StateVector> states;
  std::vector<ObservableRecord> records;
};

using Sampler = std::function<ObservableRecord(double time, const StateVector& state)>;

struct PropagationOptions {
  KrylovOptions krylov;
  DriveOptions drive;
  /// Propagate particle-number sectors separately when no segment has a
  /// transverse field. Results are identical; large full-space runs are faster.
  bool split_sectors = true;
  /// Worker threads for independent sector blocks (1 = sequential).
  int threads = 1;
};

/// Operators for one (basis, profiles) pair, assembled once and shared read-only.
class ModelOperators {
 public:
  ModelOperators(BasisPtr basis, std::shared_ptr<const HamiltonianProfiles> profiles);

  const BasisPtr& basis() const { return basis_; }
  const SparseOperator& hopping() const { return hopping_; }
  const SparseOperator& anharmonicity() const { return anharmonicity_; }
  const std::optional<SparseOperator>& transverse() const { return transverse_; }

  /// s_J H_0 + [H_U] + s_Omega T.
  SparseOperator static_hamiltonian(int coupling_sign, int transverse_sign, bool include_anharmonicity) const;
  SparseOperator static_hamiltonian(const Segment& segment) const;

 private:
  BasisPtr basis_;
  std::shared_ptr<const HamiltonianProfiles> profiles_;
  SparseOperator hopping_;
  SparseOperator anharmonicity_;
  std::optional<SparseOperator> transverse_;
};

/// exp(-i H dt) psi. Throws ArgumentError for a non-Hermitian H or a basis mismatch.
StateVector evolve_static(const SparseOperator& H, const StateVector& psi, double dt, const KrylovOptions& options = {});

/// Time-ordered evolution under H(t) = H_static + cos(nu (t - phase_origin)) D
/// from t0 to t1 (t1 < t0 applies the inverse propagator) with substeps of at
/// most dt_sub. D must be diagonal.
StateVector evolve_driven(const SparseOperator& H_static, const SparseOperator& D, const DriveSpec& drive,
                          const StateVector& psi, double t0, double t1, double dt_sub,
                          DriveIntegrator integrator = DriveIntegrator::kMidpoint, const KrylovOptions& options = {});

/// Runs segments in order, sampling on the protocol schedule; segment
/// boundaries are always sampled. `sampler`, when given, fills records.
Trajectory run_protocol(const Protocol& protocol, const StateVector& psi0, const Sampler& sampler = {},
                        const PropagationOptions& options = {});

/// Loschmidt echo L(t) = |<psi0| U_b(t) U_f(t) |psi0>|^2 for every sample
/// time t of a forward segment, evaluated as the overlap of U_f(t) psi0 with
/// U_b(t)^dagger psi0. Driven segments need stroboscopic sampling.
struct EchoCurve {
  std::vector<double> times;
  std::vector<double> echo;
  std::vector<ObservableRecord> records;  // observables of the forward state
};

EchoCurve run_echo_curve(const Segment& forward, const Segment& backward, const StateVector& psi0,
                         const Sampling& sampling, const Sampler& sampler = {},
                         const PropagationOptions& options = {});

}  // namespace quenchlab
