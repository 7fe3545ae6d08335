#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "quenchlab/fockspace.hpp"
#include "quenchlab/operators.hpp"

namespace quenchlab {

/// |<a|b>|^2. States over different bases are compared after embedding the
/// lower-K (or sector) state into the other basis.
double fidelity(const StateVector& a, const StateVector& b);

/// Probability that `site` (0-based) is in `level`.
double level_population(const StateVector& psi, int site, int level);

/// All P_k^j at once: result[j][k].
std::vector<std::vector<double>> level_populations(const StateVector& psi);

enum class PauliAxis { kX, kY, kZ };

/// Expectation of a Pauli matrix acting on levels {0, 1} of `site` and zero on
/// higher levels (projected, not renormalized). sigma_z = P_0 - P_1.
double pauli_expectation(const StateVector& psi, int site, PauliAxis axis);

/// {<sx>, <sy>, <sz>} per site.
std::vector<std::array<double, 3>> pauli_expectations(const StateVector& psi);

/// <sum_j n_j (n_j - 1)>.
double anharmonicity_expectation(const StateVector& psi);

/// Von Neumann entropy (nats) of sites [0, cut) from the singular values of
/// the amplitudes reshaped to K^cut x K^(L-cut). Sector states are placed in
/// the full space first.
double half_chain_entropy(const StateVector& psi, int cut);

/// Page estimate ln m - m / (2n) for subsystem dimensions m = K^cut <= n = K^(L-cut).
double page_entropy(int sites, int cut, int levels);

struct Band {
  int anharmonicity = 0;  // attained value of sum_j n_j (n_j - 1)
  std::size_t count = 0;
  double center = 0.0;    // mean eigenvalue, rad/ns
  double lowest = 0.0;
  double highest = 0.0;
};

struct SpectrumReport {
  std::vector<double> eigenvalues;     // ascending, rad/ns
  std::vector<double> anharmonicity;   // <A> per eigenstate
  std::vector<int> band;               // nearest attainable A per eigenstate
  std::vector<bool> ambiguous;         // A roughly equidistant from two labels
  std::vector<Band> bands;             // ascending in label
};

/// Full spectrum of H_0 + H_U in the N-particle sector with K levels per site
/// and per-eigenstate <A>. Throws ResourceError above `dense_cap` states and
/// UsageError when the profiles include a transverse field.
SpectrumReport sector_spectrum(int sites, int particles, int levels, const HamiltonianProfiles& profiles,
                               std::size_t dense_cap = 10000);

struct FrequencyPeak {
  bool found = false;
  double frequency_mhz = 0.0;
  double resolution_mhz = 0.0;  // DFT bin width
  double magnitude = 0.0;
};

/// Largest nonzero-frequency local maximum of the Hann-windowed DFT of a
/// uniformly sampled real series, refined by quadratic interpolation.
/// Throws ArgumentError for fewer than 16 samples or dt <= 0.
FrequencyPeak dominant_frequency(std::span<const double> series, double dt_ns);

}  // namespace quenchlab
