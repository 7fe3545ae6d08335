#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "quenchlab/analysis.hpp"
#include "quenchlab/config.hpp"
#include "quenchlab/records.hpp"

namespace quenchlab {

/// Results for one initial state.
struct StateRun {
  std::string label;
  /// Protocol samples: forward then backward for time reversal.
  std::vector<ObservableRecord> records;
  /// Time reversal only: for every forward time t, the echo after reversing
  /// at t (in `fidelity`) and observables of the forward state at t.
  std::vector<ObservableRecord> echo;
};

struct ExperimentResult {
  std::string name;
  RunMode mode = RunMode::kTimeReversal;
  int sites = 0;
  std::vector<StateRun> runs;
  std::optional<SpectrumReport> spectrum;
};

/// Builds the initial state of `state` on `basis`.
StateVector make_initial_state(const InitialState& state, const BasisPtr& basis);

/// Observables of `psi` at time t; fidelity against `reference` when given.
ObservableRecord observe(double t, const StateVector& psi, const ObservableSelection& selection,
                         const StateVector* reference = nullptr);

/// Runs every initial state of a validated config. Numerics and resource
/// errors are rethrown with the config name and state label prefixed.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// Output files for `base` (e.g. out/run.csv): one state writes base and,
/// with an echo curve, out/run.echo.csv; several states insert the label
/// (out/run.psi1.csv). Returns the paths in write order.
std::vector<std::filesystem::path> output_paths(const ExperimentResult& result, const std::filesystem::path& base);
std::vector<std::filesystem::path> write_outputs(const ExperimentResult& result, const std::filesystem::path& base,
                                                 OutputFormat format);

}  // namespace quenchlab
