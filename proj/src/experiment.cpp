#include "quenchlab/experiment.hpp"

#include <memory>

#include "quenchlab/errors.hpp"
#include "quenchlab/records_io.hpp"

namespace quenchlab {

namespace {

template <class Error>
[[noreturn]] void rethrow_with(const std::string& context, const Error& e) {
  throw Error(context + ": " + e.what());
}

// One-direction reference: the same state and schedule in the two-level model
// without H_U.
std::vector<StateVector> reference_states(const ExperimentConfig& c, const InitialState& s,
                                          const std::shared_ptr<const HamiltonianProfiles>& profiles) {
  for (char ch : s.tokens) {
    if (ch != '0' && ch != '1' && ch != '+') {
      throw ValidationError("state '" + s.label + "': one-direction runs need a two-level initial state");
    }
  }
  const BasisPtr basis = build_basis(c.sites, 2);
  Segment seg = c.forward_segment(profiles);
  seg.include_anharmonicity = false;
  Protocol proto{{seg}, c.sampling, true};
  return run_protocol(proto, make_initial_state(s, basis), {}, c.numerics).states;
}

StateRun run_state(const ExperimentConfig& c, const InitialState& s, const BasisPtr& basis,
                   const std::shared_ptr<const HamiltonianProfiles>& profiles) {
  StateRun run;
  run.label = s.label;
  const StateVector psi0 = make_initial_state(s, basis);
  const Segment fwd = c.forward_segment(profiles);
  ObservableSelection without_fidelity = c.observables;
  without_fidelity.fidelity = false;

  switch (c.mode) {
    case RunMode::kTimeReversal: {
      const Segment bwd = reverse_of(fwd, c.backward_drive());
      Protocol proto{{fwd, bwd}, c.sampling, false};
      auto sampler = [&](double t, const StateVector& psi) {
        return observe(t, psi, c.observables, c.observables.fidelity ? &psi0 : nullptr);
      };
      run.records = run_protocol(proto, psi0, sampler, c.numerics).records;
      if (c.echo_curve) {
        auto forward_obs = [&](double t, const StateVector& psi) { return observe(t, psi, without_fidelity); };
        EchoCurve curve = run_echo_curve(fwd, bwd, psi0, c.sampling, forward_obs, c.numerics);
        run.echo = std::move(curve.records);
        for (std::size_t i = 0; i < run.echo.size(); ++i) run.echo[i].fidelity = curve.echo[i];
      }
      break;
    }
    case RunMode::kOneDirection: {
      const auto refs = reference_states(c, s, profiles);
      std::size_t index = 0;
      auto sampler = [&](double t, const StateVector& psi) {
        if (index >= refs.size()) throw NumericsError("sample schedules of the two runs differ");
        const StateVector& ref = refs[index++];
        ObservableRecord r = observe(t, psi, without_fidelity);
        if (c.observables.fidelity) r.fidelity = fidelity(ref, psi);
        return r;
      };
      Protocol proto{{fwd}, c.sampling, false};
      run.records = run_protocol(proto, psi0, sampler, c.numerics).records;
      break;
    }
    case RunMode::kSingleRun: {
      Protocol proto{{fwd}, c.sampling, false};
      auto sampler = [&](double t, const StateVector& psi) { return observe(t, psi, without_fidelity); };
      run.records = run_protocol(proto, psi0, sampler, c.numerics).records;
      break;
    }
    case RunMode::kSpectrum:
      break;
  }
  return run;
}

}  // namespace

StateVector make_initial_state(const InitialState& state, const BasisPtr& basis) {
  if (!state.amplitudes.empty()) return product_state(state.amplitudes, basis);
  return parse_product_state(state.tokens, basis);
}

ObservableRecord observe(double t, const StateVector& psi, const ObservableSelection& selection,
                         const StateVector* reference) {
  ObservableRecord r;
  r.time = t;
  if (reference) r.fidelity = fidelity(*reference, psi);
  if (selection.populations) r.populations = level_populations(psi);
  if (selection.pauli) r.pauli = pauli_expectations(psi);
  if (selection.anharmonicity) r.anharmonicity = anharmonicity_expectation(psi);
  if (selection.entropy) r.entropy = half_chain_entropy(psi, selection.entropy_cut);
  return r;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  ExperimentResult result;
  result.name = config.name;
  result.mode = config.mode;
  result.sites = config.sites;
  const std::string context = "config '" + config.name + "'";

  if (config.mode == RunMode::kSpectrum) {
    try {
      result.spectrum = sector_spectrum(config.sites, *config.particles, config.levels, config.profiles());
    } catch (const ResourceError& e) {
      rethrow_with(context, e);
    } catch (const NumericsError& e) {
      rethrow_with(context, e);
    }
    return result;
  }

  const BasisPtr basis = build_basis(config.sites, config.levels);
  const auto profiles = std::make_shared<const HamiltonianProfiles>(config.profiles());
  for (const auto& s : config.states) {
    const std::string where = context + ", state '" + s.label + "'";
    try {
      result.runs.push_back(run_state(config, s, basis, profiles));
    } catch (const NumericsError& e) {
      rethrow_with(where, e);
    } catch (const ResourceError& e) {
      rethrow_with(where, e);
    } catch (const ValidationError& e) {
      rethrow_with(where, e);
    }
  }
  return result;
}

std::vector<std::filesystem::path> output_paths(const ExperimentResult& result, const std::filesystem::path& base) {
  const auto dir = base.parent_path();
  const std::string stem = base.stem().string();
  const std::string ext = base.extension().string();
  auto name = [&](const std::string& middle) { return dir / (stem + middle + ext); };
  std::vector<std::filesystem::path> out;
  if (result.spectrum) {
    out.push_back(base);
    return out;
  }
  const bool many = result.runs.size() > 1;
  for (const auto& run : result.runs) {
    const std::string label = many ? "." + run.label : std::string();
    out.push_back(name(label));
    if (!run.echo.empty()) out.push_back(name(label + ".echo"));
  }
  return out;
}

std::vector<std::filesystem::path> write_outputs(const ExperimentResult& result, const std::filesystem::path& base,
                                                 OutputFormat format) {
  const auto paths = output_paths(result, base);
  if (result.spectrum) {
    write_table(spectrum_table(*result.spectrum), paths.front(), format);
    return paths;
  }
  std::size_t k = 0;
  for (const auto& run : result.runs) {
    write_records(run.records, paths[k++], format, result.sites);
    if (!run.echo.empty()) write_records(run.echo, paths[k++], format, result.sites);
  }
  return paths;
}

}  // namespace quenchlab
