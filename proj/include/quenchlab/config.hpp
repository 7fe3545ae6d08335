#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "quenchlab/propagator.hpp"

namespace quenchlab {

/// Flat `[section]` / `key = value` document. Keys are stored as
/// "section.key" in file order; `#` starts a comment. Unknown keys are
/// rejected with a ParseError naming the line and key.
class ConfigDocument {
 public:
  static ConfigDocument parse(std::string_view text);

  const std::string* find(const std::string& key) const;
  /// 1-based source line of `key`, 0 when set programmatically or absent.
  int line_of(const std::string& key) const;
  /// Replaces or appends a value; throws ValidationError for unknown keys.
  void set(const std::string& key, std::string value);
  void erase(const std::string& key);
  /// Canonical text, grouped by section in first-seen order.
  std::string to_text() const;

  struct Entry {
    std::string key;
    std::string value;
    int line = 0;
  };
  const std::vector<Entry>& entries() const { return entries_; }

 private:
  std::vector<Entry> entries_;
};

/// True for keys the document accepts ("section.key", or any dotted key
/// path under "sweep." whose parts are accepted keys).
bool is_known_key(const std::string& key);

enum class RunMode {
  kTimeReversal,  // forward segment, then its reverse
  kOneDirection,  // same state under K=2 / H0 and K / H0 + H_U, cross-fidelity
  kSingleRun,     // forward segment, observables only
  kSpectrum,      // sector spectrum of H0 + H_U, no propagation
};

std::string_view to_string(RunMode mode);

struct InitialState {
  std::string label;
  std::string tokens;                            // empty when amplitudes are given
  std::vector<std::array<cplx, 2>> amplitudes;   // per-site (c0, c1)
};

enum class DriveKind { kNone, kStaggeredOdd, kPerSite };

/// Drive parameters in MHz (f = omega / 2pi).
struct DriveConfig {
  DriveKind kind = DriveKind::kNone;
  double nu_mhz = 0.0;
  std::vector<double> eps_forward_mhz;             // per site
  std::optional<std::vector<double>> eps_backward_mhz;  // Floquet reversal amplitudes
  DrivePhase phase = DrivePhase::kRestart;
};

struct ObservableSelection {
  bool fidelity = true;
  bool populations = true;
  bool pauli = false;
  bool entropy = false;
  bool anharmonicity = false;
  int entropy_cut = 0;  // sites in the left block; 0 means L / 2
};

enum class OutputFormat { kCsv, kJson };

struct ExperimentConfig {
  std::string name;
  std::string note;
  std::uint64_t seed = 0;

  int sites = 0;
  int levels = 3;
  std::optional<int> particles;  // spectrum mode only

  std::vector<double> J_mhz;      // L - 1 bonds
  std::vector<double> U_mhz;      // L sites
  std::vector<double> Omega_mhz;  // L sites

  std::vector<InitialState> states;

  RunMode mode = RunMode::kTimeReversal;
  double duration_ns = 0.0;
  bool duration_assumed = false;  // came from an assumed_* key
  DriveConfig drive;
  Sampling sampling;

  ObservableSelection observables;

  std::string output_path;
  OutputFormat format = OutputFormat::kCsv;
  bool echo_curve = true;

  PropagationOptions numerics;

  ConfigDocument document;

  bool driven() const { return drive.kind != DriveKind::kNone; }
  /// Profiles in rad/ns.
  HamiltonianProfiles profiles() const;
  /// Forward segment for this config; the caller supplies the profiles.
  Segment forward_segment(std::shared_ptr<const HamiltonianProfiles> profiles) const;
  /// Drive override used by Floquet reversal, if configured.
  std::optional<DriveSpec> backward_drive() const;
};

/// Parses and validates. Throws ParseError (syntax, unknown key) or
/// ValidationError (semantic), both with the offending key in the message.
ExperimentConfig load_config(std::string_view text);
ExperimentConfig load_config_file(const std::filesystem::path& path);
ExperimentConfig build_config(const ConfigDocument& document);

/// Anharmonicities U_j / 2pi in MHz of the ten-qubit reference device
/// (config value "device").
const std::vector<double>& device_anharmonicity_mhz();
/// Per-bond couplings J_{j,j+1} / 2pi in MHz of the same device.
const std::vector<double>& device_coupling_mhz();

}  // namespace quenchlab
