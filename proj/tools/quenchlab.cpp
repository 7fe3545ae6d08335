// quenchlab command-line tool: run configs, presets, sweeps and sector spectra.

#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "quenchlab/errors.hpp"
#include "quenchlab/experiment.hpp"
#include "quenchlab/presets.hpp"
#include "quenchlab/records_io.hpp"
#include "quenchlab/sweep.hpp"
#include "quenchlab/units.hpp"

namespace fs = std::filesystem;
using namespace quenchlab;

namespace {

enum ExitCode { kOk = 0, kIo = 1, kInvalid = 2, kNumerics = 3 };

int exit_code_of(const std::exception_ptr& error) {
  try {
    std::rethrow_exception(error);
  } catch (const ParseError&) {
    return kInvalid;
  } catch (const ValidationError&) {
    return kInvalid;
  } catch (const ArgumentError&) {
    return kInvalid;
  } catch (const LookupError&) {
    return kInvalid;
  } catch (const UsageError&) {
    return kInvalid;
  } catch (const NumericsError&) {
    return kNumerics;
  } catch (const ResourceError&) {
    return kNumerics;
  } catch (...) {
    return kIo;
  }
}

struct OutputOptions {
  std::string path;
  std::string format;  // empty: from the config, then from the extension
};

OutputFormat parse_format(const std::string& name) {
  if (name == "csv") return OutputFormat::kCsv;
  if (name == "json") return OutputFormat::kJson;
  throw ArgumentError("unknown format '" + name + "' (csv or json)");
}

// -o, then output.path, then $QUENCHLAB_OUTPUT_DIR/<name>.<ext>, then ./<name>.<ext>.
fs::path resolve_output(const ExperimentConfig& config, const OutputOptions& out, OutputFormat format) {
  if (!out.path.empty()) return out.path;
  if (!config.output_path.empty()) return config.output_path;
  const char* dir = std::getenv("QUENCHLAB_OUTPUT_DIR");
  const fs::path base = dir && *dir ? fs::path(dir) : fs::path(".");
  return base / (config.name + extension_of(format));
}

OutputFormat resolve_format(const ExperimentConfig& config, const OutputOptions& out) {
  if (!out.format.empty()) return parse_format(out.format);
  if (!out.path.empty()) {
    const auto ext = fs::path(out.path).extension().string();
    if (ext == ".json") return OutputFormat::kJson;
    if (ext == ".csv") return OutputFormat::kCsv;
  }
  return config.format;
}

void print_note(const ExperimentConfig& config) {
  if (!config.note.empty()) std::cerr << config.name << ": " << config.note << '\n';
}

void print_summary(const ExperimentResult& result) {
  for (const auto& run : result.runs) {
    std::cerr << "  " << run.label << ": " << run.records.size() << " samples";
    if (!run.records.empty() && run.records.back().fidelity) {
      std::cerr << ", final fidelity " << format_number(*run.records.back().fidelity);
    }
    std::cerr << '\n';
  }
}

int run_points(SweepSpec spec) {
  const std::size_t n = sweep_size(spec);
  std::cout << "sweep: " << n << (n == 1 ? " point" : " points") << std::endl;
  int code = kOk;
  std::exception_ptr first;
  const auto points = run_sweep(spec, [&](const SweepPoint& p) {
    std::cout << "[" << p.index + 1 << "/" << n << "] " << (p.tag.empty() ? "base" : p.tag) << ": ";
    if (p.ok) {
      std::cout << "ok";
      for (const auto& path : p.outputs) std::cout << ' ' << path.string();
    } else {
      std::cout << "failed: " << p.error;
    }
    std::cout << std::endl;
  });
  for (const auto& p : points) {
    if (!p.ok && !first) first = p.exception;
  }
  if (first) code = exit_code_of(first);
  return code;
}

int run_config(const ExperimentConfig& config, const OutputOptions& out) {
  print_note(config);
  const OutputFormat format = resolve_format(config, out);
  SweepSpec spec = sweep_from_config(config);
  spec.format = format;
  spec.output = resolve_output(config, out, format);
  if (!spec.axes.empty()) return run_points(std::move(spec));

  const ExperimentResult result = run_experiment(config);
  print_summary(result);
  for (const auto& path : write_outputs(result, spec.output, format)) std::cout << path.string() << '\n';
  return kOk;
}

void print_spectrum(const SpectrumReport& report) {
  std::cout << "states: " << report.eigenvalues.size() << '\n';
  for (const auto& b : report.bands) {
    std::cout << "band A=" << b.anharmonicity << ": " << b.count << " states, center "
              << format_number(units::rad_per_ns_to_mhz(b.center)) << " MHz, range ["
              << format_number(units::rad_per_ns_to_mhz(b.lowest)) << ", "
              << format_number(units::rad_per_ns_to_mhz(b.highest)) << "] MHz\n";
  }
  std::size_t ambiguous = 0;
  for (bool a : report.ambiguous) ambiguous += a ? 1 : 0;
  if (ambiguous) std::cout << "ambiguous band labels: " << ambiguous << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multilevel Bose-Hubbard quench and time-reversal simulator"};
  app.require_subcommand(1);

  std::string config_path;
  OutputOptions out;

  auto* run = app.add_subcommand("run", "Run an experiment config (its [sweep] axes, if any, are expanded)");
  run->add_option("-c,--config", config_path, "Config file")->required();
  run->add_option("-o,--output", out.path, "Output base path");
  run->add_option("--format", out.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  std::string preset_name;
  bool preset_print = false;
  bool preset_run = false;
  auto* pre = app.add_subcommand("preset", "Print or run a built-in preset; without a name, list presets");
  pre->add_option("name", preset_name, "Preset name");
  auto* print_flag = pre->add_flag("--print", preset_print, "Print the preset config (default)");
  pre->add_flag("--run", preset_run, "Run the preset")->excludes(print_flag);
  pre->add_option("-o,--output", out.path, "Output base path");
  pre->add_option("--format", out.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  std::vector<std::string> axes;
  int jobs = 1;
  bool stop_on_error = false;
  auto* sweep = app.add_subcommand("sweep", "Run a config over the cartesian product of parameter axes");
  sweep->add_option("-c,--config", config_path, "Base config file")->required();
  sweep->add_option("--axis", axes, "key[+key]=v1,v2,... (repeatable)");
  sweep->add_option("-j,--jobs", jobs, "Points run in parallel")->check(CLI::PositiveNumber);
  sweep->add_flag("--stop-on-error", stop_on_error, "Abort the sweep at the first failing point");
  sweep->add_option("-o,--output", out.path, "Output base path");
  sweep->add_option("--format", out.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  int L = 0, N = 0, K = 3;
  std::string J_mhz, U_mhz;
  auto* spec = app.add_subcommand("spectrum", "Spectrum of H0 + H_U in one particle-number sector");
  spec->add_option("-L,--sites", L, "Sites")->required();
  spec->add_option("-N,--particles", N, "Particles")->required();
  spec->add_option("-K,--levels", K, "Levels per site");
  spec->add_option("--J", J_mhz, "Coupling J/2pi in MHz (one value or one per bond)")->required();
  spec->add_option("--U", U_mhz, "Anharmonicity U/2pi in MHz (one value, one per site, or 'device')")->required();
  spec->add_option("-o,--output", out.path, "Write the eigenvalue table here instead of stdout");
  spec->add_option("--format", out.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInvalid;
  }

  try {
    if (*run) return run_config(load_config_file(config_path), out);

    if (*pre) {
      if (preset_name.empty()) {
        for (const auto& name : preset_names()) std::cout << name << '\n';
        return kOk;
      }
      const std::string& text = preset_text(preset_name);
      if (!preset_run) {
        std::cout << text;
        return kOk;
      }
      return run_config(load_config(text), out);
    }

    if (*sweep) {
      const ExperimentConfig config = load_config_file(config_path);
      print_note(config);
      SweepSpec s = sweep_from_config(config);
      for (const auto& a : axes) s.axes.push_back(parse_axis(a));
      s.parallelism = jobs;
      if (stop_on_error) s.continue_on_error = false;
      s.format = resolve_format(config, out);
      s.output = resolve_output(config, out, s.format);
      return run_points(std::move(s));
    }

    if (*spec) {
      std::ostringstream text;
      text << "[meta]\nname = spectrum\n[lattice]\nsites = " << L << "\nlevels = " << K << "\nparticles = " << N
           << "\n[profiles]\nJ_mhz = " << J_mhz << "\nU_mhz = " << U_mhz << "\n[protocol]\nmode = spectrum\n";
      const ExperimentConfig config = load_config(text.str());
      const ExperimentResult result = run_experiment(config);
      print_spectrum(*result.spectrum);
      const RecordTable table = spectrum_table(*result.spectrum);
      if (out.path.empty()) {
        std::cout << format_table(table, out.format.empty() ? OutputFormat::kCsv : parse_format(out.format));
      } else {
        write_table(table, out.path, resolve_format(config, out));
        std::cout << out.path << '\n';
      }
      return kOk;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_of(std::current_exception());
  }
  return kOk;
}
