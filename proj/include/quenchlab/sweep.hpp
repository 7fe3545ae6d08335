#pragma once

#include <exception>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "quenchlab/config.hpp"
#include "quenchlab/experiment.hpp"

namespace quenchlab {

/// One sweep dimension. Linked keys ("profiles.J_mhz+profiles.Omega_mhz")
/// all take the same value at each point.
struct SweepAxis {
  std::vector<std::string> keys;
  std::vector<std::string> values;
};

/// Parses "key[+key...]=v1,v2,...". Throws ValidationError for unknown keys
/// or an empty value list.
SweepAxis parse_axis(const std::string& text);

struct SweepSpec {
  ConfigDocument base;  // sweep.* entries are ignored
  std::vector<SweepAxis> axes;
  int parallelism = 1;
  bool continue_on_error = true;
  /// Output base path; empty keeps results in memory only.
  std::filesystem::path output;
  OutputFormat format = OutputFormat::kCsv;
  bool keep_results = false;
};

/// Axes, parallelism and error policy from the [sweep] section of `config`.
SweepSpec sweep_from_config(const ExperimentConfig& config);

/// Number of points of the cartesian product (1 for no axes).
std::size_t sweep_size(const SweepSpec& spec);

struct SweepPoint {
  std::size_t index = 0;
  std::vector<std::pair<std::string, std::string>> assignment;  // key, value
  std::string tag;  // e.g. "J_mhz=4"; empty without axes
  bool ok = false;
  std::string error;
  std::exception_ptr exception;  // set with `error`
  std::vector<std::filesystem::path> outputs;
  std::optional<ExperimentResult> result;  // when keep_results
};

/// Configuration document of point `index` (row-major over the axes, last axis fastest).
ConfigDocument sweep_point_document(const SweepSpec& spec, std::size_t index,
                                    std::vector<std::pair<std::string, std::string>>* assignment = nullptr);

/// Output base path of a point: <stem>_<tag><ext> next to `output`.
std::filesystem::path sweep_point_path(const std::filesystem::path& output, const std::string& tag);

/// Runs every point on at most `parallelism` threads. Points are returned in
/// index order. A failing point is recorded and, unless continue_on_error is
/// false, the rest still run; with continue_on_error false the first error is
/// rethrown after running workers finish. `on_done` is called under the
/// writer lock as each point completes.
std::vector<SweepPoint> run_sweep(const SweepSpec& spec,
                                  const std::function<void(const SweepPoint&)>& on_done = {});

}  // namespace quenchlab
