#include "quenchlab/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

#include "quenchlab/errors.hpp"

namespace quenchlab {

namespace {

std::vector<std::string> split_list(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    std::string item = s.substr(start, pos == std::string::npos ? std::string::npos : pos - start);
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    out.push_back(b == std::string::npos ? std::string() : item.substr(b, e - b + 1));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

SweepAxis make_axis(const std::string& keys, const std::string& values) {
  SweepAxis axis;
  for (const auto& k : split_list(keys, '+')) {
    if (k.empty() || k.rfind("sweep.", 0) == 0 || !is_known_key(k)) {
      throw ValidationError("sweep axis refers to unknown key '" + k + "'");
    }
    axis.keys.push_back(k);
  }
  for (const auto& v : split_list(values, ',')) {
    if (v.empty()) throw ValidationError("sweep axis '" + keys + "' has an empty value");
    axis.values.push_back(v);
  }
  return axis;
}

std::string sanitize(const std::string& s) {
  std::string out;
  for (char ch : s) {
    const bool keep = std::isalnum(static_cast<unsigned char>(ch)) || ch == '.' || ch == '-' || ch == '=';
    out += keep ? ch : '_';
  }
  return out;
}

// "profiles.J_mhz+profiles.Omega_mhz" -> "J_mhz+Omega_mhz"
std::string short_name(const std::vector<std::string>& keys) {
  std::string out;
  for (const auto& k : keys) out += (out.empty() ? "" : "+") + k.substr(k.find('.') + 1);
  return out;
}

}  // namespace

SweepAxis parse_axis(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos) throw ValidationError("sweep axis '" + text + "' is not key=v1,v2,...");
  return make_axis(text.substr(0, eq), text.substr(eq + 1));
}

SweepSpec sweep_from_config(const ExperimentConfig& config) {
  SweepSpec spec;
  spec.base = config.document;
  spec.format = config.format;
  if (!config.output_path.empty()) spec.output = config.output_path;
  for (const auto& e : config.document.entries()) {
    if (e.key.rfind("sweep.", 0) != 0) continue;
    const std::string rest = e.key.substr(6);
    if (rest == "parallelism") {
      const long n = std::strtol(e.value.c_str(), nullptr, 10);
      if (n < 1) throw ValidationError("sweep.parallelism must be >= 1");
      spec.parallelism = static_cast<int>(n);
    } else if (rest == "continue_on_error") {
      spec.continue_on_error = !(e.value == "false" || e.value == "no" || e.value == "off" || e.value == "0");
    } else {
      spec.axes.push_back(make_axis(rest, e.value));
    }
  }
  return spec;
}

std::size_t sweep_size(const SweepSpec& spec) {
  std::size_t n = 1;
  for (const auto& a : spec.axes) n *= a.values.size();
  return n;
}

ConfigDocument sweep_point_document(const SweepSpec& spec, std::size_t index,
                                    std::vector<std::pair<std::string, std::string>>* assignment) {
  ConfigDocument doc = spec.base;
  std::vector<std::string> sweep_keys;
  for (const auto& e : doc.entries()) {
    if (e.key.rfind("sweep.", 0) == 0) sweep_keys.push_back(e.key);
  }
  for (const auto& k : sweep_keys) doc.erase(k);

  std::size_t rest = index;
  std::vector<std::size_t> pick(spec.axes.size());
  for (std::size_t a = spec.axes.size(); a-- > 0;) {
    pick[a] = rest % spec.axes[a].values.size();
    rest /= spec.axes[a].values.size();
  }
  for (std::size_t a = 0; a < spec.axes.size(); ++a) {
    for (const auto& k : spec.axes[a].keys) {
      doc.set(k, spec.axes[a].values[pick[a]]);
      if (assignment) assignment->emplace_back(k, spec.axes[a].values[pick[a]]);
    }
  }
  return doc;
}

std::filesystem::path sweep_point_path(const std::filesystem::path& output, const std::string& tag) {
  if (tag.empty()) return output;
  return output.parent_path() / (output.stem().string() + "_" + tag + output.extension().string());
}

std::vector<SweepPoint> run_sweep(const SweepSpec& spec, const std::function<void(const SweepPoint&)>& on_done) {
  const std::size_t n = sweep_size(spec);
  std::vector<SweepPoint> points(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto& p = points[i];
    p.index = i;
    sweep_point_document(spec, i, &p.assignment);
    // Tag with one entry per axis; linked keys share a value.
    std::size_t k = 0;
    for (const auto& axis : spec.axes) {
      const std::string part = short_name(axis.keys) + "=" + p.assignment[k].second;
      p.tag += (p.tag.empty() ? "" : "_") + sanitize(part);
      k += axis.keys.size();
    }
  }

  std::mutex writer;
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::exception_ptr first_error;

  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      if (stop) return;
      SweepPoint& p = points[i];
      std::exception_ptr error;
      std::optional<ExperimentResult> result;
      try {
        const ExperimentConfig config = build_config(sweep_point_document(spec, i));
        result = run_experiment(config);
      } catch (const std::exception& e) {
        error = std::current_exception();
        p.error = e.what();
      }
      std::lock_guard lock(writer);
      if (result) {
        try {
          if (!spec.output.empty()) p.outputs = write_outputs(*result, sweep_point_path(spec.output, p.tag), spec.format);
          p.ok = true;
        } catch (const std::exception& e) {
          error = std::current_exception();
          p.error = e.what();
        }
        if (spec.keep_results) p.result = std::move(result);
      }
      p.exception = error;
      if (error && !spec.continue_on_error) {
        stop = true;
        if (!first_error) first_error = error;
      }
      if (on_done) on_done(p);
    }
  };

  const auto workers = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, spec.parallelism)));
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);
  return points;
}

}  // namespace quenchlab
