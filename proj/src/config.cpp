#include "quenchlab/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "quenchlab/errors.hpp"
#include "quenchlab/units.hpp"

namespace quenchlab {

namespace {

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys{
      "meta.name",
      "meta.note",
      "meta.seed",
      "lattice.sites",
      "lattice.levels",
      "lattice.particles",
      "profiles.J_mhz",
      "profiles.U_mhz",
      "profiles.Omega_mhz",
      "state.initial",
      "state.labels",
      "state.amplitudes",
      "protocol.mode",
      "protocol.duration_ns",
      "protocol.assumed_duration_ns",
      "protocol.duration_periods",
      "protocol.assumed_duration_periods",
      "protocol.drive",
      "protocol.drive_nu_mhz",
      "protocol.drive_eps_mhz",
      "protocol.drive_eps_backward_mhz",
      "protocol.drive_phase",
      "sampling.dt_ns",
      "sampling.stroboscopic",
      "sampling.periods_per_sample",
      "observables.fidelity",
      "observables.populations",
      "observables.pauli",
      "observables.entropy",
      "observables.anharmonicity",
      "observables.entropy_cut",
      "output.path",
      "output.format",
      "output.echo_curve",
      "numerics.krylov_dim",
      "numerics.krylov_tol",
      "numerics.integrator",
      "numerics.substeps_per_period",
      "numerics.convergence_gate",
      "numerics.max_halvings",
      "numerics.threads",
      "numerics.split_sectors",
      "sweep.parallelism",
      "sweep.continue_on_error",
  };
  return keys;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<std::string> words(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

// Reads typed values from a document and reports failures with key and line.
class Reader {
 public:
  explicit Reader(const ConfigDocument& doc) : doc_(doc) {}

  bool has(const std::string& key) const { return doc_.find(key) != nullptr; }

  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    const int line = doc_.line_of(key);
    throw ValidationError(key + (line > 0 ? " (line " + std::to_string(line) + ")" : std::string()) + ": " + what);
  }

  std::string text(const std::string& key, const std::string& fallback = {}) const {
    const std::string* v = doc_.find(key);
    return v ? *v : fallback;
  }

  double number(const std::string& key, const std::string& word) const {
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(word.c_str(), &end);
    if (word.empty() || end != word.c_str() + word.size() || errno == ERANGE || !std::isfinite(v)) {
      fail(key, "'" + word + "' is not a number");
    }
    return v;
  }

  double number(const std::string& key, double fallback) const {
    return has(key) ? number(key, *doc_.find(key)) : fallback;
  }

  std::vector<double> numbers(const std::string& key) const {
    std::vector<double> out;
    for (const auto& w : words(text(key))) out.push_back(number(key, w));
    return out;
  }

  long integer(const std::string& key, long fallback) const {
    if (!has(key)) return fallback;
    const double v = number(key, *doc_.find(key));
    if (v != std::floor(v) || std::abs(v) > 1e15) fail(key, "expected an integer");
    return static_cast<long>(v);
  }

  bool boolean(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    std::string v = *doc_.find(key);
    std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
    if (v == "false" || v == "no" || v == "off" || v == "0") return false;
    fail(key, "expected true or false, got '" + v + "'");
  }

  template <class Enum>
  Enum choice(const std::string& key, const std::map<std::string, Enum>& options, Enum fallback) const {
    if (!has(key)) return fallback;
    const std::string& v = *doc_.find(key);
    auto it = options.find(v);
    if (it == options.end()) {
      std::string valid;
      for (const auto& [name, _] : options) valid += (valid.empty() ? "" : ", ") + name;
      fail(key, "'" + v + "' is not one of: " + valid);
    }
    return it->second;
  }

 private:
  const ConfigDocument& doc_;
};

// Per-bond or per-site list: "device", a single value (uniform) or n values.
std::vector<double> profile_list(const Reader& r, const std::string& key, std::size_t n, const std::string& fallback,
                                 const std::vector<double>& device) {
  const std::string v = r.has(key) ? r.text(key) : fallback;
  if (v == "device") {
    if (device.size() != n) {
      r.fail(key, "the device profile has " + std::to_string(device.size()) + " entries, this chain needs " +
                      std::to_string(n));
    }
    return device;
  }
  std::vector<double> out;
  for (const auto& w : words(v)) out.push_back(r.number(key, w));
  if (out.size() == 1) out.assign(n, out.front());
  if (out.size() != n) {
    r.fail(key, "expected 1 or " + std::to_string(n) + " values, got " + std::to_string(out.size()));
  }
  for (double x : out) {
    if (x < 0.0) r.fail(key, "values must be >= 0");
  }
  return out;
}

// "a", "bi", "a+bi", "a-bi".
cplx parse_complex(const Reader& r, const std::string& key, const std::string& word) {
  if (word.empty()) r.fail(key, "empty amplitude");
  if (word.back() != 'i') return {r.number(key, word), 0.0};
  const std::string body = word.substr(0, word.size() - 1);
  // Split at the last sign that is not the leading one or part of an exponent.
  for (std::size_t k = body.size(); k-- > 1;) {
    if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      const std::string im = body.substr(k);
      return {r.number(key, body.substr(0, k)), im == "+" || im == "-" ? (im == "-" ? -1.0 : 1.0) : r.number(key, im)};
    }
  }
  if (body.empty() || body == "+") return {0.0, 1.0};
  if (body == "-") return {0.0, -1.0};
  return {0.0, r.number(key, body)};
}

std::string expand_state_name(const std::string& token, int sites) {
  if (token == "neel") {
    std::string s;
    for (int j = 0; j < sites; ++j) s += (j % 2 == 0) ? '0' : '1';
    return s;
  }
  if (token == "plus") return std::string(static_cast<std::size_t>(sites), '+');
  return token;
}

std::vector<double> drive_amplitudes(const Reader& r, const std::string& key, DriveKind kind, int sites) {
  const auto v = r.numbers(key);
  if (kind == DriveKind::kStaggeredOdd) {
    if (v.size() != 1) r.fail(key, "staggered-odd drive takes one amplitude");
    return staggered_odd_amplitudes(sites, v.front());
  }
  if (v.size() != static_cast<std::size_t>(sites)) {
    r.fail(key, "per-site drive needs " + std::to_string(sites) + " amplitudes, got " + std::to_string(v.size()));
  }
  return v;
}

std::vector<double> to_rad(const std::vector<double>& mhz) {
  std::vector<double> out(mhz.size());
  std::transform(mhz.begin(), mhz.end(), out.begin(), units::mhz_to_rad_per_ns);
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

bool is_known_key(const std::string& key) {
  if (known_keys().count(key)) return true;
  if (key.rfind("sweep.", 0) != 0) return false;
  // Sweep axes: "sweep.<key>[+<key>...]" over ordinary, non-sweep keys.
  for (const auto& part : split(key.substr(6), '+')) {
    if (part.rfind("sweep.", 0) == 0 || !known_keys().count(part)) return false;
  }
  return true;
}

ConfigDocument ConfigDocument::parse(std::string_view text) {
  ConfigDocument doc;
  std::string section;
  int line_no = 0;
  std::istringstream in{std::string(text)};
  for (std::string raw; std::getline(in, raw);) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(std::string_view(raw).substr(0, hash));
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(line_no);
    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError(where + ": unterminated section header '" + line + "'");
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      if (section.empty()) throw ParseError(where + ": empty section name");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(where + ": expected 'key = value', got '" + line + "'");
    const std::string name = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (name.empty()) throw ParseError(where + ": missing key");
    if (section.empty()) throw ParseError(where + ": key '" + name + "' outside any [section]");
    const std::string key = section + "." + name;
    if (!is_known_key(key)) throw ParseError(where + ": unknown key '" + key + "'");
    if (doc.find(key)) throw ParseError(where + ": duplicate key '" + key + "'");
    doc.entries_.push_back({key, value, line_no});
  }
  return doc;
}

const std::string* ConfigDocument::find(const std::string& key) const {
  for (const auto& e : entries_) {
    if (e.key == key) return &e.value;
  }
  return nullptr;
}

int ConfigDocument::line_of(const std::string& key) const {
  for (const auto& e : entries_) {
    if (e.key == key) return e.line;
  }
  return 0;
}

void ConfigDocument::set(const std::string& key, std::string value) {
  if (!is_known_key(key)) throw ValidationError("unknown key '" + key + "'");
  for (auto& e : entries_) {
    if (e.key == key) {
      e.value = std::move(value);
      e.line = 0;
      return;
    }
  }
  entries_.push_back({key, std::move(value), 0});
}

void ConfigDocument::erase(const std::string& key) {
  std::erase_if(entries_, [&](const Entry& e) { return e.key == key; });
}

std::string ConfigDocument::to_text() const {
  std::vector<std::string> sections;
  auto section_of = [](const std::string& key) { return key.substr(0, key.find('.')); };
  for (const auto& e : entries_) {
    const auto s = section_of(e.key);
    if (std::find(sections.begin(), sections.end(), s) == sections.end()) sections.push_back(s);
  }
  std::ostringstream out;
  for (std::size_t i = 0; i < sections.size(); ++i) {
    if (i) out << '\n';
    out << '[' << sections[i] << "]\n";
    for (const auto& e : entries_) {
      if (section_of(e.key) == sections[i]) out << e.key.substr(sections[i].size() + 1) << " = " << e.value << '\n';
    }
  }
  return out.str();
}

std::string_view to_string(RunMode mode) {
  switch (mode) {
    case RunMode::kTimeReversal:
      return "time-reversal";
    case RunMode::kOneDirection:
      return "one-direction";
    case RunMode::kSingleRun:
      return "single-run";
    case RunMode::kSpectrum:
      return "spectrum";
  }
  return "?";
}

const std::vector<double>& device_anharmonicity_mhz() {
  static const std::vector<double> U{212, 264, 210, 268, 212, 268, 214, 264, 214, 264};
  return U;
}

const std::vector<double>& device_coupling_mhz() {
  static const std::vector<double> J{10.72, 10.73, 10.99, 11.05, 10.88, 10.48, 10.86, 10.79, 10.78};
  return J;
}

HamiltonianProfiles ExperimentConfig::profiles() const {
  return {CouplingProfile{to_rad(J_mhz)}, AnharmonicityProfile{to_rad(U_mhz)}, TransverseProfile{to_rad(Omega_mhz)}};
}

Segment ExperimentConfig::forward_segment(std::shared_ptr<const HamiltonianProfiles> p) const {
  Segment s;
  s.duration = duration_ns;
  s.profiles = std::move(p);
  if (driven()) {
    s.drive = DriveSpec{to_rad(drive.eps_forward_mhz), units::mhz_to_rad_per_ns(drive.nu_mhz), 0.0};
    s.phase = drive.phase;
  }
  return s;
}

std::optional<DriveSpec> ExperimentConfig::backward_drive() const {
  if (!driven() || !drive.eps_backward_mhz) return std::nullopt;
  return DriveSpec{to_rad(*drive.eps_backward_mhz), units::mhz_to_rad_per_ns(drive.nu_mhz), 0.0};
}

ExperimentConfig build_config(const ConfigDocument& doc) {
  const Reader r(doc);
  ExperimentConfig c;
  c.document = doc;
  c.name = r.text("meta.name", "experiment");
  c.note = r.text("meta.note");
  {
    const long seed = r.integer("meta.seed", 0);
    if (seed < 0) r.fail("meta.seed", "must be >= 0");
    c.seed = static_cast<std::uint64_t>(seed);
  }

  c.mode = r.choice<RunMode>("protocol.mode",
                             {{"time-reversal", RunMode::kTimeReversal},
                              {"one-direction", RunMode::kOneDirection},
                              {"one-direction-compare", RunMode::kOneDirection},
                              {"single-run", RunMode::kSingleRun},
                              {"spectrum", RunMode::kSpectrum}},
                             RunMode::kTimeReversal);

  // Lattice.
  if (!r.has("lattice.sites")) r.fail("lattice.sites", "required");
  const long L = r.integer("lattice.sites", 0);
  if (L < 1 || L > 40) r.fail("lattice.sites", "must be in [1, 40]");
  c.sites = static_cast<int>(L);
  const long K = r.integer("lattice.levels", 3);
  if (K < 2 || K > 255) r.fail("lattice.levels", "must be in [2, 255]");
  c.levels = static_cast<int>(K);
  if (r.has("lattice.particles")) {
    if (c.mode != RunMode::kSpectrum) r.fail("lattice.particles", "only used in spectrum mode");
    const long N = r.integer("lattice.particles", 0);
    if (N < 0 || N > L * (K - 1)) r.fail("lattice.particles", "must be in [0, L (K - 1)]");
    c.particles = static_cast<int>(N);
  }

  // Profiles.
  if (!r.has("profiles.J_mhz")) r.fail("profiles.J_mhz", "required");
  c.J_mhz = profile_list(r, "profiles.J_mhz", static_cast<std::size_t>(L - 1), "", device_coupling_mhz());
  c.U_mhz = profile_list(r, "profiles.U_mhz", static_cast<std::size_t>(L), "device", device_anharmonicity_mhz());
  c.Omega_mhz = profile_list(r, "profiles.Omega_mhz", static_cast<std::size_t>(L), "0", {});

  // Initial states.
  if (c.mode == RunMode::kSpectrum) {
    if (!c.particles) r.fail("lattice.particles", "required in spectrum mode");
    if (std::any_of(c.Omega_mhz.begin(), c.Omega_mhz.end(), [](double x) { return x != 0.0; })) {
      r.fail("profiles.Omega_mhz", "spectrum mode needs a particle-conserving Hamiltonian (Omega = 0)");
    }
  } else {
    const bool tokens = r.has("state.initial");
    const bool amps = r.has("state.amplitudes");
    if (tokens == amps) r.fail("state.initial", "give exactly one of state.initial and state.amplitudes");
    const auto labels = words(r.text("state.labels"));
    if (tokens) {
      const auto list = words(r.text("state.initial"));
      if (list.empty()) r.fail("state.initial", "empty");
      if (!labels.empty() && labels.size() != list.size()) {
        r.fail("state.labels", "expected " + std::to_string(list.size()) + " labels");
      }
      for (std::size_t i = 0; i < list.size(); ++i) {
        InitialState s;
        s.tokens = expand_state_name(list[i], c.sites);
        s.label = labels.empty() ? s.tokens : labels[i];
        if (s.tokens.size() != static_cast<std::size_t>(L)) {
          r.fail("state.initial", "state '" + list[i] + "' has " + std::to_string(s.tokens.size()) +
                                      " sites, the lattice has " + std::to_string(L));
        }
        for (char ch : s.tokens) {
          const bool digit = ch >= '0' && ch <= '9';
          if (!(ch == '+' || (digit && ch - '0' < K))) {
            r.fail("state.initial", std::string("token '") + ch + "' in '" + s.tokens + "' is not a level below K or '+'");
          }
        }
        c.states.push_back(std::move(s));
      }
    } else {
      InitialState s;
      s.label = labels.empty() ? "custom" : labels.front();
      if (labels.size() > 1) r.fail("state.labels", "amplitude states take one label");
      for (const auto& site : split(r.text("state.amplitudes"), ';')) {
        const auto pair = split(site, ',');
        if (pair.size() != 2) r.fail("state.amplitudes", "each site needs 'c0, c1', got '" + site + "'");
        const cplx c0 = parse_complex(r, "state.amplitudes", pair[0]);
        const cplx c1 = parse_complex(r, "state.amplitudes", pair[1]);
        if (std::norm(c0) + std::norm(c1) == 0.0) r.fail("state.amplitudes", "site with zero amplitudes");
        s.amplitudes.push_back({c0, c1});
      }
      if (s.amplitudes.size() != static_cast<std::size_t>(L)) {
        r.fail("state.amplitudes", "expected " + std::to_string(L) + " sites, got " + std::to_string(s.amplitudes.size()));
      }
      c.states.push_back(std::move(s));
    }
  }

  // Drive.
  c.drive.kind = r.choice<DriveKind>(
      "protocol.drive",
      {{"none", DriveKind::kNone}, {"staggered-odd", DriveKind::kStaggeredOdd}, {"per-site", DriveKind::kPerSite}},
      DriveKind::kNone);
  if (c.driven()) {
    if (c.mode == RunMode::kSpectrum) r.fail("protocol.drive", "spectrum mode takes no drive");
    if (!r.has("protocol.drive_nu_mhz")) r.fail("protocol.drive_nu_mhz", "required with a drive");
    c.drive.nu_mhz = r.number("protocol.drive_nu_mhz", 0.0);
    if (!(c.drive.nu_mhz > 0.0)) r.fail("protocol.drive_nu_mhz", "must be > 0");
    if (!r.has("protocol.drive_eps_mhz")) r.fail("protocol.drive_eps_mhz", "required with a drive");
    c.drive.eps_forward_mhz = drive_amplitudes(r, "protocol.drive_eps_mhz", c.drive.kind, c.sites);
    if (r.has("protocol.drive_eps_backward_mhz")) {
      if (c.mode != RunMode::kTimeReversal) r.fail("protocol.drive_eps_backward_mhz", "only used in time-reversal mode");
      c.drive.eps_backward_mhz = drive_amplitudes(r, "protocol.drive_eps_backward_mhz", c.drive.kind, c.sites);
    }
    c.drive.phase = r.choice<DrivePhase>("protocol.drive_phase",
                                         {{"restart", DrivePhase::kRestart}, {"continuous", DrivePhase::kContinuous}},
                                         DrivePhase::kRestart);
  } else {
    for (const char* k : {"protocol.drive_nu_mhz", "protocol.drive_eps_mhz", "protocol.drive_eps_backward_mhz",
                          "protocol.drive_phase"}) {
      if (r.has(k)) r.fail(k, "set without a drive (protocol.drive = none)");
    }
  }

  // Duration.
  if (c.mode != RunMode::kSpectrum) {
    const char* keys[] = {"protocol.duration_ns", "protocol.assumed_duration_ns", "protocol.duration_periods",
                          "protocol.assumed_duration_periods"};
    int given = 0;
    for (const char* k : keys) given += r.has(k) ? 1 : 0;
    if (given != 1) r.fail("protocol.duration_ns", "give exactly one of duration_ns, assumed_duration_ns, "
                                                   "duration_periods, assumed_duration_periods");
    if (r.has(keys[0]) || r.has(keys[1])) {
      const std::string k = r.has(keys[0]) ? keys[0] : keys[1];
      c.duration_ns = r.number(k, 0.0);
      c.duration_assumed = k == keys[1];
      if (c.duration_ns < 0.0) r.fail(k, "must be >= 0");
    } else {
      const std::string k = r.has(keys[2]) ? keys[2] : keys[3];
      if (!c.driven()) r.fail(k, "periods need a drive");
      const long n = r.integer(k, 0);
      if (n < 0) r.fail(k, "must be >= 0");
      c.duration_ns = static_cast<double>(n) * units::period_ns(c.drive.nu_mhz);
      c.duration_assumed = k == keys[3];
    }
  }

  // Sampling.
  const bool strobe = r.boolean("sampling.stroboscopic", c.driven() && !r.has("sampling.dt_ns"));
  if (strobe) {
    if (!c.driven()) r.fail("sampling.stroboscopic", "stroboscopic sampling needs a drive");
    if (r.has("sampling.dt_ns")) r.fail("sampling.dt_ns", "conflicts with stroboscopic sampling");
    const long n = r.integer("sampling.periods_per_sample", 1);
    if (n < 1) r.fail("sampling.periods_per_sample", "must be >= 1");
    c.sampling = Sampling::stroboscopic(static_cast<int>(n));
  } else {
    if (r.has("sampling.periods_per_sample")) r.fail("sampling.periods_per_sample", "only used with stroboscopic sampling");
    const double dt = r.number("sampling.dt_ns", 1.0);
    if (!(dt > 0.0)) r.fail("sampling.dt_ns", "must be > 0");
    c.sampling = Sampling::uniform(dt);
  }

  // Observables.
  auto& o = c.observables;
  o.fidelity = r.boolean("observables.fidelity", c.mode != RunMode::kSingleRun);
  if (o.fidelity && c.mode == RunMode::kSingleRun) r.fail("observables.fidelity", "single runs have no reference state");
  o.populations = r.boolean("observables.populations", true);
  o.pauli = r.boolean("observables.pauli", false);
  o.entropy = r.boolean("observables.entropy", false);
  o.anharmonicity = r.boolean("observables.anharmonicity", false);
  const long cut = r.integer("observables.entropy_cut", 0);
  if (cut != 0 && (cut < 1 || cut >= L)) r.fail("observables.entropy_cut", "must be in [1, L - 1]");
  if (o.entropy && L < 2) r.fail("observables.entropy", "needs at least two sites");
  o.entropy_cut = cut == 0 ? static_cast<int>(L / 2) : static_cast<int>(cut);

  // Output.
  c.output_path = r.text("output.path");
  c.format = r.choice<OutputFormat>("output.format", {{"csv", OutputFormat::kCsv}, {"json", OutputFormat::kJson}},
                                    OutputFormat::kCsv);
  c.echo_curve = r.boolean("output.echo_curve", c.mode == RunMode::kTimeReversal);
  if (c.echo_curve && c.mode != RunMode::kTimeReversal) r.fail("output.echo_curve", "only used in time-reversal mode");
  if (c.echo_curve && c.driven() && !strobe) r.fail("output.echo_curve", "echo curves of driven runs need stroboscopic sampling");

  // Numerics.
  auto& n = c.numerics;
  const long m = r.integer("numerics.krylov_dim", n.krylov.max_dim);
  if (m < 2 || m > 200) r.fail("numerics.krylov_dim", "must be in [2, 200]");
  n.krylov.max_dim = static_cast<int>(m);
  n.krylov.tol = r.number("numerics.krylov_tol", n.krylov.tol);
  if (!(n.krylov.tol > 0.0)) r.fail("numerics.krylov_tol", "must be > 0");
  n.drive.integrator = r.choice<DriveIntegrator>(
      "numerics.integrator", {{"cf4", DriveIntegrator::kCommutatorFree4}, {"midpoint", DriveIntegrator::kMidpoint}},
      n.drive.integrator);
  const long sub = r.integer("numerics.substeps_per_period", n.drive.substeps_per_period);
  if (sub < 1) r.fail("numerics.substeps_per_period", "must be >= 1");
  n.drive.substeps_per_period = static_cast<int>(sub);
  n.drive.convergence_gate = r.number("numerics.convergence_gate", n.drive.convergence_gate);
  if (n.drive.convergence_gate < 0.0) r.fail("numerics.convergence_gate", "must be >= 0");
  const long halvings = r.integer("numerics.max_halvings", n.drive.max_halvings);
  if (halvings < 0 || halvings > 20) r.fail("numerics.max_halvings", "must be in [0, 20]");
  n.drive.max_halvings = static_cast<int>(halvings);
  const long threads = r.integer("numerics.threads", n.threads);
  if (threads < 1 || threads > 1024) r.fail("numerics.threads", "must be in [1, 1024]");
  n.threads = static_cast<int>(threads);
  n.split_sectors = r.boolean("numerics.split_sectors", n.split_sectors);

  return c;
}

ExperimentConfig load_config(std::string_view text) { return build_config(ConfigDocument::parse(text)); }

ExperimentConfig load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot read config " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return load_config(buf.str());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

}  // namespace quenchlab
