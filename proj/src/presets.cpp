#include "quenchlab/presets.hpp"

#include <map>

#include "quenchlab/errors.hpp"

namespace quenchlab {

namespace {

const std::string kStates = R"(
[state]
initial = 0001001000 0000110000 0001111000 ++++++++++ 0101010101
labels = psi1 psi2 psi3 psi4 psi5
)";

const std::map<std::string, std::string, std::less<>>& presets() {
  static const std::map<std::string, std::string, std::less<>> table{
      {"fig2", R"([meta]
name = fig2
note = Floquet time reversal on the device anharmonicities with uniform J. Forward and backward drives share nu; the forward duration is assumed.

[lattice]
sites = 10
levels = 3

[profiles]
J_mhz = 10.8
U_mhz = device
)" + kStates + R"(
[protocol]
mode = time-reversal
drive = staggered-odd
drive_nu_mhz = 120
drive_eps_mhz = 213.6
drive_eps_backward_mhz = 400
assumed_duration_periods = 24

[sampling]
stroboscopic = true
)"},
      {"fig3-main", R"([meta]
name = fig3-main
note = Sign-flip time reversal without drive at J = 16 MHz. The forward duration is assumed.

[lattice]
sites = 10
levels = 3

[profiles]
J_mhz = 16
U_mhz = device

[state]
initial = 0001001000 0000110000 0001111000 ++++++++++
labels = psi1 psi2 psi3 psi4

[protocol]
mode = time-reversal
assumed_duration_ns = 100

[sampling]
dt_ns = 1
)"},
      {"fig3-inset", R"([meta]
name = fig3-inset
note = Sign-flip time reversal without drive at J = 4 MHz. The forward duration is assumed; at this value the end-of-protocol P1 of the initially excited sites is close to 0.994, 0.992 and 0.974.

[lattice]
sites = 10
levels = 3

[profiles]
J_mhz = 4
U_mhz = device

[state]
initial = 0001001000 0000110000 0001111000
labels = psi1 psi2 psi3

[protocol]
mode = time-reversal
assumed_duration_ns = 250

[sampling]
dt_ns = 1
)"},
      {"fig4", R"([meta]
name = fig4
note = Sign-flip time reversal of the all-plus state for several J. The forward duration is assumed.

[lattice]
sites = 10
levels = 3

[profiles]
J_mhz = 16
U_mhz = device

[state]
initial = ++++++++++
labels = psi4

[protocol]
mode = time-reversal
assumed_duration_ns = 200

[sampling]
dt_ns = 1

[sweep]
profiles.J_mhz = 4,6,8,16
)"},
      {"fig4-inset", R"([meta]
name = fig4-inset
note = Sign-flip time reversal of the Neel state at J = 4 and 8 MHz. The forward duration is assumed.

[lattice]
sites = 10
levels = 3

[profiles]
J_mhz = 4
U_mhz = device

[state]
initial = 0101010101
labels = psi5

[protocol]
mode = time-reversal
assumed_duration_ns = 200

[sampling]
dt_ns = 1

[sweep]
profiles.J_mhz = 4,8
)"},
      {"fig5", R"([meta]
name = fig5
note = Time reversal with a transverse field by flipping the signs of J and Omega, with J = Omega. The forward duration is assumed.

[lattice]
sites = 10
levels = 3

[profiles]
J_mhz = 16
U_mhz = device
Omega_mhz = 16

[state]
initial = ++++++++++ 0101010101
labels = psi4 psi5

[protocol]
mode = time-reversal
assumed_duration_ns = 150

[sampling]
dt_ns = 1

[observables]
entropy = true

[sweep]
profiles.J_mhz+profiles.Omega_mhz = 4,16
)"},
      {"fig6a", R"([meta]
name = fig6a
note = One-direction comparison of the two-level and three-level chains at J = 4 MHz. The duration is assumed.

[lattice]
sites = 10
levels = 3

[profiles]
J_mhz = 4
U_mhz = device
)" + kStates + R"(
[protocol]
mode = one-direction
assumed_duration_ns = 200

[sampling]
dt_ns = 1
)"},
      {"fig6b", R"([meta]
name = fig6b
note = One-direction comparison of the two-level and three-level chains at J = 16 MHz. The duration is assumed.

[lattice]
sites = 10
levels = 3

[profiles]
J_mhz = 16
U_mhz = device
)" + kStates + R"(
[protocol]
mode = one-direction
assumed_duration_ns = 200

[sampling]
dt_ns = 1
)"},
      {"fig7", R"([meta]
name = fig7
note = One-direction comparison with a transverse field, J = Omega. The duration is assumed.

[lattice]
sites = 10
levels = 3

[profiles]
J_mhz = 16
U_mhz = device
Omega_mhz = 16

[state]
initial = ++++++++++ 0101010101
labels = psi4 psi5

[protocol]
mode = one-direction
assumed_duration_ns = 200

[sampling]
dt_ns = 1

[sweep]
profiles.J_mhz+profiles.Omega_mhz = 4,16
)"},
      {"fig8a", R"([meta]
name = fig8a
note = Spectrum of H0 + H_U in the five-particle sector with six levels per site, U / J = 30.

[lattice]
sites = 10
levels = 6
particles = 5

[profiles]
J_mhz = 8
U_mhz = 240

[protocol]
mode = spectrum
)"},
      {"fig8c", R"([meta]
name = fig8c
note = Single forward run of the Neel state with uniform U = 240 MHz, J = 8 MHz. The duration is assumed.

[lattice]
sites = 10
levels = 3

[profiles]
J_mhz = 8
U_mhz = 240

[state]
initial = 0101010101
labels = psi5

[protocol]
mode = single-run
assumed_duration_ns = 200

[sampling]
dt_ns = 0.5
)"},
      {"fig8c-480", R"([meta]
name = fig8c-480
note = As fig8c with U = 480 MHz (U / J = 60). The duration is assumed.

[lattice]
sites = 10
levels = 3

[profiles]
J_mhz = 8
U_mhz = 480

[state]
initial = 0101010101
labels = psi5

[protocol]
mode = single-run
assumed_duration_ns = 200

[sampling]
dt_ns = 0.5
)"},
  };
  return table;
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"fig2", "fig3-main", "fig3-inset", "fig4", "fig4-inset", "fig5",
          "fig6a", "fig6b", "fig7", "fig8a", "fig8c", "fig8c-480"};
}

const std::string& preset_text(std::string_view name) {
  const auto& table = presets();
  auto it = table.find(name);
  if (it == table.end()) {
    std::string valid;
    for (const auto& n : preset_names()) valid += (valid.empty() ? "" : ", ") + n;
    throw LookupError("unknown preset '" + std::string(name) + "'; valid presets: " + valid);
  }
  return it->second;
}

ExperimentConfig preset(std::string_view name) { return load_config(preset_text(name)); }

}  // namespace quenchlab
