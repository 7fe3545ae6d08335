#pragma once

#include <numbers>

namespace quenchlab::units {

// User-facing frequencies are f = omega/2pi in MHz. Internally everything is
// angular frequency in rad/ns with time in ns.
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

constexpr double mhz_to_rad_per_ns(double f_mhz) { return kTwoPi * f_mhz * 1e-3; }
constexpr double rad_per_ns_to_mhz(double omega) { return omega / kTwoPi * 1e3; }

// Period in ns of a drive at f_mhz.
constexpr double period_ns(double f_mhz) { return 1e3 / f_mhz; }

}  // namespace quenchlab::units
