#pragma once

#include <array>
#include <optional>
#include <vector>

namespace quenchlab {

/// Observables at one sample time. Optional fields are absent when not requested.
struct ObservableRecord {
  double time = 0.0;  // ns
  std::optional<double> fidelity;
  /// populations[j][k] = P_k^j for site j and level k.
  std::vector<std::vector<double>> populations;
  /// Pauli expectations per site, axes x, y, z.
  std::optional<std::vector<std::array<double, 3>>> pauli;
  std::optional<double> anharmonicity;
  std::optional<double> entropy;

  /// P_k = sum_j P_k^j; zero when level k is not tracked.
  double total_population(int level) const {
    double s = 0.0;
    for (const auto& site : populations) {
      if (static_cast<std::size_t>(level) < site.size()) s += site[static_cast<std::size_t>(level)];
    }
    return s;
  }
};

}  // namespace quenchlab
