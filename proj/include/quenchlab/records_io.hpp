#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "quenchlab/analysis.hpp"
#include "quenchlab/config.hpp"
#include "quenchlab/records.hpp"

namespace quenchlab {

/// Flat view of a record stream: one column per serialized field, empty
/// cells for absent observables.
struct RecordTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::optional<double>>> rows;

  /// Column position; throws LookupError for an unknown name.
  std::size_t column(const std::string& name) const;
  std::optional<double> at(std::size_t row, const std::string& name) const;
};

/// time_ns, fidelity, P1_total, P2_total, P1_q1..P1_qL, P2_q1..P2_qL,
/// entropy, A, sx_q1..sx_qL, sz_q1..sz_qL.
std::vector<std::string> record_columns(int sites);

/// Values are rounded to 12 significant digits, matching the file encodings.
RecordTable flatten_records(std::span<const ObservableRecord> records, int sites);

std::string format_table(const RecordTable& table, OutputFormat format);
RecordTable parse_table(const std::string& text, OutputFormat format);

/// Throws std::ios_base::failure naming the path on I/O errors.
void write_records(std::span<const ObservableRecord> records, const std::filesystem::path& path, OutputFormat format,
                   int sites);
void write_table(const RecordTable& table, const std::filesystem::path& path, OutputFormat format);
/// Format from the extension (.json, otherwise CSV).
RecordTable read_table(const std::filesystem::path& path);

/// index, energy_mhz, A, band, ambiguous.
RecordTable spectrum_table(const SpectrumReport& report);

/// Shortest decimal form of `value` at 12 significant digits.
std::string format_number(double value);
double round12(double value);

OutputFormat format_for(const std::filesystem::path& path);
std::string extension_of(OutputFormat format);

}  // namespace quenchlab
