#include "quenchlab/records_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "quenchlab/errors.hpp"
#include "quenchlab/units.hpp"

namespace quenchlab {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    out.push_back(line.substr(start, pos == std::string::npos ? std::string::npos : pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  for (auto& cell : out) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    cell = b == std::string::npos ? std::string() : cell.substr(b, e - b + 1);
  }
  return out;
}

double parse_cell(const std::string& cell, std::size_t line) {
  char* end = nullptr;
  const double v = std::strtod(cell.c_str(), &end);
  if (end != cell.c_str() + cell.size()) {
    throw ParseError("line " + std::to_string(line) + ": '" + cell + "' is not a number");
  }
  return v;
}

}  // namespace

std::string format_number(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

double round12(double value) { return std::strtod(format_number(value).c_str(), nullptr); }

OutputFormat format_for(const std::filesystem::path& path) {
  return path.extension() == ".json" ? OutputFormat::kJson : OutputFormat::kCsv;
}

std::string extension_of(OutputFormat format) { return format == OutputFormat::kJson ? ".json" : ".csv"; }

std::size_t RecordTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return i;
  }
  throw LookupError("no column '" + name + "'");
}

std::optional<double> RecordTable::at(std::size_t row, const std::string& name) const {
  return rows.at(row).at(column(name));
}

std::vector<std::string> record_columns(int sites) {
  std::vector<std::string> c{"time_ns", "fidelity", "P1_total", "P2_total"};
  for (const char* prefix : {"P1_q", "P2_q"}) {
    for (int j = 1; j <= sites; ++j) c.push_back(prefix + std::to_string(j));
  }
  c.push_back("entropy");
  c.push_back("A");
  for (const char* prefix : {"sx_q", "sz_q"}) {
    for (int j = 1; j <= sites; ++j) c.push_back(prefix + std::to_string(j));
  }
  return c;
}

RecordTable flatten_records(std::span<const ObservableRecord> records, int sites) {
  RecordTable t;
  t.columns = record_columns(sites);
  const auto L = static_cast<std::size_t>(sites);
  for (const auto& r : records) {
    std::vector<std::optional<double>> row(t.columns.size());
    row[0] = r.time;
    row[1] = r.fidelity;
    if (!r.populations.empty()) {
      if (r.populations.size() != L) throw ArgumentError("record has populations for a different chain length");
      for (int level : {1, 2}) {
        const auto k = static_cast<std::size_t>(level);
        if (r.populations.front().size() <= k) continue;
        row[1 + k] = r.total_population(level);
        for (std::size_t j = 0; j < L; ++j) row[4 + (k - 1) * L + j] = r.populations[j][k];
      }
    }
    const std::size_t tail = 4 + 2 * L;
    row[tail] = r.entropy;
    row[tail + 1] = r.anharmonicity;
    if (r.pauli) {
      if (r.pauli->size() != L) throw ArgumentError("record has Pauli values for a different chain length");
      for (std::size_t j = 0; j < L; ++j) {
        row[tail + 2 + j] = (*r.pauli)[j][0];
        row[tail + 2 + L + j] = (*r.pauli)[j][2];
      }
    }
    for (auto& v : row) {
      if (v) v = round12(*v);
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

std::string format_table(const RecordTable& table, OutputFormat format) {
  if (format == OutputFormat::kCsv) {
    std::string out;
    for (std::size_t i = 0; i < table.columns.size(); ++i) out += (i ? "," : "") + table.columns[i];
    out += '\n';
    for (const auto& row : table.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) out += ',';
        if (row[i]) out += format_number(*row[i]);
      }
      out += '\n';
    }
    return out;
  }
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) {
      obj[table.columns[i]] = row[i] ? nlohmann::ordered_json(round12(*row[i])) : nlohmann::ordered_json(nullptr);
    }
    arr.push_back(std::move(obj));
  }
  return arr.dump(1) + "\n";
}

RecordTable parse_table(const std::string& text, OutputFormat format) {
  RecordTable t;
  if (format == OutputFormat::kCsv) {
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty() || line == "\r") continue;
      auto cells = split_csv_line(line);
      if (t.columns.empty()) {
        t.columns = std::move(cells);
        continue;
      }
      if (cells.size() != t.columns.size()) {
        throw ParseError("line " + std::to_string(line_no) + ": expected " + std::to_string(t.columns.size()) +
                         " fields, got " + std::to_string(cells.size()));
      }
      std::vector<std::optional<double>> row(cells.size());
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (!cells[i].empty()) row[i] = parse_cell(cells[i], line_no);
      }
      t.rows.push_back(std::move(row));
    }
    return t;
  }
  nlohmann::ordered_json arr;
  try {
    arr = nlohmann::ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!arr.is_array()) throw ParseError("expected a JSON array of records");
  for (const auto& obj : arr) {
    if (!obj.is_object()) throw ParseError("expected a JSON object per record");
    if (t.columns.empty()) {
      for (const auto& [key, _] : obj.items()) t.columns.push_back(key);
    }
    std::vector<std::optional<double>> row(t.columns.size());
    if (obj.size() != t.columns.size()) throw ParseError("records have differing fields");
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
      const auto it = obj.find(t.columns[i]);
      if (it == obj.end()) throw ParseError("record is missing field '" + t.columns[i] + "'");
      if (it->is_null()) continue;
      if (!it->is_number()) throw ParseError("field '" + t.columns[i] + "' is not a number");
      row[i] = it->get<double>();
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

void write_table(const RecordTable& table, const std::filesystem::path& path, OutputFormat format) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw std::ios_base::failure("cannot create directory " + path.parent_path().string() + " for " + path.filename().string() + ": " + ec.message());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::ios_base::failure("cannot open " + path.string() + " for writing");
  out << format_table(table, format);
  out.close();
  if (!out) throw std::ios_base::failure("write to " + path.string() + " failed");
}

void write_records(std::span<const ObservableRecord> records, const std::filesystem::path& path, OutputFormat format,
                   int sites) {
  write_table(flatten_records(records, sites), path, format);
}

RecordTable read_table(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_table(buf.str(), format_for(path));
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

RecordTable spectrum_table(const SpectrumReport& report) {
  RecordTable t;
  t.columns = {"index", "energy_mhz", "A", "band", "ambiguous"};
  for (std::size_t k = 0; k < report.eigenvalues.size(); ++k) {
    t.rows.push_back({static_cast<double>(k), round12(units::rad_per_ns_to_mhz(report.eigenvalues[k])),
                      round12(report.anharmonicity[k]), static_cast<double>(report.band[k]),
                      report.ambiguous[k] ? 1.0 : 0.0});
  }
  return t;
}

}  // namespace quenchlab
