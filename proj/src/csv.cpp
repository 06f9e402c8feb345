#include <istream>
#include <ostream>
#include <sstream>

#include "mdspin/errors.hpp"
#include "mdspin/harness.hpp"

namespace mdspin::harness {

namespace {

void write_row(std::ostream& os, const std::vector<std::string>& cells) {
  for (std::size_t k = 0; k < cells.size(); ++k) {
    if (k) os << ',';
    os << cells[k];
  }
  os << '\n';
}

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

}  // namespace

void write_csv(std::ostream& os, const CsvTable& table) {
  write_row(os, table.header);
  for (const auto& row : table.rows) write_row(os, row);
}

CsvTable read_csv(std::istream& is) {
  CsvTable t;
  std::string line;
  bool first = true;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cells = split_row(line);
    if (first) {
      t.header = std::move(cells);
      first = false;
    } else {
      if (cells.size() != t.header.size()) throw IoError("csv row has " + std::to_string(cells.size()) +
                                                         " cells, header has " +
                                                         std::to_string(t.header.size()));
      t.rows.push_back(std::move(cells));
    }
  }
  return t;
}

const std::vector<std::string>& csv_header(Scenario s) {
  static const std::vector<std::string> homogeneous{
      "b_e",          "delta_phi_em_plus", "delta_phi_k_plus", "delta_rho",
      "delta_u_plus", "delta_u_minus",     "delta_phase_plus"};
  static const std::vector<std::string> interferometer{
      "b_e", "delta_u_plus", "delta_phase_plus", "delta_phase_minus", "delta_phase_exact_plus",
      "delta_phase_exact_minus"};
  static const std::vector<std::string> stern_gerlach{"index", "branch", "phase", "escaped",
                                                      "t",     "x",      "z",     "u_z"};
  static const std::vector<std::string> coupled{"t", "x", "B_r", "B_i", "P", "Q"};
  static const std::vector<std::string> compare{"scale_s", "mean_deflection_md",
                                                "mean_deflection_qm"};
  switch (s) {
    case Scenario::Homogeneous:
      return homogeneous;
    case Scenario::Interferometer:
      return interferometer;
    case Scenario::SternGerlach:
      return stern_gerlach;
    case Scenario::Coupled:
      return coupled;
    case Scenario::Compare:
      return compare;
  }
  return homogeneous;
}

}  // namespace mdspin::harness
