#include "ptcfem/iteration_log.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "ptcfem/errors.hpp"

namespace ptcfem {

namespace {

std::string format_double(double v) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", v);
  return buffer;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, sep)) out.push_back(field);
  return out;
}

}  // namespace

std::string to_string(Action action) {
  return action == Action::refine ? "REFINE" : "PTC";
}

Action action_from_string(const std::string& text) {
  if (text == "REFINE") return Action::refine;
  if (text == "PTC") return Action::ptc;
  throw Error("unknown action in log: " + text);
}

std::string format_csv_row(const IterationRow& row) {
  std::string out;
  out += std::to_string(row.n);
  out += ',';
  out += std::to_string(row.dof);
  out += ',';
  out += format_double(row.k);
  out += ',';
  out += format_double(row.r_omega);
  out += ',';
  out += format_double(row.eta_total);
  out += ',';
  out += format_double(row.total);
  out += ',';
  out += to_string(row.action);
  out += ',';
  out += format_double(row.seconds);
  return out;
}

void write_csv(std::ostream& out, const IterationLog& log) {
  out << kCsvHeader << '\n';
  for (const auto& row : log.rows) out << format_csv_row(row) << '\n';
}

void write_csv(const std::filesystem::path& path, const IterationLog& log) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open for writing: " + path.string());
  write_csv(out, log);
}

IterationLog read_csv(std::istream& in) {
  IterationLog log;
  std::string line;
  if (!std::getline(in, line)) throw Error("log CSV is empty");
  if (line != kCsvHeader)
    throw Error("unexpected log CSV header: " + line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != 8)
      throw Error("malformed log CSV row: " + line);
    IterationRow row;
    row.n = std::stoi(fields[0]);
    row.dof = std::stoi(fields[1]);
    row.k = std::stod(fields[2]);
    row.r_omega = std::stod(fields[3]);
    row.eta_total = std::stod(fields[4]);
    row.total = std::stod(fields[5]);
    row.action = action_from_string(fields[6]);
    row.seconds = std::stod(fields[7]);
    log.rows.push_back(row);
  }
  return log;
}

IterationLog read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open log CSV: " + path.string());
  return read_csv(in);
}

double fit_slope(const IterationLog& log) {
  int refine_rows = 0;
  int refine_dof_min = 0, refine_dof_max = 0;
  for (const auto& row : log.rows) {
    if (row.action != Action::refine) continue;
    if (refine_rows == 0) refine_dof_min = refine_dof_max = row.dof;
    refine_dof_min = std::min(refine_dof_min, row.dof);
    refine_dof_max = std::max(refine_dof_max, row.dof);
    ++refine_rows;
  }
  if (refine_rows < 5 || refine_dof_max < 10 * refine_dof_min)
    throw InsufficientData(
        "fit_slope: need at least 5 REFINE rows spanning a decade of DOF");

  // Last row at each DOF level.
  std::map<int, double> level_total;
  for (const auto& row : log.rows) level_total[row.dof] = row.total;

  const double dof_cut = level_total.rbegin()->first / 10.0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  for (const auto& [dof, total] : level_total) {
    if (dof < dof_cut || !(total > 0.0)) continue;
    const double x = std::log10(static_cast<double>(dof));
    const double y = std::log10(total);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  if (count < 2)
    throw InsufficientData("fit_slope: fewer than 2 usable DOF levels in the final decade");
  const double denom = count * sxx - sx * sx;
  if (denom == 0.0)
    throw InsufficientData("fit_slope: degenerate DOF levels");
  return (count * sxy - sx * sy) / denom;
}

}  // namespace ptcfem
