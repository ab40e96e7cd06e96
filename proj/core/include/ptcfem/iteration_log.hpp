#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace ptcfem {

enum class Action { ptc, refine };

/// One row of the convergence history: what the experiment CLI logs and the
/// slope fit consumes. `seconds` is the wall time of the iteration.
struct IterationRow {
  int n = 0;
  int dof = 0;
  double k = 0.0;
  double r_omega = 0.0;
  double eta_total = 0.0;
  double total = 0.0;
  Action action = Action::ptc;
  double seconds = 0.0;
};

struct IterationLog {
  std::vector<IterationRow> rows;
};

inline constexpr const char* kCsvHeader = "n,dof,k,R,eta,total,action,seconds";

std::string to_string(Action action);
Action action_from_string(const std::string& text);

/// Round-trip safe formatting: doubles are written with max_digits10
/// precision so parsing an emitted log reproduces the rows exactly.
std::string format_csv_row(const IterationRow& row);

void write_csv(std::ostream& out, const IterationLog& log);
void write_csv(const std::filesystem::path& path, const IterationLog& log);
IterationLog read_csv(std::istream& in);
IterationLog read_csv(const std::filesystem::path& path);

/// Least-squares slope of log10(total) against log10(dof) over the final
/// decade of DOF, using the last row at each DOF level. Requires at least 5
/// REFINE rows spanning a decade of DOF; throws InsufficientData otherwise.
double fit_slope(const IterationLog& log);

}  // namespace ptcfem
