#include "ptcfem/experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ptcfem/errors.hpp"
#include "ptcfem/vtk.hpp"

namespace ptcfem {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::string strip_comment(const std::string& line) {
  const auto pos = line.find_first_of("#;");
  return pos == std::string::npos ? line : line.substr(0, pos);
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("invalid number for '" + key + "': " + value);
  }
}

long parse_long(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const long v = std::stol(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("invalid integer for '" + key + "': " + value);
  }
}

std::vector<double> parse_double_list(const std::string& key,
                                      const std::string& value) {
  std::vector<double> out;
  std::string token;
  std::istringstream in(value);
  while (in >> token) {
    while (!token.empty() && token.back() == ',') token.pop_back();
    if (token.empty()) continue;
    out.push_back(parse_double(key, token));
  }
  return out;
}

int initial_dof_count(const RunConfig& config) {
  const ProblemSpec spec = builtin(config.problem, 1.0);
  return build_initial_mesh(spec.domain, config.resolution)
      .interior_vertex_count();
}

void validate(const RunConfig& config) {
  const auto names = builtin_names();
  if (std::find(names.begin(), names.end(), config.problem) == names.end())
    throw ConfigError("unknown problem: '" + config.problem + "'");
  if (config.epsilon_list.empty())
    throw ConfigError("epsilon list must not be empty");
  for (double eps : config.epsilon_list)
    if (!(eps > 0.0)) throw ConfigError("epsilon values must be positive");
  if (!(config.theta > 0.0)) throw ConfigError("theta must be positive");
  if (!(config.k0 > 0.0)) throw ConfigError("k0 must be positive");
  if (!(config.marking_fraction > 0.0 && config.marking_fraction <= 1.0))
    throw ConfigError("marking_fraction must be in (0, 1]");
  if (config.resolution < 1) throw ConfigError("resolution must be >= 1");
  if (config.quadrature_order != 4 && config.quadrature_order != 8)
    throw ConfigError("quadrature_order must be 4 or 8");
  if (config.solver_method != "direct" && config.solver_method != "cg")
    throw ConfigError("solver method must be 'direct' or 'cg'");
  if (!(config.solver_tolerance > 0.0))
    throw ConfigError("solver tolerance must be positive");
  if (config.solver_max_iterations < 1)
    throw ConfigError("solver max_iterations must be >= 1");
  const int dof0 = initial_dof_count(config);
  if (config.dof_max < dof0)
    throw ConfigError("dof_max (" + std::to_string(config.dof_max) +
                      ") is below the initial mesh DOF count (" +
                      std::to_string(dof0) + ")");
}

std::string epsilon_tag(double epsilon) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.0e", epsilon);
  return buffer;
}

}  // namespace

RunConfig parse_run_config(const std::string& text) {
  RunConfig config;
  bool saw_problem = false;
  std::string section;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("line " + std::to_string(line_no) +
                          ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section != "run" && section != "solver" && section != "output")
        throw ConfigError("unknown config section: [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_no) +
                        ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (section.empty())
      throw ConfigError("key '" + key + "' appears before any section");

    if (section == "run") {
      if (key == "problem") {
        config.problem = value;
        saw_problem = true;
      } else if (key == "epsilon") {
        config.epsilon_list = parse_double_list(key, value);
      } else if (key == "theta") {
        config.theta = parse_double(key, value);
      } else if (key == "k0") {
        config.k0 = parse_double(key, value);
      } else if (key == "dof_max") {
        config.dof_max = static_cast<int>(parse_long(key, value));
      } else if (key == "marking_fraction") {
        config.marking_fraction = parse_double(key, value);
      } else if (key == "resolution") {
        config.resolution = static_cast<int>(parse_long(key, value));
      } else if (key == "quadrature_order") {
        config.quadrature_order = static_cast<int>(parse_long(key, value));
      } else if (key == "seed") {
        config.seed = parse_long(key, value);
      } else {
        throw ConfigError("unknown key '" + key + "' in section [run]");
      }
    } else if (section == "solver") {
      if (key == "method") {
        config.solver_method = value;
      } else if (key == "tolerance") {
        config.solver_tolerance = parse_double(key, value);
      } else if (key == "max_iterations") {
        config.solver_max_iterations =
            static_cast<int>(parse_long(key, value));
      } else {
        throw ConfigError("unknown key '" + key + "' in section [solver]");
      }
    } else {  // output
      if (key == "dir") {
        config.output_dir = value;
      } else {
        throw ConfigError("unknown key '" + key + "' in section [output]");
      }
    }
  }
  if (!saw_problem) throw ConfigError("missing required key 'problem'");
  validate(config);
  return config;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_run_config(buffer.str());
}

AdaptiveConfig make_adaptive_config(const RunConfig& config) {
  AdaptiveConfig adaptive;
  adaptive.theta = config.theta;
  adaptive.k0 = config.k0;
  adaptive.dof_max = config.dof_max;
  adaptive.marking_fraction = config.marking_fraction;
  adaptive.initial_resolution = config.resolution;
  adaptive.quadrature_degree = config.quadrature_order;
  adaptive.solver.method = config.solver_method == "cg"
                               ? SolveMethod::conjugate_gradient
                               : SolveMethod::direct;
  adaptive.solver.tolerance = config.solver_tolerance;
  adaptive.solver.max_iterations = config.solver_max_iterations;
  return adaptive;
}

ExperimentSummary run_experiment(const RunConfig& config) {
  validate(config);
  std::filesystem::path out_dir = config.output_dir;
  if (const char* env = std::getenv("PTCFEM_OUTPUT_DIR");
      env != nullptr && *env != '\0')
    out_dir = env;
  std::filesystem::create_directories(out_dir);

  ExperimentSummary summary;
  nlohmann::json runs_json = nlohmann::json::array();

  for (double epsilon : config.epsilon_list) {
    const ProblemSpec problem = builtin(config.problem, epsilon);
    AdaptiveConfig adaptive = make_adaptive_config(config);

    const std::string base = config.problem + "_eps" + epsilon_tag(epsilon);
    const auto log_path = out_dir / (base + "_log.csv");
    const auto mesh_path = out_dir / (base + "_mesh.vtk");
    const auto solution_path = out_dir / (base + "_solution.vtk");

    // Stream rows so a solver failure still leaves the partial log behind.
    std::ofstream log_stream(log_path);
    if (!log_stream)
      throw Error("cannot open for writing: " + log_path.string());
    log_stream << kCsvHeader << '\n';
    adaptive.on_row = [&log_stream](const IterationRow& row) {
      log_stream << format_csv_row(row) << '\n';
      log_stream.flush();
    };

    const RunResult result = run(problem, adaptive);
    log_stream.close();
    write_mesh_vtk(mesh_path, result.mesh);
    write_solution_vtk(solution_path, result.mesh, result.solution);

    EpsilonRunSummary entry;
    entry.epsilon = epsilon;
    entry.termination = to_string(result.status);
    entry.iterations = static_cast<int>(result.log.rows.size());
    entry.final_dof = result.mesh.interior_vertex_count();
    entry.final_total_estimator =
        result.log.rows.empty() ? 0.0 : result.log.rows.back().total;
    try {
      entry.fitted_slope = fit_slope(result.log);
    } catch (const InsufficientData&) {
      entry.fitted_slope = std::nullopt;
    }
    entry.log_csv = log_path.string();
    entry.mesh_vtk = mesh_path.string();
    entry.solution_vtk = solution_path.string();
    summary.runs.push_back(entry);

    nlohmann::json j;
    j["epsilon"] = epsilon;
    j["termination"] = entry.termination;
    j["iterations"] = entry.iterations;
    j["final_dof"] = entry.final_dof;
    j["final_total_estimator"] = entry.final_total_estimator;
    if (entry.fitted_slope)
      j["fitted_slope"] = *entry.fitted_slope;
    else
      j["fitted_slope"] = nullptr;
    j["log_csv"] = log_path.filename().string();
    j["mesh_vtk"] = mesh_path.filename().string();
    j["solution_vtk"] = solution_path.filename().string();
    runs_json.push_back(j);
  }

  nlohmann::json root;
  root["problem"] = config.problem;
  root["theta"] = config.theta;
  root["k0"] = config.k0;
  root["dof_max"] = config.dof_max;
  root["seed"] = config.seed;
  root["runs"] = runs_json;
  const auto summary_path = out_dir / "summary.json";
  std::ofstream summary_stream(summary_path);
  if (!summary_stream)
    throw Error("cannot open for writing: " + summary_path.string());
  summary_stream << root.dump(2) << '\n';
  summary.summary_json = summary_path.string();
  return summary;
}

}  // namespace ptcfem
