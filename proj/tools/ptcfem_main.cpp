#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ptcfem/errors.hpp"
#include "ptcfem/experiment.hpp"
#include "ptcfem/iteration_log.hpp"
#include "ptcfem/problems.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 1;
constexpr int kExitSolverFailure = 2;

int cmd_run(const std::string& config_path) {
  const ptcfem::RunConfig config = ptcfem::load_run_config(config_path);
  const ptcfem::ExperimentSummary summary = ptcfem::run_experiment(config);
  for (const auto& entry : summary.runs) {
    std::printf("epsilon=%.3e  dof=%d  iterations=%d  total=%.6e  %s",
                entry.epsilon, entry.final_dof, entry.iterations,
                entry.final_total_estimator, entry.termination.c_str());
    if (entry.fitted_slope)
      std::printf("  slope=%.3f", *entry.fitted_slope);
    std::printf("\n");
  }
  std::printf("summary: %s\n", summary.summary_json.c_str());
  return kExitOk;
}

int cmd_list_problems() {
  for (const auto& name : ptcfem::builtin_names()) {
    const auto spec = ptcfem::builtin(name, 1.0);
    const char* domain =
        spec.domain.kind == ptcfem::DomainKind::interval ? "interval"
                                                         : "square";
    std::printf("%-20s  %s (%g, %g)\n", name.c_str(), domain, spec.domain.lo,
                spec.domain.hi);
  }
  return kExitOk;
}

int cmd_fit(const std::string& log_path) {
  const ptcfem::IterationLog log = ptcfem::read_csv(log_path);
  const double slope = ptcfem::fit_slope(log);
  std::printf("%.12g\n", slope);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive PTC-Galerkin solver for semilinear elliptic problems"};
  app.require_subcommand(1);

  std::string config_path;
  auto* run_cmd = app.add_subcommand("run", "Run the experiment in a config file");
  run_cmd->add_option("config", config_path, "Path to the run configuration")
      ->required();

  auto* list_cmd = app.add_subcommand("list-problems", "List built-in problems");

  std::string log_path;
  auto* fit_cmd =
      app.add_subcommand("fit", "Fit the log-log estimator decay slope of a log");
  fit_cmd->add_option("log", log_path, "Path to an iteration-log CSV")
      ->required();

  try {
    app.parse(argc, argv);
    if (run_cmd->parsed()) return cmd_run(config_path);
    if (list_cmd->parsed()) return cmd_list_problems();
    if (fit_cmd->parsed()) return cmd_fit(log_path);
    return kExitConfigError;
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitConfigError;
  } catch (const ptcfem::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const ptcfem::UnknownProblem& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const ptcfem::InsufficientData& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const ptcfem::SolverFailure& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return kExitSolverFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSolverFailure;
  }
}
