#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "commands.hpp"
#include "fiberld/errors.hpp"
#include "fiberld/fitting.hpp"
#include "fiberld/parallel.hpp"
#include "fiberld/simulate.hpp"
#include "io.hpp"

namespace {

void apply_thread_limit() {
  const char* env = std::getenv("FIBERFIT_THREADS");
  if (!env || !*env) return;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (*end != '\0' || v < 0 || v > 4096) {
    throw fiberfit::CliError(fiberfit::kExitInvalid,
                             "FIBERFIT_THREADS must be a non-negative integer (0 = auto)");
  }
  fiberld::set_thread_limit(static_cast<int>(v));
}

}  // namespace

int main(int argc, char** argv) {
  using namespace fiberfit;
  CLI::App app{"Estimate fiber and fine length distributions from increment-core data."};
  app.set_version_flag("--version", FIBERFIT_VERSION);
  app.require_subcommand(1);

  FitOptions fit_opt;
  DensityOptions density_opt;
  SimulateOptions simulate_opt;
  CLI::App* fit = add_fit_command(app, fit_opt);
  CLI::App* density = add_density_command(app, density_opt);
  CLI::App* simulate = add_simulate_command(app, simulate_opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n";
    const auto subs = app.get_subcommands();
    std::cerr << (subs.empty() ? app.help() : subs.front()->help());
    return kExitInvalid;
  }

  const std::vector<std::string> args(argv, argv + argc);
  try {
    apply_thread_limit();
    if (fit->parsed()) return run_fit(fit_opt, args);
    if (density->parsed()) return run_density(density_opt, args);
    if (simulate->parsed()) return run_simulate(simulate_opt, args);
  } catch (const CliError& e) {
    std::cerr << "error: " << e.what() << "\n";
    if (e.show_usage()) {
      const auto subs = app.get_subcommands();
      std::cerr << "\n" << (subs.empty() ? app.help() : subs.front()->help());
    }
    return e.code();
  } catch (const fiberld::DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const fiberld::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const fiberld::FitError& e) {
    std::cerr << "error: " << e.what() << "\n";
    for (const auto& s : e.starts()) std::cerr << "  start " << s.index << ": " << s.status << "\n";
    return kExitOptimizer;
  } catch (const fiberld::SamplingError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitInvalid;
}
