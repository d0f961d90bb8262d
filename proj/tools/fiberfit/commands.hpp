#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

namespace fiberfit {

struct FitOptions {
  std::string data;
  std::string data_type = "ofa";
  std::string model = "ggamma";
  double r = 0.0;
  std::string lower;
  std::string upper;
  std::string par_start;
  std::string fixed;
  std::string grad = "analytic";
  int starts = 5;
  std::uint64_t seed = 1;
  int max_iter = 500;
  std::string out;
  bool svg = false;
  bool force = false;
};

struct DensityOptions {
  std::string model = "ggamma";
  std::string scale;
  std::string component;
  std::string par;
  std::optional<double> r;
  std::string grid;
  std::string at;
  std::string out;
  std::string svg;
  std::string data;
  bool force = false;
};

struct SimulateOptions {
  std::string scale;
  std::string model = "ggamma";
  std::string par;
  std::optional<double> r;
  long long n = 0;
  std::uint64_t seed = 1;
  std::string out;
  bool force = false;
};

CLI::App* add_fit_command(CLI::App& app, FitOptions& opt);
CLI::App* add_density_command(CLI::App& app, DensityOptions& opt);
CLI::App* add_simulate_command(CLI::App& app, SimulateOptions& opt);

int run_fit(const FitOptions& opt, const std::vector<std::string>& argv);
int run_density(const DensityOptions& opt, const std::vector<std::string>& argv);
int run_simulate(const SimulateOptions& opt, const std::vector<std::string>& argv);

}  // namespace fiberfit
