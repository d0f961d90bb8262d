#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "commands.hpp"
#include "curves.hpp"
#include "fiberld/errors.hpp"
#include "fiberld/fitting.hpp"
#include "fiberld/summary.hpp"
#include "io.hpp"
#include "manifest.hpp"
#include "report.hpp"
#include "svg.hpp"

namespace fiberfit {
namespace {

namespace fs = std::filesystem;
using fiberld::DataType;
using fiberld::Part;
using fiberld::Scale;

constexpr std::size_t kCurvePoints = 200;

Eigen::VectorXd to_eigen(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

[[noreturn]] void report_bad_lengths(const fiberld::DataError& e, const LengthFile& file, double r) {
  std::ostringstream os;
  os << "observed lengths must lie strictly inside (0, 2r) = (0, " << 2.0 * r
     << ") mm; offending lines:";
  const auto& idx = e.offending();
  for (std::size_t i = 0; i < std::min<std::size_t>(idx.size(), 20); ++i) {
    os << ' ' << file.line_numbers[idx[i]] << " (" << file.values[idx[i]] << ")";
  }
  if (idx.size() > 20) os << " ... (" << idx.size() << " values)";
  throw CliError(kExitInvalid, os.str());
}

}  // namespace

CLI::App* add_fit_command(CLI::App& app, FitOptions& opt) {
  CLI::App* cmd = app.add_subcommand("fit", "Fit a censored length model to observed lengths");
  cmd->add_option("--data", opt.data, "Lengths in mm, one per line ('#' starts a comment)")->required();
  cmd->add_option("--data-type", opt.data_type, "ofa or microscopy")
      ->check(CLI::IsMember({"ofa", "microscopy"}, CLI::ignore_case));
  cmd->add_option("--model", opt.model, "ggamma or lognorm")
      ->check(CLI::IsMember({"ggamma", "lognorm"}, CLI::ignore_case));
  cmd->add_option("--r", opt.r, "Core radius in mm")->required();
  cmd->add_option("--lower", opt.lower, "Lower bounds, original scale, print order");
  cmd->add_option("--upper", opt.upper, "Upper bounds, original scale, print order");
  cmd->add_option("--par-start", opt.par_start, "Starting values, original scale, print order");
  cmd->add_option("--fixed", opt.fixed, "T/F per parameter; fixed ones keep --par-start values");
  cmd->add_option("--grad", opt.grad, "analytic or fd")
      ->check(CLI::IsMember({"analytic", "fd"}, CLI::ignore_case));
  cmd->add_option("--starts", opt.starts, "Number of optimizer starts")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", opt.seed, "Seed for the jittered starts");
  cmd->add_option("--max-iter", opt.max_iter, "Iteration limit per start")->check(CLI::NonNegativeNumber);
  cmd->add_option("--out", opt.out, "Output directory")->required();
  cmd->add_flag("--svg", opt.svg, "Also write SVG plots of the observed-scale fit");
  cmd->add_flag("--force", opt.force, "Overwrite an existing output directory");
  return cmd;
}

int run_fit(const FitOptions& opt, const std::vector<std::string>& argv) {
  const fs::path out_dir(opt.out);
  check_output(out_dir, opt.force);
  if (!(opt.r > 0.0) || !std::isfinite(opt.r)) throw CliError(kExitInvalid, "--r must be positive");

  Manifest manifest("fit", argv);
  const LengthFile file = read_lengths(opt.data);
  manifest.set_input(opt.data);
  manifest.set_seed(opt.seed);

  fiberld::ModelSpec model{parse_family(opt.model),
                           lower_case(opt.data_type) == "ofa" ? DataType::ofa : DataType::microscopy,
                           fiberld::CoreGeometry(opt.r)};
  fiberld::Dataset data{file.values, model.data_type == DataType::ofa ? Scale::X : Scale::V};
  try {
    data.validate(model.geom);
  } catch (const fiberld::DataError& e) {
    report_bad_lengths(e, file, opt.r);
  }

  const int n_par = fiberld::parameter_count(model.family, model.layout());
  auto sized = [&](const std::string& text, const std::string& name) {
    const auto v = parse_doubles(text, name);
    if (static_cast<int>(v.size()) != n_par) {
      throw CliError(kExitInvalid, name + " needs " + std::to_string(n_par) + " values");
    }
    return to_eigen(v);
  };
  fiberld::FitConfig cfg;
  if (!opt.lower.empty()) cfg.lower = sized(opt.lower, "--lower");
  if (!opt.upper.empty()) cfg.upper = sized(opt.upper, "--upper");
  if (!opt.par_start.empty()) cfg.par_start = sized(opt.par_start, "--par-start");
  if (!opt.fixed.empty()) {
    cfg.fixed_mask = parse_bools(opt.fixed, "--fixed");
    if (static_cast<int>(cfg.fixed_mask.size()) != n_par) {
      throw CliError(kExitInvalid, "--fixed needs " + std::to_string(n_par) + " values");
    }
    if (!cfg.par_start) throw CliError(kExitInvalid, "--fixed requires --par-start");
  }
  cfg.n_starts = opt.starts;
  cfg.grad_mode = lower_case(opt.grad) == "fd" ? fiberld::GradMode::finite_difference
                                                : fiberld::GradMode::analytic;
  cfg.max_iter = opt.max_iter;
  cfg.seed = opt.seed;

  manifest.set_option("data_type", model.data_type == DataType::ofa ? "ofa" : "microscopy");
  manifest.set_option("model", lower_case(opt.model));
  manifest.set_option("r", opt.r);
  manifest.set_option("grad", lower_case(opt.grad));
  manifest.set_option("starts", opt.starts);
  manifest.set_option("max_iter", opt.max_iter);
  if (cfg.lower) manifest.set_option("lower", std::vector<double>(cfg.lower->begin(), cfg.lower->end()));
  if (cfg.upper) manifest.set_option("upper", std::vector<double>(cfg.upper->begin(), cfg.upper->end()));
  if (cfg.par_start) {
    manifest.set_option("par_start", std::vector<double>(cfg.par_start->begin(), cfg.par_start->end()));
  }
  if (!cfg.fixed_mask.empty()) manifest.set_option("fixed", cfg.fixed_mask);

  const fiberld::FitResult result = fiberld::fit(data, model, cfg);
  fiberld::SummaryStats stats;
  try {
    stats = fiberld::summary_stats(result);
  } catch (const fiberld::QuadratureError& e) {
    throw CliError(kExitOptimizer, std::string("summary statistics failed at the estimates: ") + e.what());
  }

  nlohmann::json j = fit_to_json(result, stats);
  const std::vector<double> par(result.theta_tilde_hat.begin(), result.theta_tilde_hat.end());
  const double diameter = 2.0 * opt.r;
  const double data_max = *std::max_element(file.values.begin(), file.values.end());
  const double upper = std::max(diameter, 1.25 * data_max);
  const auto n = static_cast<double>(kCurvePoints);

  std::vector<Scale> scales = {Scale::W, Scale::Y,
                               model.data_type == DataType::ofa ? Scale::X : Scale::V};
  std::vector<Part> parts = model.data_type == DataType::ofa
                                ? std::vector<Part>{Part::fines, Part::fibers, Part::mixture}
                                : std::vector<Part>{Part::fibers};
  fs::create_directories(out_dir);
  nlohmann::json curves = nlohmann::json::array();
  for (Scale s : scales) {
    const bool observed = s == Scale::X || s == Scale::V;
    const Grid grid = observed ? Grid{diameter / (n + 1.0), diameter * n / (n + 1.0), kCurvePoints}
                               : Grid{upper / n, upper, kCurvePoints};
    const auto points = grid_points(grid);
    for (Part p : parts) {
      const auto values = evaluate_curve(model.family, par, s, p, opt.r, points);
      const std::string name = "density_" + scale_name(s) + "_" + part_name(p);
      write_text(out_dir / (name + ".csv"), curve_csv(points, values));
      manifest.add_output(name + ".csv");
      curves.push_back({{"file", name + ".csv"},
                        {"scale", scale_name(s)},
                        {"component", part_name(p)},
                        {"grid", {{"from", grid.from}, {"to", grid.to}, {"n", grid.n}}}});
      if (opt.svg && observed && (p == Part::mixture || parts.size() == 1)) {
        PlotSpec plot;
        plot.title = "Observed lengths in the core (" + scale_name(s) + " scale)";
        plot.x = points;
        plot.y = values;
        plot.data = file.values;
        write_text(out_dir / (name + ".svg"), render_svg(plot));
        manifest.add_output(name + ".svg");
      }
    }
  }
  j["density_curves"] = curves;

  write_text(out_dir / "fit.json", j.dump(2) + "\n");
  manifest.add_output("fit.json");
  const std::string summary = render_summary(result, stats);
  write_text(out_dir / "summary.txt", summary);
  manifest.add_output("summary.txt");
  manifest.write(out_dir / "manifest.json");

  std::cout << summary;
  if (result.convergence != fiberld::Convergence::success) {
    std::cerr << "warning: the optimizer did not report success (" << fiberld::to_string(result.convergence)
              << "); outputs were written to " << out_dir.string() << "\n";
    return kExitOptimizer;
  }
  return kExitOk;
}

}  // namespace fiberfit
