#include <filesystem>
#include <iostream>

#include "commands.hpp"
#include "curves.hpp"
#include "io.hpp"
#include "manifest.hpp"
#include "svg.hpp"

namespace fiberfit {

namespace fs = std::filesystem;
using fiberld::Family;
using fiberld::Part;
using fiberld::Scale;

CLI::App* add_density_command(CLI::App& app, DensityOptions& opt) {
  CLI::App* cmd = app.add_subcommand("density", "Evaluate a length density on one scale");
  cmd->add_option("--model", opt.model, "ggamma or lognorm")
      ->check(CLI::IsMember({"ggamma", "lognorm"}, CLI::ignore_case));
  cmd->add_option("--scale", opt.scale, "w, y, x or v")->required();
  cmd->add_option("--component", opt.component,
                  "fines, fibers or mixture (default: mixture for mixture parameters, "
                  "fibers otherwise)");
  cmd->add_option("--par", opt.par, "Original-scale parameters, print order")->required();
  cmd->add_option("--r", opt.r, "Core radius in mm (required except on the y scale)");
  auto* grid = cmd->add_option("--grid", opt.grid, "Evaluation grid a:b:n");
  auto* at = cmd->add_option("--at", opt.at, "Comma-separated evaluation points");
  grid->excludes(at);
  at->excludes(grid);
  cmd->add_option("--out", opt.out, "CSV output path (default: standard output)");
  cmd->add_option("--svg", opt.svg, "Also render the curve to this SVG file");
  cmd->add_option("--data", opt.data, "Lengths to draw as a histogram behind the curve");
  cmd->add_flag("--force", opt.force, "Overwrite existing output files");
  return cmd;
}

int run_density(const DensityOptions& opt, const std::vector<std::string>& argv) {
  if (opt.grid.empty() && opt.at.empty()) throw CliError(kExitInvalid, "one of --grid or --at is required");
  if (opt.r && !(*opt.r > 0.0)) throw CliError(kExitInvalid, "--r must be positive");
  if (!opt.out.empty()) check_output(opt.out, opt.force);
  if (!opt.svg.empty()) check_output(opt.svg, opt.force);

  const Family family = parse_family(opt.model);
  const Scale scale = parse_scale(opt.scale);
  const auto par = parse_doubles(opt.par, "--par");
  const std::size_t dim = family == Family::ggamma ? 3 : 2;
  const Part part = !opt.component.empty() ? parse_part(opt.component)
                    : par.size() == dim    ? Part::fibers
                                           : Part::mixture;
  const auto points = opt.grid.empty() ? parse_doubles(opt.at, "--at") : grid_points(parse_grid(opt.grid));
  const auto values = evaluate_curve(family, par, scale, part, opt.r, points);
  const std::string csv = curve_csv(points, values);

  Manifest manifest("density", argv);
  manifest.set_option("model", lower_case(opt.model));
  manifest.set_option("scale", scale_name(scale));
  manifest.set_option("component", part_name(part));
  manifest.set_option("par", par);
  if (opt.r) manifest.set_option("r", *opt.r);
  if (!opt.grid.empty()) manifest.set_option("grid", opt.grid);
  if (!opt.at.empty()) manifest.set_option("at", points);

  if (!opt.svg.empty()) {
    PlotSpec plot;
    plot.title = part_name(part) + " density, " + scale_name(scale) + " scale";
    plot.x = points;
    plot.y = values;
    if (!opt.data.empty()) {
      plot.data = read_lengths(opt.data).values;
      manifest.set_input(opt.data);
    }
    write_text(opt.svg, render_svg(plot));
    manifest.add_output(opt.svg);
  }
  if (opt.out.empty()) {
    std::cout << csv;
  } else {
    write_text(opt.out, csv);
    manifest.add_output(opt.out);
  }
  if (!opt.out.empty() || !opt.svg.empty()) {
    const fs::path primary = opt.out.empty() ? fs::path(opt.svg) : fs::path(opt.out);
    manifest.write(primary.string() + ".manifest.json");
  }
  return kExitOk;
}

}  // namespace fiberfit
