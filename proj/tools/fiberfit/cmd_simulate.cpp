#include <iostream>

#include "commands.hpp"
#include "curves.hpp"
#include "fiberld/simulate.hpp"
#include "io.hpp"
#include "manifest.hpp"

namespace fiberfit {

using fiberld::Scale;

CLI::App* add_simulate_command(CLI::App& app, SimulateOptions& opt) {
  CLI::App* cmd = app.add_subcommand("simulate", "Draw a seeded sample of lengths on one scale");
  cmd->add_option("--scale", opt.scale, "w, y, x or v")->required();
  cmd->add_option("--model", opt.model, "ggamma or lognorm")
      ->check(CLI::IsMember({"ggamma", "lognorm"}, CLI::ignore_case));
  cmd->add_option("--par", opt.par, "Original-scale parameters, print order")->required();
  cmd->add_option("--r", opt.r, "Core radius in mm (required except on the y scale)");
  cmd->add_option("--n", opt.n, "Sample size")->required();
  cmd->add_option("--seed", opt.seed, "Random seed");
  cmd->add_option("--out", opt.out, "Output path (default: standard output)");
  cmd->add_flag("--force", opt.force, "Overwrite an existing output file");
  return cmd;
}

int run_simulate(const SimulateOptions& opt, const std::vector<std::string>& argv) {
  if (opt.n < 1) throw CliError(kExitInvalid, "--n must be at least 1");
  if (opt.r && !(*opt.r > 0.0)) throw CliError(kExitInvalid, "--r must be positive");
  if (!opt.out.empty()) check_output(opt.out, opt.force);

  const auto family = parse_family(opt.model);
  const Scale scale = parse_scale(opt.scale);
  if (!opt.r && scale != Scale::Y) {
    throw CliError(kExitInvalid, "--r is required for the " + scale_name(scale) + " scale", true);
  }
  const auto par = parse_doubles(opt.par, "--par");

  fiberld::SimSpec spec;
  spec.scale = scale;
  spec.params = params_from_original(family, par);
  spec.geom = fiberld::CoreGeometry(opt.r.value_or(1.0));
  spec.n = static_cast<std::size_t>(opt.n);
  spec.seed = opt.seed;
  const auto values = fiberld::sample(spec);

  std::string text = "# fiberfit simulate scale=" + scale_name(scale) + " model=" + lower_case(opt.model) +
                     " par=" + opt.par;
  if (opt.r) text += " r=" + format_double(*opt.r);
  text += " n=" + std::to_string(opt.n) + " seed=" + std::to_string(opt.seed) + "\n";
  for (double v : values) text += format_double(v) + "\n";

  if (opt.out.empty()) {
    std::cout << text;
    return kExitOk;
  }
  write_text(opt.out, text);
  Manifest manifest("simulate", argv);
  manifest.set_option("scale", scale_name(scale));
  manifest.set_option("model", lower_case(opt.model));
  manifest.set_option("par", par);
  if (opt.r) manifest.set_option("r", *opt.r);
  manifest.set_option("n", opt.n);
  manifest.set_seed(opt.seed);
  manifest.add_output(opt.out);
  manifest.write(opt.out + ".manifest.json");
  return kExitOk;
}

}  // namespace fiberfit
