#include "curves.hpp"

#include "fiberld/errors.hpp"
#include "io.hpp"

namespace fiberfit {

using fiberld::Family;
using fiberld::Part;
using fiberld::Scale;

Family parse_family(const std::string& s) {
  const std::string v = lower_case(s);
  if (v == "ggamma") return Family::ggamma;
  if (v == "lognorm") return Family::lognorm;
  throw CliError(kExitInvalid, "--model must be ggamma or lognorm, got '" + s + "'");
}

Scale parse_scale(const std::string& s) {
  const std::string v = lower_case(s);
  if (v == "w") return Scale::W;
  if (v == "y") return Scale::Y;
  if (v == "x") return Scale::X;
  if (v == "v") return Scale::V;
  throw CliError(kExitInvalid, "--scale must be one of w, y, x, v; got '" + s + "'");
}

Part parse_part(const std::string& s) {
  const std::string v = lower_case(s);
  if (v == "fines") return Part::fines;
  if (v == "fibers") return Part::fibers;
  if (v == "mixture") return Part::mixture;
  throw CliError(kExitInvalid, "--component must be fines, fibers or mixture; got '" + s + "'");
}

std::string scale_name(Scale s) {
  switch (s) {
    case Scale::W:
      return "w";
    case Scale::Y:
      return "y";
    case Scale::X:
      return "x";
    case Scale::V:
      return "v";
  }
  return "?";
}

std::string part_name(Part p) {
  switch (p) {
    case Part::fines:
      return "fines";
    case Part::fibers:
      return "fibers";
    case Part::mixture:
      return "mixture";
  }
  return "?";
}

fiberld::PopulationParams params_from_original(Family family, const std::vector<double>& par) {
  const std::size_t dim = family == Family::ggamma ? 3 : 2;
  auto component = [&](std::size_t offset) {
    return family == Family::ggamma
               ? fiberld::Component(fiberld::GgdParams{par[offset], par[offset + 1], par[offset + 2]})
               : fiberld::Component(fiberld::LognParams{par[offset], par[offset + 1]});
  };
  try {
    if (par.size() == dim) return component(0);
    if (par.size() == 1 + 2 * dim) {
      fiberld::MixtureParams mp{par[0], component(1), component(1 + dim)};
      mp.validate();
      return mp;
    }
  } catch (const fiberld::DomainError& e) {
    throw CliError(kExitInvalid, std::string("--par: ") + e.what());
  }
  throw CliError(kExitInvalid, "--par needs " + std::to_string(dim) + " values (one component) or " +
                                   std::to_string(1 + 2 * dim) + " values (eps first, then fines and fibers)");
}

std::vector<double> evaluate_curve(Family family, const std::vector<double>& par, Scale scale,
                                   Part part, std::optional<double> radius,
                                   const std::vector<double>& points) {
  if (!radius && scale != Scale::Y) {
    throw CliError(kExitInvalid, "--r is required for the " + scale_name(scale) + " scale", true);
  }
  try {
    const fiberld::CoreGeometry geom(radius.value_or(1.0));
    const fiberld::ScaleDensity density(scale, part, params_from_original(family, par), geom);
    return density.evaluate(points);
  } catch (const fiberld::DomainError& e) {
    throw CliError(kExitInvalid, e.what());
  }
}

std::string curve_csv(const std::vector<double>& points, const std::vector<double>& values) {
  std::string out = "length,density\n";
  for (std::size_t i = 0; i < points.size(); ++i) {
    out += format_double(points[i]) + "," + format_double(values[i]) + "\n";
  }
  return out;
}

}  // namespace fiberfit
