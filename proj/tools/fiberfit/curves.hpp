#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fiberld/densities.hpp"
#include "fiberld/scales.hpp"

namespace fiberfit {

fiberld::Family parse_family(const std::string& s);
fiberld::Scale parse_scale(const std::string& s);
fiberld::Part parse_part(const std::string& s);
std::string scale_name(fiberld::Scale s);
std::string part_name(fiberld::Part p);

/// Original-scale parameters in print order: a single component (b, d, k) or
/// (mu, sigma), or a mixture with eps first.
fiberld::PopulationParams params_from_original(fiberld::Family family,
                                               const std::vector<double>& par);

/// Density values on one scale. radius is required for every scale but Y.
std::vector<double> evaluate_curve(fiberld::Family family, const std::vector<double>& par,
                                   fiberld::Scale scale, fiberld::Part part,
                                   std::optional<double> radius,
                                   const std::vector<double>& points);

std::string curve_csv(const std::vector<double>& points, const std::vector<double>& values);

}  // namespace fiberfit
