#pragma once

#include <string>
#include <vector>

#include "fiberld/fitting.hpp"
#include "fiberld/summary.hpp"
#include "json.hpp"

namespace fiberfit {

/// Human-readable fit summary with fixed-width tables.
std::string render_summary(const fiberld::FitResult& fit, const fiberld::SummaryStats& stats);

nlohmann::json fit_to_json(const fiberld::FitResult& fit, const fiberld::SummaryStats& stats);

}  // namespace fiberfit
