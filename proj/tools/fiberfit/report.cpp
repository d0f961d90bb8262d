#include "report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace fiberfit {
namespace {

using fiberld::Convergence;
using fiberld::DataType;
using fiberld::Family;

constexpr int kLabelWidth = 11;

std::string cell(double v, int decimals, int width) {
  char buf[64];
  if (std::isnan(v)) {
    std::snprintf(buf, sizeof buf, "%*s", width, "NA");
  } else {
    std::snprintf(buf, sizeof buf, "%*.*f", width, decimals, v);
  }
  return buf;
}

std::string text_cell(const std::string& s, int width) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%*s", width, s.c_str());
  return buf;
}

struct Column {
  std::string name;
  double estimate;
  double se;
  bool fixed;
};

std::string table(const std::vector<Column>& cols, int decimals) {
  std::ostringstream os;
  std::vector<int> widths;
  for (const auto& c : cols) widths.push_back(std::max<int>(11, static_cast<int>(c.name.size()) + 2));
  os << std::string(kLabelWidth, ' ');
  for (std::size_t i = 0; i < cols.size(); ++i) os << text_cell(cols[i].name, widths[i]);
  os << "\nEstimate   ";
  for (std::size_t i = 0; i < cols.size(); ++i) os << cell(cols[i].estimate, decimals, widths[i]);
  os << "\nStd. Error ";
  for (std::size_t i = 0; i < cols.size(); ++i) {
    os << (cols[i].fixed ? text_cell("fixed", widths[i]) : cell(cols[i].se, decimals, widths[i]));
  }
  os << "\n";
  return os.str();
}

std::string stats_table(const fiberld::ComponentSummary& s) {
  return table({{"Mean", s.mean.value, s.mean.se, false},
                {"Std.dev.", s.sd.value, s.sd.se, false},
                {"Skewness", s.skewness.value, s.skewness.se, false},
                {"Kurtosis", s.kurtosis.value, s.kurtosis.se, false}},
               5);
}

std::string convergence_text(Convergence c) {
  switch (c) {
    case Convergence::success:
      return "Successful completion";
    case Convergence::max_iter:
      return "Iteration limit reached";
    case Convergence::line_search_failure:
      return "Line search could not improve the likelihood";
    case Convergence::singular_hessian:
      return "Singular Hessian at the optimum; standard errors unavailable";
  }
  return "unknown";
}

nlohmann::json statistic_json(const fiberld::Statistic& s) {
  return {{"estimate", s.value}, {"se", std::isnan(s.se) ? nlohmann::json(nullptr) : nlohmann::json(s.se)}};
}

nlohmann::json component_json(const fiberld::ComponentSummary& s) {
  return {{"mean", statistic_json(s.mean)},
          {"sd", statistic_json(s.sd)},
          {"skewness", statistic_json(s.skewness)},
          {"kurtosis", statistic_json(s.kurtosis)}};
}

nlohmann::json vector_json(const Eigen::VectorXd& v) {
  nlohmann::json out = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    out.push_back(std::isnan(v(i)) ? nlohmann::json(nullptr) : nlohmann::json(v(i)));
  }
  return out;
}

nlohmann::json matrix_json(const Eigen::MatrixXd& m) {
  nlohmann::json out = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) out.push_back(vector_json(m.row(i).transpose()));
  return out;
}

}  // namespace

std::string render_summary(const fiberld::FitResult& fit, const fiberld::SummaryStats& stats) {
  const bool ofa = fit.model.data_type == DataType::ofa;
  std::ostringstream os;
  os << (ofa ? "Increment core data (all fiber and fine lengths in the core)"
             : "Microscopy data (uncut fibers in the core)")
     << "\n\n";
  os << "Model: " << (fit.model.family == Family::ggamma ? "Generalized gamma" : "Log normal")
     << "   Method: ML   Core radius: " << fit.model.geom.radius() << " mm\n\n";

  const auto names = fiberld::parameter_names(fit.model.family, fit.model.layout());
  std::vector<Column> params;
  for (std::size_t i = 0; i < names.size(); ++i) {
    const auto idx = static_cast<Eigen::Index>(i);
    const double se = fit.has_covariance() ? fit.se_tilde(idx) : std::nan("");
    params.push_back({names[i], fit.theta_tilde_hat(idx), se, fit.theta_hat.is_fixed(static_cast<int>(i))});
  }
  os << "Model parameters:\n" << table(params, 6) << "\n";

  os << "Summary statistics for FIBER lengths in the standing tree:\n"
     << stats_table(stats.fibers) << "\n";
  if (stats.fines) {
    os << "Summary statistics for FINE lengths in the standing tree:\n"
       << stats_table(*stats.fines) << "\n";
  }
  char line[160];
  if (stats.eps_tilde) {
    std::snprintf(line, sizeof line, "Proportion of fines in the standing tree: %.4f (Std.error = %.4f)\n",
                  stats.eps_tilde->value, stats.eps_tilde->se);
    os << line;
    std::snprintf(line, sizeof line, "Expected cell length in the standing tree: %.4f (Std.error = %.4f)\n\n",
                  stats.mean_w_overall->value, stats.mean_w_overall->se);
    os << line;
  }
  std::snprintf(line, sizeof line, "'-'Loglik = %.3f   Sample size: n = %zu\n\n", -fit.loglik, fit.n);
  os << line;
  os << "Convergence: " << convergence_text(fit.convergence) << "\n";
  return os.str();
}

nlohmann::json fit_to_json(const fiberld::FitResult& fit, const fiberld::SummaryStats& stats) {
  using nlohmann::json;
  const auto names = fiberld::parameter_names(fit.model.family, fit.model.layout());
  std::vector<bool> fixed;
  for (int i = 0; i < fit.theta_hat.size(); ++i) fixed.push_back(fit.theta_hat.is_fixed(i));

  json j;
  j["model"] = fit.model.family == Family::ggamma ? "ggamma" : "lognorm";
  j["data_type"] = fit.model.data_type == DataType::ofa ? "ofa" : "microscopy";
  j["r"] = fit.model.geom.radius();
  j["n"] = fit.n;
  j["parameter_names"] = names;
  j["fixed"] = fixed;
  j["estimates"] = {{"original", vector_json(fit.theta_tilde_hat)},
                    {"theta", vector_json(fit.theta_hat.values)}};
  if (fit.has_covariance()) {
    j["standard_errors"] = {{"original", vector_json(fit.se_tilde)},
                            {"theta", vector_json(fit.se_theta)}};
    j["covariance"] = {{"original", matrix_json(fit.cov_tilde)},
                       {"theta", matrix_json(fit.cov_theta)}};
  } else {
    j["standard_errors"] = nullptr;
    j["covariance"] = nullptr;
  }
  j["loglik"] = fit.loglik;
  j["neg_loglik"] = -fit.loglik;
  j["convergence"] = fiberld::to_string(fit.convergence);
  j["iterations"] = fit.iterations;
  j["best_start"] = fit.best_start;
  j["starts_tried"] = fit.starts_tried;
  j["init_fallback"] = fit.init_fallback;
  j["labels_swapped"] = fit.labels_swapped;
  json starts = json::array();
  for (const auto& s : fit.starts) {
    starts.push_back({{"index", s.index},
                      {"ok", s.ok},
                      {"status", s.status},
                      {"loglik", s.ok ? json(s.loglik) : json(nullptr)},
                      {"iterations", s.iterations}});
  }
  j["starts"] = starts;
  j["trace"] = fit.trace;

  json summary;
  summary["fibers"] = component_json(stats.fibers);
  if (stats.fines) summary["fines"] = component_json(*stats.fines);
  if (stats.eps_tilde) summary["eps_tilde"] = statistic_json(*stats.eps_tilde);
  if (stats.mean_w_overall) summary["mean_w"] = statistic_json(*stats.mean_w_overall);
  j["summary"] = summary;
  return j;
}

}  // namespace fiberfit
