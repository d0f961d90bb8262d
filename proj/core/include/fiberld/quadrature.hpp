#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "fiberld/errors.hpp"

namespace fiberld {

struct QuadratureConfig {
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  /// Relative height, against the integrand's peak, below which a
  /// semi-infinite tail is dropped.
  double tail_cutoff = 1e-12;
  int max_subdivisions = 200;

  /// Throws DomainError on non-positive tolerances or max_subdivisions < 10.
  void validate() const;
};

template <std::size_t N>
struct QuadResult {
  std::array<double, N> value{};
  std::array<double, N> error{};
  int intervals = 0;
};

namespace detail {

// 15-point Kronrod nodes on [0, 1) with the embedded 7-point Gauss rule at the
// odd positions.
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <std::size_t N>
struct Panel {
  double a;
  double b;
  std::array<double, N> value;
  std::array<double, N> error;
};

template <std::size_t N, class F>
Panel<N> kronrod_panel(F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  std::array<std::array<double, N>, 15> samples;
  samples[7] = f(center);
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kKronrodNodes[j];
    samples[j] = f(center - dx);
    samples[14 - j] = f(center + dx);
  }
  Panel<N> p{a, b, {}, {}};
  for (std::size_t c = 0; c < N; ++c) {
    const double fc = samples[7][c];
    double kronrod = kKronrodWeights[7] * fc;
    double gauss = kGaussWeights[3] * fc;
    double abs_sum = kKronrodWeights[7] * std::abs(fc);
    for (int j = 0; j < 7; ++j) {
      const double pair = samples[j][c] + samples[14 - j][c];
      kronrod += kKronrodWeights[j] * pair;
      abs_sum += kKronrodWeights[j] * (std::abs(samples[j][c]) + std::abs(samples[14 - j][c]));
      if (j % 2 == 1) gauss += kGaussWeights[j / 2] * pair;
    }
    const double mean = 0.5 * kronrod;
    double asc = kKronrodWeights[7] * std::abs(fc - mean);
    for (int j = 0; j < 7; ++j) {
      asc += kKronrodWeights[j] * (std::abs(samples[j][c] - mean) + std::abs(samples[14 - j][c] - mean));
    }
    // Error scaling as in QUADPACK's qk15.
    double err = std::abs((kronrod - gauss) * half);
    const double resasc = asc * std::abs(half);
    if (resasc != 0.0 && err != 0.0) {
      err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    }
    const double resabs = abs_sum * std::abs(half);
    const double floor = 50.0 * std::numeric_limits<double>::epsilon() * resabs;
    if (floor > err) err = floor;
    if (!std::isfinite(kronrod)) {
      throw QuadratureError("integrand is not finite on [" + std::to_string(a) + ", " +
                                std::to_string(b) + "]",
                            std::numeric_limits<double>::infinity());
    }
    p.value[c] = kronrod * half;
    p.error[c] = err;
  }
  return p;
}

}  // namespace detail

/// Adaptive 15-point Gauss-Kronrod integration of a vector-valued integrand
/// f: double -> std::array<double, N> over [a, b]. All components share one
/// subdivision tree; the panel with the largest tolerance-relative error is
/// bisected until every component meets max(abs_tol, rel_tol * |I|).
template <std::size_t N, class F>
QuadResult<N> integrate_vector(F&& f, double a, double b, const QuadratureConfig& cfg,
                               int initial_panels = 1) {
  QuadResult<N> out;
  if (a == b) return out;
  std::vector<detail::Panel<N>> panels;
  panels.reserve(static_cast<std::size_t>(cfg.max_subdivisions) + initial_panels + 1);
  const int pieces = std::max(1, initial_panels);
  for (int i = 0; i < pieces; ++i) {
    const double lo = a + (b - a) * i / pieces;
    const double hi = i + 1 == pieces ? b : a + (b - a) * (i + 1) / pieces;
    panels.push_back(detail::kronrod_panel<N>(f, lo, hi));
  }

  auto totals = [&](std::array<double, N>& value, std::array<double, N>& error) {
    value.fill(0.0);
    error.fill(0.0);
    for (const auto& p : panels) {
      for (std::size_t c = 0; c < N; ++c) {
        value[c] += p.value[c];
        error[c] += p.error[c];
      }
    }
  };

  int splits = 0;
  while (true) {
    totals(out.value, out.error);
    std::array<double, N> tol;
    bool converged = true;
    for (std::size_t c = 0; c < N; ++c) {
      tol[c] = std::max(cfg.abs_tol, cfg.rel_tol * std::abs(out.value[c]));
      if (out.error[c] > tol[c]) converged = false;
    }
    if (converged) break;

    std::size_t worst = 0;
    double worst_ratio = -1.0;
    for (std::size_t i = 0; i < panels.size(); ++i) {
      double ratio = 0.0;
      for (std::size_t c = 0; c < N; ++c) ratio = std::max(ratio, panels[i].error[c] / tol[c]);
      if (ratio > worst_ratio) {
        worst_ratio = ratio;
        worst = i;
      }
    }
    const double lo = panels[worst].a;
    const double hi = panels[worst].b;
    const double mid = 0.5 * (lo + hi);
    double max_err = 0.0;
    for (std::size_t c = 0; c < N; ++c) max_err = std::max(max_err, out.error[c]);
    if (splits >= cfg.max_subdivisions || !(mid > lo && mid < hi)) {
      throw QuadratureError("adaptive quadrature did not converge on [" + std::to_string(a) +
                                ", " + std::to_string(b) + "] after " +
                                std::to_string(splits) + " subdivisions",
                            max_err);
    }
    panels[worst] = detail::kronrod_panel<N>(f, lo, mid);
    panels.push_back(detail::kronrod_panel<N>(f, mid, hi));
    ++splits;
  }
  out.intervals = static_cast<int>(panels.size());
  return out;
}

/// Scalar adaptive integration over the finite interval [a, b].
double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureConfig& cfg = {});

/// Integral over (a, b) of a function with inverse-square-root endpoint
/// singularities, computed after the substitution x = c + h sin(phi).
double integrate_sqrt_endpoints(const std::function<double(double)>& f, double a, double b,
                                const QuadratureConfig& cfg = {});

}  // namespace fiberld
