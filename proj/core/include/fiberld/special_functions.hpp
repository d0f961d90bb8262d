#pragma once

// Gamma-family functions on the positive real axis. All functions throw
// fiberld::DomainError for non-positive or non-finite arguments.

namespace fiberld::special {

/// ln Gamma(k) via a Lanczos approximation (g = 7, 9 terms).
double log_gamma(double k);

/// Psi(k) = d/dk ln Gamma(k).
double digamma(double k);

/// Psi_1(k) = d^2/dk^2 ln Gamma(k).
double trigamma(double k);

}  // namespace fiberld::special
