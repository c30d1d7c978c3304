#pragma once

// Equilibrium density mu'_tau(x) and its edge constants.

#include <cmath>
#include <numbers>
#include <string>

#include "logeq/error.hpp"
#include "logeq/regime.hpp"
#include "logeq/specfun.hpp"

namespace logeq {

enum class Edge { Soft, Hard };

namespace detail {

inline double intermediate_density(double tau, double x) {
  const double s = std::sqrt((1.0 - x) * (1.0 + x));
  const double v = (1.0 + tau) / (std::numbers::pi * s) - 0.5 * tau;
  return v > 0.0 ? v : 0.0;
}

// -(tau/pi)(pi/2 - arctan(c/sqrt(b^2 - x^2))) written with atan2 to avoid the
// cancellation between pi/2 and the arctangent near the soft edge.
inline double attractive_density(double tau, double beta, double x) {
  const double c = attractive_cos_beta(tau);
  const double r = std::sqrt((beta - x) * (beta + x));
  return -tau / std::numbers::pi * std::atan2(r, c);
}

inline double repulsive_density(double tau, double beta, double x) {
  const double ax = std::abs(x);
  const double gap = (ax - beta) * (ax + beta);
  const double hard = (1.0 - ax) * (1.0 + ax);
  return tau / std::numbers::pi * ax * std::sqrt(gap / hard) *
         specfun::integral_I(std::sqrt(hard), beta);
}

}  // namespace detail

/// mu'_tau(x) for x in the open interior of the support.
inline double density(double tau, double x) {
  const Support sup = support(tau);
  if (!sup.contains_interior(x)) {
    throw DomainError("density: x = " + std::to_string(x) + " is outside the open support");
  }
  switch (sup.shape) {
    case SupportShape::FullInterval: return detail::intermediate_density(tau, x);
    case SupportShape::OneCut: return detail::attractive_density(tau, sup.beta, x);
    case SupportShape::TwoCut: return detail::repulsive_density(tau, sup.beta, x);
  }
  return 0.0;
}

/// Leading edge constant.
///  Soft edge (|x| -> beta): coefficient A in mu' ~ A sqrt(|beta^2 - x^2|).
///  Hard edge (|x| -> 1, two-cut only): limit of mu'(x) sqrt(1 - x^2).
inline double edge_coefficient(double tau, Edge edge) {
  const Support sup = support(tau);
  const double beta = sup.beta;
  switch (sup.shape) {
    case SupportShape::FullInterval:
      throw DomainError("edge_coefficient: the support is all of [-1, 1]");
    case SupportShape::OneCut:
      if (edge == Edge::Hard) throw DomainError("edge_coefficient: one-cut support has no hard edge");
      return -tau / (std::numbers::pi * attractive_cos_beta(tau));
    case SupportShape::TwoCut: {
      const double cb = std::sqrt((1.0 - beta) * (1.0 + beta));
      if (edge == Edge::Hard) return tau / std::numbers::pi * specfun::complete_K(beta) * cb;
      return tau / std::numbers::pi * beta * specfun::integral_I(cb, beta) / cb;
    }
  }
  return 0.0;
}

}  // namespace logeq
