#pragma once

// Logarithmic potential and equilibrium constant of mu_tau.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "logeq/branches.hpp"
#include "logeq/density.hpp"
#include "logeq/error.hpp"
#include "logeq/integrate.hpp"
#include "logeq/regime.hpp"
#include "logeq/series.hpp"
#include "logeq/transform.hpp"

namespace logeq {

namespace detail {

// x log x with the removable value 0 at x = 0.
inline double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

}  // namespace detail

/// Potential of the uniform probability measure on [-1, 1], for |x| <= 1:
/// 1 - ((1+x)log(1+x) + (1-x)log(1-x))/2.
inline double lebesgue_potential(double x) {
  if (!(std::abs(x) <= 1.0)) throw DomainError("lebesgue_potential: requires |x| <= 1");
  return 1.0 - 0.5 * (detail::xlogx(1.0 + x) + detail::xlogx(1.0 - x));
}

/// External field tau V^lambda(x).
inline double external_field(double tau, double x) { return tau * lebesgue_potential(x); }

namespace detail {

inline double omega_attractive(double tau, double beta) {
  const double c = attractive_cos_beta(tau);
  return (1.0 + tau) * std::log(2.0) - std::log(beta) + 1.0 + tau - tau * std::log1p(c);
}

}  // namespace detail

/// Two-cut omega from both routes; throws InconsistencyError if they differ by more than 1e-8.
struct RepulsiveOmega {
  double series;
  double integral;
};

inline RepulsiveOmega omega_repulsive_routes(double tau) {
  const RepulsiveOmega r{series::omega_series(tau, 1e-13).value, series::omega_integral(tau)};
  if (!(std::abs(r.series - r.integral) <= 1e-8)) {
    throw InconsistencyError("omega: series and integral routes disagree at tau = " +
                             std::to_string(tau));
  }
  return r;
}

/// Equilibrium constant omega_tau.
inline double omega(double tau) {
  const Support sup = support(tau);
  switch (sup.shape) {
    case SupportShape::FullInterval: return (1.0 + tau) * std::log(2.0);
    case SupportShape::OneCut: return detail::omega_attractive(tau, sup.beta);
    case SupportShape::TwoCut: return omega_repulsive_routes(tau).series;
  }
  return 0.0;
}

/// Logarithmic potential V(z) = -int log|x - z| dmu_tau(x), defined everywhere.
inline double potential(double tau, cplx z) {
  const Support sup = support(tau);
  if (sup.shape == SupportShape::TwoCut) return oracle::potential_quad(tau, z);

  const double lo = -sup.beta;
  const double hi = sup.beta;
  if (detail::distance_to_segment(z, lo, hi) <= kCutTolerance) {
    // On the support the total potential is flat: V = omega - tau V^lambda.
    const double x = std::clamp(z.real(), lo, hi);
    return omega(tau) - external_field(tau, x);
  }
  z = detail::canonical(z);
  if (sup.shape == SupportShape::FullInterval) {
    const cplx cl = 0.5 * log_ratio_pm1(z);
    return -(1.0 + tau) * std::log(std::abs(phi_joukowski(z) / 2.0)) +
           tau * ((z * cl).real() + 0.5 * std::log(std::abs((z - 1.0) * (z + 1.0))) - 1.0);
  }
  const double beta = sup.beta;
  const double c = attractive_cos_beta(tau);
  const cplx s = sqrt_cut(z, beta);
  const cplx cz = detail::cauchy_attractive(tau, beta, z);
  return -(z * cz).real() - (1.0 + tau) * std::log(std::abs(beta / 2.0 * phi_joukowski(z / beta))) +
         tau * std::log(std::abs((s + z * c) / (1.0 + c))) + 1.0;
}

inline double potential(double tau, double x) { return potential(tau, cplx(x, 0.0)); }

struct EquilibriumReport {
  double tau;
  Regime regime;
  double beta;
  double omega;
};

inline EquilibriumReport report(double tau) {
  const Support sup = support(tau);
  return {tau, classify_regime(tau), sup.beta, omega(tau)};
}

}  // namespace logeq
