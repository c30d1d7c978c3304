#pragma once

// Cauchy transform C(z) = int dmu_tau(x)/(z - x) and its primitive g(z).

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "logeq/branches.hpp"
#include "logeq/error.hpp"
#include "logeq/quadrature.hpp"
#include "logeq/regime.hpp"
#include "logeq/specfun.hpp"

namespace logeq {

namespace detail {

inline void reject_on_support(const Support& sup, cplx z, const char* who) {
  for (auto [a, b] : sup.intervals()) reject_on_cut(z, a, b, who);
}

struct InnerIntegral {
  cplx value;
  double error;  // |GL96 - GL192|
};

// J(z) = int_{-beta}^{beta} sqrt((1 - x^2)/(beta^2 - x^2)) dx/(z - x)
//      = int_{-pi/2}^{pi/2} sqrt(1 - beta^2 sin^2 t)/(z - beta sin t) dt.
// Close to [-beta, beta] the near-pole is subtracted with w = sqrt(1 - z^2):
//   J = int (z + beta sin t)/(sqrt(1 - beta^2 sin^2 t) + w) dt + pi w/(z^2 - beta^2)^{1/2}.
inline InnerIntegral repulsive_inner(cplx z, double beta) {
  const double kp = std::sqrt((1.0 - beta) * (1.0 + beta));
  const double half_pi = std::numbers::pi / 2.0;
  auto root = [kp](double t) { return std::hypot(std::cos(t), kp * std::sin(t)); };

  if (distance_to_segment(z, -beta, beta) >= 0.25 * beta) {
    auto f = [&](double t) -> cplx { return root(t) / (z - beta * std::sin(t)); };
    const cplx v96 = quad::integrate<96>(f, -half_pi, half_pi);
    const cplx v192 = quad::integrate<192>(f, -half_pi, half_pi);
    return {v192, std::abs(v192 - v96)};
  }
  // Re w >= 0 keeps the denominator away from zero.
  const cplx w = std::sqrt(1.0 - z * z);
  auto f = [&](double t) -> cplx {
    const double bs = beta * std::sin(t);
    return (z + bs) / (root(t) + w);
  };
  const cplx pole = std::numbers::pi * w / sqrt_cut(z, beta);
  const cplx v96 = quad::integrate<96>(f, -half_pi, half_pi);
  const cplx v192 = quad::integrate<192>(f, -half_pi, half_pi);
  return {v192 + pole, std::abs(v192 - v96)};
}

inline cplx cauchy_intermediate(double tau, cplx z) {
  return (1.0 + tau) / sqrt_cut(z, 1.0) - 0.5 * tau * log_ratio_pm1(z);
}

inline cplx cauchy_attractive(double tau, double beta, cplx z) {
  const double c = attractive_cos_beta(tau);
  const cplx s = sqrt_cut(z, beta);
  // (s + c)/(z + 1) = (z - 1)/(s - c); pick the form without a vanishing denominator.
  const cplx w = (z.real() >= 0.0) ? (s + c) / (z + 1.0) : (z - 1.0) / (s - c);
  return tau * std::log(w);
}

inline cplx cauchy_repulsive(double tau, double beta, cplx z) {
  if (z.imag() == 0.0 && std::abs(z.real()) < beta) {
    // Real gap point: the principal-value form of the inner integral.
    const double x = z.real();
    const double hard = (1.0 - x) * (1.0 + x);
    const double r = std::sqrt((beta - x) * (beta + x) / hard);
    const double pv = 2.0 * x * specfun::integral_I(std::sqrt(hard), beta);
    return 0.5 * tau * r * pv - tau * std::atanh(x);
  }
  const InnerIntegral j = repulsive_inner(z, beta);
  return 0.5 * tau * ratio_root(z, beta) * j.value - 0.5 * tau * log_ratio_pm1(z);
}

}  // namespace detail

/// C(z) off the support. Points within 1e-13 of the support are rejected.
inline cplx cauchy(double tau, cplx z) {
  const Support sup = support(tau);
  z = detail::canonical(z);
  detail::reject_on_support(sup, z, "cauchy");
  switch (sup.shape) {
    case SupportShape::FullInterval: return detail::cauchy_intermediate(tau, z);
    case SupportShape::OneCut: return detail::cauchy_attractive(tau, sup.beta, z);
    case SupportShape::TwoCut: return detail::cauchy_repulsive(tau, sup.beta, z);
  }
  return {};
}

/// GL96 vs GL192 discrepancy of the two-cut inner integral at z (0 elsewhere).
inline double cauchy_error_estimate(double tau, cplx z) {
  const Support sup = support(tau);
  if (sup.shape != SupportShape::TwoCut) return 0.0;
  z = detail::canonical(z);
  detail::reject_on_support(sup, z, "cauchy_error_estimate");
  if (z.imag() == 0.0 && std::abs(z.real()) < sup.beta) return 0.0;
  return 0.5 * std::abs(tau) * std::abs(detail::repulsive_inner(z, sup.beta).error);
}

/// Primitive of the uniform-measure transform:
/// (1/2)(z+1)log(z+1) - (1/2)(z-1)log(z-1) - 1.
inline cplx g_lebesgue(cplx z) {
  z = detail::canonical(z);
  detail::reject_on_cut(z, -1.0, 1.0, "g_lebesgue");
  return 0.5 * (z + 1.0) * std::log(z + 1.0) - 0.5 * (z - 1.0) * std::log(z - 1.0) - 1.0;
}

/// g(z) = log z + O(1/z) with g' = C. Not available in the two-cut regime.
inline cplx g_function(double tau, cplx z) {
  const Support sup = support(tau);
  z = detail::canonical(z);
  detail::reject_on_support(sup, z, "g_function");
  switch (sup.shape) {
    case SupportShape::FullInterval:
      return (1.0 + tau) * std::log(phi_joukowski(z) / 2.0) - tau * g_lebesgue(z);
    case SupportShape::OneCut: {
      const double beta = sup.beta;
      const double c = attractive_cos_beta(tau);
      const cplx s = sqrt_cut(z, beta);
      const cplx cz = detail::cauchy_attractive(tau, beta, z);
      return z * cz + (1.0 + tau) * std::log(beta / 2.0 * phi_joukowski(z / beta)) -
             tau * std::log((s + z * c) / (1.0 + c)) - 1.0;
    }
    case SupportShape::TwoCut:
      throw DomainError("g_function: no closed form in the two-cut regime");
  }
  return {};
}

}  // namespace logeq
