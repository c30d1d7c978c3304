#pragma once

// Branches of the multivalued functions appearing in the Cauchy transforms.
// Every root is a product of principal half powers so that the cut sits
// exactly on the segment between the branch points.

#include <cmath>
#include <complex>
#include <string>

#include "logeq/error.hpp"

namespace logeq {

using cplx = std::complex<double>;

/// Points closer than this to a cut are rejected.
inline constexpr double kCutTolerance = 1e-13;

namespace detail {

// Replace -0.0 imaginary parts by +0.0 so real inputs land on the upper side
// of every principal cut consistently.
inline cplx canonical(cplx z) {
  if (z.imag() == 0.0) return {z.real(), 0.0};
  return z;
}

inline double distance_to_segment(cplx z, double lo, double hi) {
  const double x = z.real();
  const double dx = (x < lo) ? lo - x : (x > hi ? x - hi : 0.0);
  return std::hypot(dx, z.imag());
}

inline void reject_on_cut(cplx z, double lo, double hi, const char* who) {
  if (distance_to_segment(z, lo, hi) <= kCutTolerance) {
    throw DomainError(std::string(who) + ": point lies on the branch cut [" + std::to_string(lo) +
                      ", " + std::to_string(hi) + "]");
  }
}

}  // namespace detail

/// (z^2 - a^2)^{1/2} with cut [-a, a], ~ z at infinity.
inline cplx sqrt_cut(cplx z, double a) {
  if (!(a > 0.0)) throw DomainError("sqrt_cut: half-width must be positive");
  z = detail::canonical(z);
  detail::reject_on_cut(z, -a, a, "sqrt_cut");
  return std::sqrt(z - a) * std::sqrt(z + a);
}

/// Inverse Joukowski map z + (z^2 - 1)^{1/2}; |Phi| > 1 off [-1, 1].
inline cplx phi_joukowski(cplx z) { return detail::canonical(z) + sqrt_cut(z, 1.0); }

/// ((z^2 - beta^2)/(z^2 - 1))^{1/2}, analytic off [-1,-beta] U [beta,1],
/// tending to 1 at infinity and positive on (-beta, beta).
inline cplx ratio_root(cplx z, double beta) {
  if (!(beta > 0.0 && beta < 1.0)) throw DomainError("ratio_root: beta must lie in (0, 1)");
  z = detail::canonical(z);
  detail::reject_on_cut(z, -1.0, -beta, "ratio_root");
  detail::reject_on_cut(z, beta, 1.0, "ratio_root");
  // Both factors flip sign across (-beta, beta), so the quotient is continuous there.
  const cplx num = std::sqrt(z - beta) * std::sqrt(z + beta);
  const cplx den = std::sqrt(z - 1.0) * std::sqrt(z + 1.0);
  return num / den;
}

/// Principal log((z + 1)/(z - 1)), cut [-1, 1]. Uses a log1p form for large |z|.
inline cplx log_ratio_pm1(cplx z) {
  z = detail::canonical(z);
  if (std::abs(z) > 2.0) {
    const cplx u = 2.0 / (z - 1.0);
    const cplx w = 1.0 + u;
    if (w == 1.0) return u;
    return std::log(w) * u / (w - 1.0);
  }
  return std::log((z + 1.0) / (z - 1.0));
}

}  // namespace logeq
