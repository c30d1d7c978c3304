#pragma once

// Complete elliptic integrals, the auxiliary integral
//   I(a, k) = int_0^{pi/2} dtheta / (a + sqrt(1 - k^2 sin^2 theta)),
// and the 2F1(-1/2, (k+1)/2; k/2 + 1; m) series behind the moment
// coefficients of the two-cut equilibrium constant.
//
// All functions take the modulus k (not the parameter m = k^2).

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "logeq/error.hpp"
#include "logeq/quadrature.hpp"

namespace logeq::specfun {

namespace detail {

inline constexpr double kModulusGuard = 1e-15;

inline double checked_modulus(double k, const char* who) {
  if (!(k >= -kModulusGuard && k <= 1.0 + kModulusGuard)) {
    throw DomainError(std::string(who) + ": modulus must lie in [0, 1], got " + std::to_string(k));
  }
  return std::clamp(k, 0.0, 1.0);
}

// Complementary modulus sqrt(1 - k^2) without cancellation near k = 1.
inline double complementary(double k) { return std::sqrt((1.0 - k) * (1.0 + k)); }

}  // namespace detail

// ---------------------------------------------------------------------------
// Carlson symmetric forms (duplication algorithm).

/// R_C(x, y) for x >= 0, y > 0.
inline double carlson_rc(double x, double y) {
  constexpr double kTol = 0.0012;
  double xt = x;
  double yt = y;
  double ave = 0.0;
  double s = 0.0;
  do {
    const double lambda = 2.0 * std::sqrt(xt) * std::sqrt(yt) + yt;
    xt = 0.25 * (xt + lambda);
    yt = 0.25 * (yt + lambda);
    ave = (xt + yt + yt) / 3.0;
    s = (yt - ave) / ave;
  } while (std::abs(s) > kTol);
  return (1.0 + s * s * (0.3 + s * (1.0 / 7.0 + s * (0.375 + s * 9.0 / 22.0)))) / std::sqrt(ave);
}

/// R_F(x, y, z); at most one argument may vanish.
inline double carlson_rf(double x, double y, double z) {
  constexpr double kTol = 0.0015;
  double xt = x, yt = y, zt = z;
  double ave = 0.0, dx = 0.0, dy = 0.0, dz = 0.0;
  do {
    const double sx = std::sqrt(xt), sy = std::sqrt(yt), sz = std::sqrt(zt);
    const double lambda = sx * (sy + sz) + sy * sz;
    xt = 0.25 * (xt + lambda);
    yt = 0.25 * (yt + lambda);
    zt = 0.25 * (zt + lambda);
    ave = (xt + yt + zt) / 3.0;
    dx = (ave - xt) / ave;
    dy = (ave - yt) / ave;
    dz = (ave - zt) / ave;
  } while (std::max({std::abs(dx), std::abs(dy), std::abs(dz)}) > kTol);
  const double e2 = dx * dy - dz * dz;
  const double e3 = dx * dy * dz;
  return (1.0 + (e2 / 24.0 - 0.1 - 3.0 / 44.0 * e3) * e2 + e3 / 14.0) / std::sqrt(ave);
}

/// R_D(x, y, z) = R_J(x, y, z, z).
inline double carlson_rd(double x, double y, double z) {
  constexpr double kTol = 0.0015;
  constexpr double c1 = 3.0 / 14.0, c2 = 1.0 / 6.0, c3 = 9.0 / 22.0, c4 = 3.0 / 26.0;
  constexpr double c5 = 0.25 * c3, c6 = 1.5 * c4;
  double xt = x, yt = y, zt = z;
  double sum = 0.0, fac = 1.0;
  double ave = 0.0, dx = 0.0, dy = 0.0, dz = 0.0;
  do {
    const double sx = std::sqrt(xt), sy = std::sqrt(yt), sz = std::sqrt(zt);
    const double lambda = sx * (sy + sz) + sy * sz;
    sum += fac / (sz * (zt + lambda));
    fac *= 0.25;
    xt = 0.25 * (xt + lambda);
    yt = 0.25 * (yt + lambda);
    zt = 0.25 * (zt + lambda);
    ave = 0.2 * (xt + yt + 3.0 * zt);
    dx = (ave - xt) / ave;
    dy = (ave - yt) / ave;
    dz = (ave - zt) / ave;
  } while (std::max({std::abs(dx), std::abs(dy), std::abs(dz)}) > kTol);
  const double ea = dx * dy;
  const double eb = dz * dz;
  const double ec = ea - eb;
  const double ed = ea - 6.0 * eb;
  const double ee = ed + ec + ec;
  return 3.0 * sum +
         fac * (1.0 + ed * (-c1 + c5 * ed - c6 * dz * ee) +
                dz * (c2 * ee + dz * (-c3 * ec + dz * c4 * ea))) /
             (ave * std::sqrt(ave));
}

/// R_J(x, y, z, p) for p > 0.
inline double carlson_rj(double x, double y, double z, double p) {
  constexpr double kTol = 0.0015;
  constexpr double c1 = 3.0 / 14.0, c2 = 1.0 / 3.0, c3 = 3.0 / 22.0, c4 = 3.0 / 26.0;
  constexpr double c5 = 0.75 * c3, c6 = 1.5 * c4, c7 = 0.5 * c2, c8 = c3 + c3;
  double xt = x, yt = y, zt = z, pt = p;
  double sum = 0.0, fac = 1.0;
  double ave = 0.0, dx = 0.0, dy = 0.0, dz = 0.0, dp = 0.0;
  do {
    const double sx = std::sqrt(xt), sy = std::sqrt(yt), sz = std::sqrt(zt);
    const double lambda = sx * (sy + sz) + sy * sz;
    const double alpha = std::pow(pt * (sx + sy + sz) + sx * sy * sz, 2);
    const double beta = pt * std::pow(pt + lambda, 2);
    sum += fac * carlson_rc(alpha, beta);
    fac *= 0.25;
    xt = 0.25 * (xt + lambda);
    yt = 0.25 * (yt + lambda);
    zt = 0.25 * (zt + lambda);
    pt = 0.25 * (pt + lambda);
    ave = 0.2 * (xt + yt + zt + pt + pt);
    dx = (ave - xt) / ave;
    dy = (ave - yt) / ave;
    dz = (ave - zt) / ave;
    dp = (ave - pt) / ave;
  } while (std::max({std::abs(dx), std::abs(dy), std::abs(dz), std::abs(dp)}) > kTol);
  const double ea = dx * (dy + dz) + dy * dz;
  const double eb = dx * dy * dz;
  const double ec = dp * dp;
  const double ed = ea - 3.0 * ec;
  const double ee = eb + 2.0 * dp * (ea - ec);
  return 3.0 * sum +
         fac * (1.0 + ed * (-c1 + c5 * ed - c6 * ee) + eb * (c7 + dp * (-c8 + dp * c4)) +
                dp * ea * (c2 - dp * c3) - c2 * dp * ec) /
             (ave * std::sqrt(ave));
}

// ---------------------------------------------------------------------------
// Complete elliptic integrals.

namespace detail {

struct AgmResult {
  double k_value;  // K(k)
  double e_value;  // E(k)
};

// Arithmetic-geometric mean of (1, k'); accumulates sum 2^{n-1} c_n^2 for E.
inline AgmResult agm_elliptic(double k) {
  double a = 1.0;
  double b = complementary(k);
  double c = k;
  double weight = 0.5;
  double sum = weight * c * c;
  for (int n = 0; n < 64; ++n) {
    if (std::abs(a - b) <= 1e-15 * a) break;
    const double an = 0.5 * (a + b);
    const double bn = std::sqrt(a * b);
    c = 0.5 * (a - b);
    a = an;
    b = bn;
    weight *= 2.0;
    sum += weight * c * c;
  }
  const double kk = std::numbers::pi / (2.0 * a);
  return {kk, kk * (1.0 - sum)};
}

}  // namespace detail

/// Complete elliptic integral of the second kind, E(k) on [0, 1].
inline double complete_E(double k) {
  k = detail::checked_modulus(k, "complete_E");
  if (k == 1.0) return 1.0;
  if (k == 0.0) return std::numbers::pi / 2.0;
  if (k > 0.99) {
    // AGM sum cancels against a large K near k = 1; Carlson form is stable.
    const double kp2 = (1.0 - k) * (1.0 + k);
    return carlson_rf(0.0, kp2, 1.0) - k * k / 3.0 * carlson_rd(0.0, kp2, 1.0);
  }
  return detail::agm_elliptic(k).e_value;
}

/// Complete elliptic integral of the first kind, K(k) on [0, 1).
inline double complete_K(double k) {
  k = detail::checked_modulus(k, "complete_K");
  if (k >= 1.0 - 1e-12) {
    throw DomainError("complete_K: logarithmic divergence at k = 1");
  }
  return detail::agm_elliptic(k).k_value;
}

/// Complete elliptic integral of the third kind,
///   Pi(n, k) = int_0^{pi/2} dtheta / ((1 - n sin^2) sqrt(1 - k^2 sin^2)),
/// for characteristic n < 1 and 0 <= k < 1.
inline double complete_Pi(double n, double k) {
  k = detail::checked_modulus(k, "complete_Pi");
  if (k >= 1.0) throw DomainError("complete_Pi: modulus must be < 1");
  if (!(n < 1.0)) throw DomainError("complete_Pi: characteristic must be < 1");
  const double kp2 = (1.0 - k) * (1.0 + k);
  const double kk = carlson_rf(0.0, kp2, 1.0);
  if (n == 0.0) return complete_K(k);
  return kk + n / 3.0 * carlson_rj(0.0, kp2, 1.0, 1.0 - n);
}

// ---------------------------------------------------------------------------

/// I(a, k) = int_0^{pi/2} dtheta / (a + sqrt(1 - k^2 sin^2 theta)), a > 0.
inline double integral_I(double a, double k) {
  if (!(a > 0.0)) throw DomainError("integral_I: shift a must be positive");
  k = detail::checked_modulus(k, "integral_I");
  const double kp = detail::complementary(k);
  // sqrt(1 - k^2 sin^2) == hypot(cos, k' sin), exact near theta = pi/2.
  auto integrand = [a, kp](double theta) {
    return 1.0 / (a + std::hypot(std::cos(theta), kp * std::sin(theta)));
  };
  if (k > 0.999) {
    return quad::integrate_adaptive(integrand, 0.0, std::numbers::pi / 2.0, 1e-15, 1e-15).value;
  }
  return quad::integrate<64>(integrand, 0.0, std::numbers::pi / 2.0);
}

/// 2F1(-1/2, (k+1)/2; k/2 + 1; m) by its power series, 0 <= m < 1.
/// Every term after the first is negative.
inline double hyp2F1_ck(int k_index, double m) {
  if (k_index < 0) throw DomainError("hyp2F1_ck: index must be nonnegative");
  if (!(m >= 0.0 && m < 1.0)) throw DomainError("hyp2F1_ck: argument must lie in [0, 1)");
  const double a = -0.5;
  const double b = 0.5 * (k_index + 1);
  const double c = 0.5 * k_index + 1.0;
  double term = 1.0;
  double sum = 1.0;
  for (int n = 0; n < (1 << 22); ++n) {
    term *= (a + n) * (b + n) / ((c + n) * (n + 1.0)) * m;
    sum += term;
    if (std::abs(term) < 1e-16 * std::abs(sum)) return sum;
  }
  throw ConvergenceError("hyp2F1_ck: series did not converge for m = " + std::to_string(m));
}

/// int_0^1 s^k / sqrt(1 - s^2) ds = sqrt(pi) Gamma((k+1)/2) / (2 Gamma(k/2 + 1)).
inline double chebyshev_moment(int k) {
  double p = (k % 2 == 0) ? std::numbers::pi / 2.0 : 1.0;
  for (int j = (k % 2 == 0) ? 2 : 3; j <= k; j += 2) p *= static_cast<double>(j - 1) / j;
  return p;
}

/// c_k = int_0^1 sqrt((1 - m s^2)/(1 - s^2)) s^k ds through its 2F1 closed form.
inline double moment_coefficient(int k, double beta) {
  return chebyshev_moment(k) * hyp2F1_ck(k, beta * beta);
}

}  // namespace logeq::specfun
