#pragma once

// Two-cut equilibrium constant: moment coefficients
//   c_k = int_0^1 sqrt((1 - beta^2 s^2)/(1 - s^2)) s^k ds,
// the power series for omega built from them, and an independent
// double-integral route.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "logeq/error.hpp"
#include "logeq/quadrature.hpp"
#include "logeq/regime.hpp"
#include "logeq/specfun.hpp"

namespace logeq::series {

struct InitialValues {
  double c0;
  double c1;
  double c2;
};

struct CoeffTable {
  double beta = 0.0;
  std::vector<double> values;  // c_0 .. c_K
  int K = 0;
  // First index taken from the 2F1 closed form after the recurrence failed
  // validation; -1 if the recurrence held throughout.
  int fallback_from = -1;
};

struct SeriesResult {
  double value = 0.0;
  int terms_used = 0;
  double last_term = 0.0;
  double tail_bound = 0.0;  // last_term * beta^2 / (1 - beta^2)
};

/// c_k by quadrature of the theta form int_0^{pi/2} sqrt(1 - beta^2 sin^2) sin^k dtheta.
inline double quadrature_ck(int k, double beta) {
  const double kp = std::sqrt((1.0 - beta) * (1.0 + beta));
  auto f = [k, kp](double t) {
    const double s = std::sin(t);
    return std::hypot(std::cos(t), kp * s) * std::pow(s, k);
  };
  return quad::integrate_adaptive(f, 0.0, std::numbers::pi / 2.0, 1e-15, 1e-15).value;
}

inline double c1_closed_form(double beta) {
  return 0.5 + (1.0 - beta * beta) / (2.0 * beta) * std::atanh(beta);
}

inline double c2_closed_form(double beta) {
  const double b2 = beta * beta;
  return ((2.0 * b2 - 1.0) * specfun::complete_E(beta) +
          (1.0 - b2) * specfun::complete_K(beta)) / (3.0 * b2);
}

/// Throws InconsistencyError unless each of c0, c1, c2 is within 1e-8 of quadrature.
inline void validate_initial_values(double beta, const InitialValues& v) {
  const double got[3] = {v.c0, v.c1, v.c2};
  for (int k = 0; k < 3; ++k) {
    const double ref = quadrature_ck(k, beta);
    if (!(std::abs(got[k] - ref) <= 1e-8)) {
      throw InconsistencyError("c_" + std::to_string(k) + " = " + std::to_string(got[k]) +
                               " disagrees with quadrature " + std::to_string(ref));
    }
  }
}

inline InitialValues c_init(double beta, double tau) {
  if (!(beta > 0.0 && beta < 1.0)) throw DomainError("c_init: beta must lie in (0, 1)");
  const InitialValues v{specfun::complete_E(beta), c1_closed_form(beta), c2_closed_form(beta)};
  if (!(std::abs(v.c0 - (1.0 + 1.0 / tau)) <= 1e-9)) {
    throw DomainError("c_init: beta does not satisfy E(beta) = 1 + 1/tau");
  }
  validate_initial_values(beta, v);
  return v;
}

/// c_0 .. c_K by the forward three-term recurrence
///   beta^2 (k+3) c_{k+2} = [k + beta^2 (k+2)] c_k - (k-1) c_{k-2}.
/// The recurrence amplifies errors by about 1/beta^2 per step pair, so c_k
/// at k = 0, 1 mod 10 (up to k = 200, then at doubling k) is checked against
/// the 2F1 form; after a failed check everything past the last good checkpoint
/// is rebuilt by the backward recurrence from 2F1 seeds.
inline CoeffTable c_recurrence(double beta, double tau, int K) {
  if (K < 3) throw DomainError("c_recurrence: K must be at least 3");
  const double b2 = beta * beta;
  if (!(b2 > 1e-10)) throw DomainError("c_recurrence: beta^2 too small for the recurrence");
  const InitialValues init = c_init(beta, tau);

  CoeffTable table;
  table.beta = beta;
  table.K = K;
  auto& c = table.values;
  c.assign(static_cast<std::size_t>(K) + 1, 0.0);
  c[0] = init.c0;
  c[1] = init.c1;
  c[2] = init.c2;
  c[3] = ((1.0 + 3.0 * b2) * init.c1 - 1.0) / (4.0 * b2);

  auto closed = [beta](int k) { return specfun::moment_coefficient(k, beta); };
  auto agrees = [&](int k) {
    const double ref = closed(k);
    return std::abs(c[k] - ref) <= 1e-10 * std::abs(ref);
  };

  int last_good = 3;
  int next_check = 11;
  int k = 4;
  for (; k <= K; ++k) {
    const int j = k - 2;
    c[k] = ((j + b2 * (j + 2)) * c[j] - (j - 1) * c[j - 2]) / (b2 * (j + 3));
    if (k == next_check || k == K) {
      if (agrees(k - 1) && agrees(k)) {
        last_good = k;
      } else {
        break;
      }
      next_check = k < 200 ? k + 10 : 2 * (k - 1) + 1;
    }
  }
  if (k <= K) {
    // The forward direction is unstable but the backward one is not: refill
    // from the top in segments, each seeded by four 2F1 values.
    table.fallback_from = last_good + 1;
    constexpr int kSegment = 20000;
    for (int top = K; top > last_good; top -= kSegment) {
      const int lo = std::max(last_good + 1, top - kSegment + 1);
      for (int i = top; i >= lo && i > top - 4; --i) c[i] = closed(i);
      for (int i = top - 4; i >= lo; --i) {
        c[i] = ((i + 2 + b2 * (i + 4)) * c[i + 2] - b2 * (i + 5) * c[i + 4]) / (i + 1);
      }
    }
  }
  return table;
}

namespace detail {

inline double omega_prefactor(double tau, double beta) {
  return 0.5 * (1.0 + tau) *
         (std::log(4.0) - std::log1p(-beta * beta) - 2.0 * beta * std::atanh(beta));
}

inline std::vector<double> coefficients(double beta, double tau, int K) {
  if (beta * beta > 1e-10) return c_recurrence(beta, tau, K).values;
  std::vector<double> c(static_cast<std::size_t>(K) + 1);
  for (int i = 0; i <= K; ++i) c[i] = specfun::moment_coefficient(i, beta);
  return c;
}

}  // namespace detail

/// omega_tau = ((1+tau)/2) log(4/(1-b^2) ((1-b)/(1+b))^b) + tau sum_k c_{2k-1} c_{2k} b^{2k}.
/// Terms are summed up to and including the first one below tol.
inline SeriesResult omega_series(double tau, double tol = 1e-12) {
  if (!(tau > kTauCritical)) throw DomainError("omega_series: requires tau > 2/(pi-2)");
  if (!(tol >= 1e-14)) throw DomainError("omega_series: tol must be at least 1e-14");
  const double beta = logeq::support(tau).beta;
  const double b2 = beta * beta;

  // Terms decay like tau b^{2k}; size the table to reach tol, then grow if short.
  int pairs = static_cast<int>(std::ceil(std::log(tol / (2.0 * tau)) / std::log(b2))) + 8;
  pairs = std::max(pairs, 4);
  constexpr int kMaxPairs = 1 << 20;
  if (!(pairs <= kMaxPairs)) {
    throw ConvergenceError("omega_series: beta^2 too close to 1 for the series at tau = " +
                           std::to_string(tau));
  }
  for (;;) {
    const int K = 2 * pairs;
    const std::vector<double> c = detail::coefficients(beta, tau, K);
    double sum = 0.0;
    double power = 1.0;
    for (int k = 1; k <= pairs; ++k) {
      power *= b2;
      const double term = tau * c[2 * k - 1] * c[2 * k] * power;
      sum += term;
      if (term < tol) {
        SeriesResult r;
        r.value = detail::omega_prefactor(tau, beta) + sum;
        r.terms_used = k;
        r.last_term = term;
        r.tail_bound = term * b2 / (1.0 - b2);
        return r;
      }
    }
    if (pairs > kMaxPairs) throw ConvergenceError("omega_series: series did not reach tolerance");
    pairs *= 2;
  }
}

/// omega_tau = W_1 + W_2 after x = 1/t (outer) and s = sin theta (inner):
///   W_1 = (tau (1-b^2)/2) int_0^{pi/2} sin p A(sin p) / (cos p + sqrt(1 - b^2 sin^2 p)) dp
///   W_2 = (tau b/2) int_0^1 B(t) dt
/// with A(t) = int sqrt(1 - b^2 sin^2 th)/(1 - t b sin th) dth and
///      B(t) = int sqrt(1 - b^2 sin^2 th) sin th/(1 - t b sin th) dth over [-pi/2, pi/2].
inline double omega_integral(double tau) {
  if (!(tau > kTauCritical)) throw DomainError("omega_integral: requires tau > 2/(pi-2)");
  const double beta = logeq::support(tau).beta;
  const double kp = std::sqrt((1.0 - beta) * (1.0 + beta));
  const double half_pi = std::numbers::pi / 2.0;
  constexpr double kTol = 1e-14;

  auto inner = [beta, kp, half_pi](double t, bool odd) {
    auto f = [=](double th) {
      const double s = std::sin(th);
      const double root = std::hypot(std::cos(th), kp * s);
      return root * (odd ? s : 1.0) / (1.0 - t * beta * s);
    };
    return quad::integrate_adaptive(f, -half_pi, half_pi, kTol, kTol).value;
  };

  auto w1_integrand = [&](double p) {
    const double s = std::sin(p);
    return s * inner(s, false) / (std::cos(p) + std::hypot(std::cos(p), kp * s));
  };
  auto w2_integrand = [&](double t) { return inner(t, true); };

  const double w1 = quad::integrate_adaptive(w1_integrand, 0.0, half_pi, 1e-13, 1e-13).value;
  const double w2 = quad::integrate_adaptive(w2_integrand, 0.0, 1.0, 1e-13, 1e-13).value;
  return 0.5 * tau * kp * kp * w1 + 0.5 * tau * beta * w2;
}

}  // namespace logeq::series
