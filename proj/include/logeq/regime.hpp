#pragma once

// Regime classification and support geometry as functions of tau.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <mutex>
#include <numbers>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <boost/math/tools/roots.hpp>

#include "logeq/error.hpp"
#include "logeq/specfun.hpp"

namespace logeq {

enum class Regime { Attractive, Intermediate, Repulsive };
enum class SupportShape { FullInterval, OneCut, TwoCut };

inline std::string to_string(Regime r) {
  switch (r) {
    case Regime::Attractive: return "attractive";
    case Regime::Intermediate: return "intermediate";
    case Regime::Repulsive: return "repulsive";
  }
  return "unknown";
}

inline std::string to_string(SupportShape s) {
  switch (s) {
    case SupportShape::FullInterval: return "full-interval";
    case SupportShape::OneCut: return "one-cut";
    case SupportShape::TwoCut: return "two-cut";
  }
  return "unknown";
}

/// 2/(pi - 2): the one-interval/two-interval transition.
inline constexpr double kTauCritical = 2.0 / (std::numbers::pi - 2.0);

struct Support {
  SupportShape shape = SupportShape::FullInterval;
  double beta = 1.0;

  /// Closed intervals making up the support, left to right.
  std::vector<std::pair<double, double>> intervals() const {
    switch (shape) {
      case SupportShape::FullInterval: return {{-1.0, 1.0}};
      case SupportShape::OneCut: return {{-beta, beta}};
      case SupportShape::TwoCut: return {{-1.0, -beta}, {beta, 1.0}};
    }
    return {};
  }

  bool contains(double x) const {
    for (auto [a, b] : intervals()) {
      if (x >= a && x <= b) return true;
    }
    return false;
  }

  bool contains_interior(double x) const {
    for (auto [a, b] : intervals()) {
      if (x > a && x < b) return true;
    }
    return false;
  }
};

inline void require_finite(double tau, const char* who) {
  if (!std::isfinite(tau)) throw DomainError(std::string(who) + ": tau must be finite");
}

/// tau = -1 and tau = 2/(pi-2) are both Intermediate.
inline Regime classify_regime(double tau) {
  require_finite(tau, "classify_regime");
  if (tau < -1.0) return Regime::Attractive;
  if (tau <= kTauCritical) return Regime::Intermediate;
  return Regime::Repulsive;
}

/// sqrt(1 - beta^2) = (1 + tau)/tau for tau < -1.
inline double attractive_cos_beta(double tau) { return (1.0 + tau) / tau; }

inline double attractive_beta(double tau) {
  if (!(tau < -1.0)) throw DomainError("attractive_beta: requires tau < -1");
  const double c = attractive_cos_beta(tau);
  return std::sqrt((1.0 - c) * (1.0 + c));
}

namespace detail {

// 1/tau_c - 1/tau, formed as (tau - tau_c)/(tau tau_c) to keep accuracy near tau_c.
inline double critical_gap(double tau) { return (tau - kTauCritical) / (tau * kTauCritical); }

// pi/2 - E(k). Power series for small k avoids the cancellation of the difference.
inline double elliptic_deficit(double k) {
  if (k <= 0.5) {
    const double m = k * k;
    double ratio = 1.0;  // ((2n-1)!!/(2n)!!)^2 m^n
    double sum = 0.0;
    for (int n = 1; n < 200; ++n) {
      const double f = (2.0 * n - 1.0) / (2.0 * n);
      ratio *= f * f * m;
      const double term = ratio / (2.0 * n - 1.0);
      sum += term;
      if (term < 1e-17 * sum) break;
    }
    return std::numbers::pi / 2.0 * sum;
  }
  return std::numbers::pi / 2.0 - specfun::complete_E(k);
}

}  // namespace detail

/// Initial guess from inverting E(b) = pi/2 (1 - b^2/4 - 3 b^4/64 - ...).
inline double beta_series_guess(double tau) {
  require_finite(tau, "beta_series_guess");
  const double alpha = 2.0 / std::numbers::pi * detail::critical_gap(tau);
  if (!(alpha > 0.0)) return 0.0;
  const double g = 2.0 * std::sqrt(alpha) * (1.0 - 3.0 / 8.0 * alpha - 17.0 / 128.0 * alpha * alpha);
  return std::clamp(g, 0.0, std::nextafter(1.0, 0.0));
}

/// Unique beta in (0, 1) with E(beta) = 1 + 1/tau, for tau > 2/(pi-2).
inline double solve_beta_repulsive(double tau) {
  require_finite(tau, "solve_beta_repulsive");
  if (!(tau > kTauCritical)) {
    throw DomainError("solve_beta_repulsive: no two-cut solution for tau <= 2/(pi-2)");
  }
  const double target = detail::critical_gap(tau);
  auto f = [target](double b) { return detail::elliptic_deficit(b) - target; };

  const double guess = beta_series_guess(tau);
  double lo = std::max(0.0, guess - 0.1);
  double hi = std::min(1.0, guess + 0.1);
  // f is increasing with f(0) < 0 < f(1).
  if (f(lo) > 0.0) lo = 0.0;
  if (f(hi) < 0.0) hi = 1.0;
  const double flo = f(lo);
  const double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;

  std::uintmax_t max_iter = 200;
  auto stop = [](double a, double b) { return std::abs(b - a) <= 1e-13; };
  const auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, stop, max_iter);
  if (max_iter >= 200) throw ConvergenceError("solve_beta_repulsive: bracketing did not converge");
  return 0.5 * (a + b);
}

/// Thread-safe memo of solve_beta_repulsive keyed by the bit pattern of tau.
class BetaCache {
 public:
  double get(double tau) {
    const auto key = std::bit_cast<std::uint64_t>(tau);
    {
      std::shared_lock lock(mutex_);
      if (auto it = table_.find(key); it != table_.end()) return it->second;
    }
    const double beta = solve_beta_repulsive(tau);
    std::unique_lock lock(mutex_);
    table_.try_emplace(key, beta);
    return beta;
  }

  std::size_t size() const {
    std::shared_lock lock(mutex_);
    return table_.size();
  }

  static BetaCache& global() {
    static BetaCache cache;
    return cache;
  }

 private:
  mutable std::shared_mutex mutex_;
  std::unordered_map<std::uint64_t, double> table_;
};

inline Support support(double tau) {
  switch (classify_regime(tau)) {
    case Regime::Attractive: return {SupportShape::OneCut, attractive_beta(tau)};
    case Regime::Intermediate: return {SupportShape::FullInterval, 1.0};
    case Regime::Repulsive: return {SupportShape::TwoCut, BetaCache::global().get(tau)};
  }
  return {};
}

}  // namespace logeq
