#pragma once

// Gauss-Legendre rules (fixed and globally adaptive) used throughout the
// library. Nodes are computed once per order by Newton iteration on P_n.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <queue>
#include <type_traits>
#include <vector>

namespace logeq::quad {

template <std::size_t N>
struct GaussLegendreRule {
  std::array<double, N> nodes{};    // ascending, on [-1, 1]
  std::array<double, N> weights{};
};

namespace detail {

template <std::size_t N>
GaussLegendreRule<N> build_gauss_legendre() {
  static_assert(N >= 2);
  GaussLegendreRule<N> rule;
  const std::size_t half = (N + 1) / 2;
  for (std::size_t i = 0; i < half; ++i) {
    // Tricomi initial guess, then Newton on the three-term recurrence.
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(N) + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (std::size_t k = 2; k <= N; ++k) {
        const double kk = static_cast<double>(k);
        const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
        p0 = p1;
        p1 = p2;
      }
      dp = static_cast<double>(N) * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged node for the weight.
    double p0 = 1.0;
    double p1 = x;
    for (std::size_t k = 2; k <= N; ++k) {
      const double kk = static_cast<double>(k);
      const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
      p0 = p1;
      p1 = p2;
    }
    dp = static_cast<double>(N) * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[N - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[N - 1 - i] = w;
  }
  if (N % 2 == 1) rule.nodes[N / 2] = 0.0;
  return rule;
}

}  // namespace detail

/// Cached N-point Gauss-Legendre rule on [-1, 1].
template <std::size_t N>
const GaussLegendreRule<N>& gauss_legendre() {
  static const GaussLegendreRule<N> rule = detail::build_gauss_legendre<N>();
  return rule;
}

/// N-point Gauss-Legendre approximation of the integral of f over [a, b].
/// Works for any f returning a type closed under + and scalar *.
template <std::size_t N, class F>
auto integrate(F&& f, double a, double b) {
  using R = std::decay_t<decltype(f(a))>;
  const auto& rule = gauss_legendre<N>();
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  R sum{};
  for (std::size_t i = 0; i < N; ++i) {
    sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  }
  return sum * half;
}

template <class R = double>
struct AdaptiveResult {
  R value{};
  double error = 0.0;
  int intervals = 0;
};

/// Globally adaptive quadrature: repeatedly bisects the subinterval with the
/// largest error estimate (|G20 - G10|) until the summed estimate drops below
/// max(abs_tol, rel_tol * |value|). Endpoint singularities of logarithmic or
/// inverse-square-root type are resolved by geometric refinement.
template <class F>
auto integrate_adaptive(F&& f, double a, double b, double abs_tol = 1e-13, double rel_tol = 1e-13,
                        int max_intervals = 4000) {
  using R = std::decay_t<decltype(f(a))>;
  struct Segment {
    double lo, hi;
    R value;
    double error;
    bool operator<(const Segment& o) const { return error < o.error; }
  };
  auto eval = [&](double lo, double hi) {
    const R coarse = integrate<10>(f, lo, hi);
    const R fine = integrate<20>(f, lo, hi);
    return Segment{lo, hi, fine, std::abs(fine - coarse)};
  };

  AdaptiveResult<R> out;
  if (a == b) return out;
  std::priority_queue<Segment> heap;
  Segment first = eval(a, b);
  R total = first.value;
  double err = first.error;
  heap.push(first);
  int count = 1;
  while (err > std::max(abs_tol, rel_tol * std::abs(total)) && count < max_intervals) {
    Segment s = heap.top();
    heap.pop();
    const double m = 0.5 * (s.lo + s.hi);
    if (m <= s.lo || m >= s.hi) {
      // Interval cannot be split further in double precision.
      heap.push(Segment{s.lo, s.hi, s.value, 0.0});
      err -= s.error;
      continue;
    }
    Segment left = eval(s.lo, m);
    Segment right = eval(m, s.hi);
    total += left.value + right.value - s.value;
    err += left.error + right.error - s.error;
    heap.push(left);
    heap.push(right);
    ++count;
  }
  // Re-sum to shed accumulated cancellation from the running updates.
  R value{};
  double error = 0.0;
  while (!heap.empty()) {
    value += heap.top().value;
    error += heap.top().error;
    heap.pop();
  }
  out.value = value;
  out.error = error;
  out.intervals = count;
  return out;
}

}  // namespace logeq::quad
