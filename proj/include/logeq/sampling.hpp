#pragma once

// Sample grids over the support and reproducible number formatting for
// tabular output.

#include <charconv>
#include <cmath>
#include <numbers>
#include <string>
#include <system_error>
#include <vector>

#include "logeq/error.hpp"
#include "logeq/regime.hpp"

namespace logeq {

enum class GridKind { Chebyshev, Uniform };

/// n points on [lo, hi], symmetric about the center (which is hit exactly for odd n).
/// Chebyshev points cluster toward both ends.
inline std::vector<double> interval_grid(double lo, double hi, int n, GridKind kind) {
  if (n < 1) throw DomainError("interval_grid: n must be positive");
  const double c = 0.5 * (lo + hi);
  const double h = 0.5 * (hi - lo);
  if (n == 1) return {c};
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) {
    const double k = 2.0 * i - (n - 1);  // odd symmetric integer offsets
    const double u = (kind == GridKind::Chebyshev)
                         ? std::sin(std::numbers::pi * k / (2.0 * (n - 1)))
                         : k / (n - 1);
    x[i] = c + h * u;
  }
  return x;
}

/// n points over the open support, each interval inset by 1e-6 of its width.
/// A two-cut support gets n/2 points on the left interval and the rest on the right.
inline std::vector<double> support_grid(const Support& sup, int n, GridKind kind) {
  if (n < 2) throw DomainError("support_grid: n must be at least 2");
  const auto intervals = sup.intervals();
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t k = 0; k < intervals.size(); ++k) {
    const auto [a, b] = intervals[k];
    const double inset = 1e-6 * (b - a);
    int m = n;
    if (intervals.size() == 2) m = (k == 0) ? n / 2 : n - n / 2;
    for (double x : interval_grid(a + inset, b - inset, m, kind)) out.push_back(x);
  }
  return out;
}

/// Shortest decimal string that reads back to the same double; "-0" is printed as "0".
inline std::string format_number(double v) {
  if (v == 0.0) v = 0.0;
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  if (res.ec != std::errc{}) throw DomainError("format_number: conversion failed");
  return std::string(buf, res.ptr);
}

}  // namespace logeq
