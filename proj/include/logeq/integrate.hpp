#pragma once

// Integration against the equilibrium measure. Each support interval is
// parametrized so that density(x) dx becomes a smooth weight in the new
// variable:
//   full interval   x = sin t,                       t in [-pi/2, pi/2]
//   one cut         x = beta sin t,                  t in [-pi/2, pi/2]
//   two cut         x = +-sqrt(beta^2 cos^2 t + sin^2 t),  t in [0, pi/2]
// The last map sends t = 0 to the soft edge and t = pi/2 to the hard edge and
// gives density dx = (tau/pi)(1 - beta^2) sin^2 t I(sqrt(1 - beta^2) cos t, beta) dt.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <vector>

#include "logeq/branches.hpp"
#include "logeq/quadrature.hpp"
#include "logeq/regime.hpp"
#include "logeq/specfun.hpp"

namespace logeq::oracle {

class MeasureMap {
 public:
  struct Piece {
    double t0;
    double t1;
    double sign;  // +1, or -1 for the mirrored left interval of a two-cut support
  };

  explicit MeasureMap(double tau) : tau_(tau), support_(logeq::support(tau)) {
    const double half_pi = std::numbers::pi / 2.0;
    if (support_.shape == SupportShape::TwoCut) {
      pieces_ = {{0.0, half_pi, -1.0}, {0.0, half_pi, 1.0}};
      cos_beta_ = std::sqrt((1.0 - support_.beta) * (1.0 + support_.beta));
    } else {
      pieces_ = {{-half_pi, half_pi, 1.0}};
      if (support_.shape == SupportShape::OneCut) cos_beta_ = attractive_cos_beta(tau);
    }
  }

  double tau() const { return tau_; }
  const Support& support() const { return support_; }
  const std::vector<Piece>& pieces() const { return pieces_; }

  double x(const Piece& p, double t) const {
    switch (support_.shape) {
      case SupportShape::FullInterval: return std::sin(t);
      case SupportShape::OneCut: return support_.beta * std::sin(t);
      case SupportShape::TwoCut:
        return p.sign * std::hypot(support_.beta * std::cos(t), std::sin(t));
    }
    return 0.0;
  }

  /// density(x(t)) * |dx/dt|.
  double weight(double t) const {
    const double beta = support_.beta;
    switch (support_.shape) {
      case SupportShape::FullInterval:
        return (1.0 + tau_) / std::numbers::pi - 0.5 * tau_ * std::cos(t);
      case SupportShape::OneCut: {
        const double ct = beta * std::cos(t);
        return -tau_ / std::numbers::pi * ct * std::atan2(ct, cos_beta_);
      }
      case SupportShape::TwoCut: {
        const double s = std::sin(t);
        const double a = std::max(cos_beta_ * std::cos(t), std::numeric_limits<double>::min());
        return tau_ / std::numbers::pi * cos_beta_ * cos_beta_ * s * s *
               specfun::integral_I(a, beta);
      }
    }
    return 0.0;
  }

  /// Parameter of the point x on piece p (x is clamped into the piece's range).
  double parameter(const Piece& p, double x) const {
    const double beta = support_.beta;
    switch (support_.shape) {
      case SupportShape::FullInterval: return std::asin(std::clamp(x, -1.0, 1.0));
      case SupportShape::OneCut: return std::asin(std::clamp(x / beta, -1.0, 1.0));
      case SupportShape::TwoCut: {
        const double ax = std::clamp(p.sign * x, beta, 1.0);
        const double s2 = (ax - beta) * (ax + beta) / (cos_beta_ * cos_beta_);
        return std::asin(std::sqrt(std::clamp(s2, 0.0, 1.0)));
      }
    }
    return 0.0;
  }

  /// x(t) - xr without cancellation when xr lies on piece p: the difference
  /// is rewritten through sin(t) - sin(t*) with t* the parameter of xr.
  double offset(const Piece& p, double t, double xr) const {
    const auto [lo, hi] = x_range(p);
    if (xr < lo || xr > hi) return x(p, t) - xr;
    const double ts = parameter(p, xr);
    switch (support_.shape) {
      case SupportShape::FullInterval:
        return 2.0 * std::cos(0.5 * (t + ts)) * std::sin(0.5 * (t - ts));
      case SupportShape::OneCut:
        return 2.0 * support_.beta * std::cos(0.5 * (t + ts)) * std::sin(0.5 * (t - ts));
      case SupportShape::TwoCut: {
        // h^2 - h*^2 = (1 - beta^2)(sin^2 t - sin^2 t*)
        const double h = std::hypot(support_.beta * std::cos(t), std::sin(t));
        const double diff = cos_beta_ * cos_beta_ * std::sin(t - ts) * std::sin(t + ts);
        return p.sign * diff / (h + std::abs(xr));
      }
    }
    return 0.0;
  }

  /// Closed x-range covered by piece p.
  std::pair<double, double> x_range(const Piece& p) const {
    const double lo = x(p, p.t0);
    const double hi = x(p, p.t1);
    return {std::min(lo, hi), std::max(lo, hi)};
  }

 private:
  double tau_;
  Support support_;
  double cos_beta_ = 0.0;
  std::vector<Piece> pieces_;
};

namespace detail {

// Integrates weight(t) g(piece, t) over every piece, splitting at the
// parameters of the given x values.
template <class G>
auto integrate_pieces(const MeasureMap& map, G&& g, const std::vector<double>& splits,
                      double abs_tol) {
  using R = std::decay_t<decltype(g(map.pieces().front(), 0.0))>;
  R total{};
  for (const auto& piece : map.pieces()) {
    std::vector<double> cuts{piece.t0, piece.t1};
    const auto [lo, hi] = map.x_range(piece);
    for (double xs : splits) {
      if (xs > lo && xs < hi) cuts.push_back(map.parameter(piece, xs));
    }
    std::sort(cuts.begin(), cuts.end());
    auto integrand = [&](double t) -> R { return map.weight(t) * g(piece, t); };
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      if (cuts[i + 1] <= cuts[i]) continue;
      total += quad::integrate_adaptive(integrand, cuts[i], cuts[i + 1], abs_tol, 1e-14, 8000).value;
    }
  }
  return total;
}

}  // namespace detail

/// Integral of f against mu_tau. f may return double or std::complex<double>.
/// Optional split points (in x) are passed on as subinterval boundaries.
template <class F>
auto measure_quadrature(const MeasureMap& map, F&& f, const std::vector<double>& splits = {},
                        double abs_tol = 1e-13) {
  return detail::integrate_pieces(
      map, [&](const MeasureMap::Piece& p, double t) { return f(map.x(p, t)); }, splits, abs_tol);
}

template <class F>
auto measure_quadrature(double tau, F&& f, double abs_tol = 1e-13) {
  return measure_quadrature(MeasureMap(tau), std::forward<F>(f), {}, abs_tol);
}

/// Total mass; 1 up to quadrature error.
inline double measure_mass(double tau) {
  return measure_quadrature(tau, [](double) { return 1.0; });
}

/// int dmu(x)/(z - x) by quadrature.
inline cplx measure_cauchy(double tau, cplx z) {
  const MeasureMap map(tau);
  return measure_quadrature(
      map, [z](double x) { return 1.0 / (z - x); }, {z.real()});
}

/// V(z) = -int log|x - z| dmu(x). Real z inside the support is handled by
/// splitting the parameter interval at z so the log singularity sits on a
/// subinterval endpoint.
inline double potential_quad(const MeasureMap& map, cplx z) {
  const double zr = z.real();
  const double zi = z.imag();
  auto g = [&](const MeasureMap::Piece& p, double t) {
    return std::log(std::hypot(map.offset(p, t, zr), zi));
  };
  return -detail::integrate_pieces(map, g, {zr}, 1e-14);
}

inline double potential_quad(double tau, cplx z) { return potential_quad(MeasureMap(tau), z); }

}  // namespace logeq::oracle
