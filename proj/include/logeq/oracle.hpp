#pragma once

// Independent checks of the closed forms: principal-value integrals, a
// brute-force discrete energy minimizer and a verification report.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "logeq/density.hpp"
#include "logeq/equilibrium.hpp"
#include "logeq/error.hpp"
#include "logeq/integrate.hpp"
#include "logeq/quadrature.hpp"
#include "logeq/regime.hpp"
#include "logeq/transform.hpp"

namespace logeq::oracle {

// ---------------------------------------------------------------------------
// Principal values on (-beta, beta).

enum class PvKernel {
  Chebyshev,  // 1/(sqrt(beta^2 - y^2)(x - y))
  Full,       // sqrt((1 - y^2)/(beta^2 - y^2))/(x - y)
};

/// p.v. int_{-beta}^{beta} kernel(y) dy. With y = beta sin t the kernel is
/// g(y)/(x - y) dt; subtracting g(x) leaves a smooth integrand because the
/// pure Chebyshev part has principal value zero.
inline double pv_integral(PvKernel kernel, double beta, double x) {
  if (!(beta > 0.0 && beta < 1.0)) throw DomainError("pv_integral: beta must lie in (0, 1)");
  if (!(std::abs(x) < beta)) throw DomainError("pv_integral: requires |x| < beta");
  if (kernel == PvKernel::Chebyshev) return 0.0;
  const double kp = std::sqrt((1.0 - beta) * (1.0 + beta));
  const double ax = std::sqrt((1.0 - x) * (1.0 + x));
  // (sqrt(1 - y^2) - sqrt(1 - x^2))/(x - y) = (x + y)/(sqrt(1 - y^2) + sqrt(1 - x^2))
  auto f = [&](double t) {
    const double s = std::sin(t);
    return (x + beta * s) / (std::hypot(std::cos(t), kp * s) + ax);
  };
  return quad::integrate<96>(f, -std::numbers::pi / 2.0, std::numbers::pi / 2.0);
}

// ---------------------------------------------------------------------------
// Discrete energy minimization on the probability simplex.

struct GridMeasure {
  std::vector<double> nodes;    // increasing
  std::vector<double> weights;  // nonnegative, sum 1
};

struct DiscreteSolution {
  GridMeasure measure;
  double omega_est = 0.0;
  double beta_est = 0.0;
  double energy = 0.0;
  int iterations = 0;
  double gap = 0.0;
  std::vector<double> energy_trace;
};

namespace detail {

// Second antiderivative of log|u|.
inline double log_l2(double u) {
  if (u == 0.0) return 0.0;
  return 0.5 * u * u * std::log(std::abs(u)) - 0.75 * u * u;
}

// Average of -log|s - t| over s in [a, b], t in [c, d].
inline double cell_interaction(double a, double b, double c, double d) {
  const double hi = b - a;
  const double hj = d - c;
  const double sep = std::max(c - b, a - d);
  if (sep > 2.0 * std::max(hi, hj)) {
    // Well separated: tensor Gauss rule (the exact formula would cancel badly).
    const auto& r = quad::gauss_legendre<4>();
    double sum = 0.0;
    for (std::size_t p = 0; p < 4; ++p) {
      const double s = 0.5 * (a + b) + 0.5 * hi * r.nodes[p];
      for (std::size_t q = 0; q < 4; ++q) {
        const double t = 0.5 * (c + d) + 0.5 * hj * r.nodes[q];
        sum += r.weights[p] * r.weights[q] * std::log(std::abs(s - t));
      }
    }
    return -0.25 * sum;
  }
  const double v = log_l2(b - c) - log_l2(a - c) - log_l2(b - d) + log_l2(a - d);
  return -v / (hi * hj);
}

// Inverse of A_SS maintained under bordering (add) and deletion (remove).
// Storage is allocated once at full capacity; the live block is m x m.
class ActiveInverse {
 public:
  explicit ActiveInverse(int capacity) : store_(capacity, capacity) {}

  const std::vector<int>& indices() const { return idx_; }
  auto matrix() const { return store_.topLeftCorner(size(), size()); }
  int size() const { return static_cast<int>(idx_.size()); }

  void add(const Eigen::MatrixXd& a, int j) {
    const int m = size();
    Eigen::VectorXd u(m);
    for (int p = 0; p < m; ++p) u(p) = a(idx_[p], j);
    const Eigen::VectorXd hu = store_.topLeftCorner(m, m) * u;
    const double schur = a(j, j) - u.dot(hu);
    if (!(schur > 0.0)) throw ConvergenceError("discrete_minimize: active matrix lost definiteness");
    store_.topLeftCorner(m, m).noalias() += hu * hu.transpose() / schur;
    store_.block(0, m, m, 1) = -hu / schur;
    store_.block(m, 0, 1, m) = -hu.transpose() / schur;
    store_(m, m) = 1.0 / schur;
    idx_.push_back(j);
  }

  void remove_position(int k) {
    const int m = size();
    const Eigen::VectorXd col = store_.block(0, k, m, 1);
    store_.topLeftCorner(m, m).noalias() -= col * col.transpose() / col(k);
    for (int q = k; q + 1 < m; ++q) store_.block(0, q, m, 1) = store_.block(0, q + 1, m, 1);
    for (int p = k; p + 1 < m; ++p) store_.block(p, 0, 1, m - 1) = store_.block(p + 1, 0, 1, m - 1);
    idx_.erase(idx_.begin() + k);
  }

  void refactor(const Eigen::MatrixXd& a) {
    const int m = size();
    Eigen::MatrixXd sub(m, m);
    for (int p = 0; p < m; ++p)
      for (int q = 0; q < m; ++q) sub(p, q) = a(idx_[p], idx_[q]);
    store_.topLeftCorner(m, m) = sub.llt().solve(Eigen::MatrixXd::Identity(m, m));
  }

 private:
  std::vector<int> idx_;
  Eigen::MatrixXd store_;
};

}  // namespace detail

/// Minimizes w^T A w + 2 b^T w over the probability simplex, where A is the
/// cell-averaged logarithmic kernel on n Chebyshev cells and b_i = tau V^lambda(x_i).
/// Fully corrective conditional gradient: the vertex of steepest descent is
/// added to the active set, the quadratic is minimized over the affine hull of
/// the active set, and a ratio test drops indices that would go negative.
inline DiscreteSolution discrete_minimize(double tau, int n_nodes, int max_iters) {
  require_finite(tau, "discrete_minimize");
  if (n_nodes < 100) throw DomainError("discrete_minimize: needs at least 100 nodes");
  const int n = n_nodes;

  std::vector<double> edges(n + 1);
  for (int k = 0; k <= n; ++k) edges[k] = -std::cos(std::numbers::pi * k / n);
  edges[0] = -1.0;
  edges[n] = 1.0;
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = -std::cos(std::numbers::pi * (i + 0.5) / n);

  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const double v = detail::cell_interaction(edges[i], edges[i + 1], edges[j], edges[j + 1]);
      a(i, j) = v;
      a(j, i) = v;
    }
  }
  Eigen::VectorXd b(n);
  for (int i = 0; i < n; ++i) b(i) = external_field(tau, x[i]);

  Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
  detail::ActiveInverse active(n);
  int start = 0;
  b.minCoeff(&start);
  active.add(a, start);
  w(start) = 1.0;

  // w^T A w + 2 b^T w from the gradient g = A w + b.
  auto energy = [&](const Eigen::VectorXd& g) { return w.dot(g + b); };
  auto active_gradient = [&]() {
    Eigen::VectorXd g = b;
    for (int j : active.indices()) g += w(j) * a.col(j);
    return g;
  };

  // Minimizer of the quadratic on {sum = 1} restricted to the active set.
  auto affine_minimizer = [&]() {
    const auto& idx = active.indices();
    const int m = static_cast<int>(idx.size());
    Eigen::VectorXd bs(m);
    for (int p = 0; p < m; ++p) bs(p) = b(idx[p]);
    const Eigen::VectorXd y1 = active.matrix().rowwise().sum();
    const Eigen::VectorXd y2 = active.matrix() * bs;
    const double lambda = (1.0 + y2.sum()) / y1.sum();
    return Eigen::VectorXd(lambda * y1 - y2);
  };

  // Moves w toward the affine minimizer, dropping indices that hit zero, until
  // the minimizer is feasible.
  auto correct = [&]() {
    for (;;) {
      const Eigen::VectorXd v = affine_minimizer();
      const auto& idx = active.indices();
      const int m = static_cast<int>(idx.size());
      double step = 1.0;
      int blocking = -1;
      for (int p = 0; p < m; ++p) {
        if (v(p) < 0.0) {
          const double wp = w(idx[p]);
          const double s = wp / (wp - v(p));
          if (s < step) {
            step = s;
            blocking = p;
          }
        }
      }
      for (int p = 0; p < m; ++p) w(idx[p]) += step * (v(p) - w(idx[p]));
      if (blocking < 0) return;
      w(idx[blocking]) = 0.0;
      active.remove_position(blocking);
      // Clear any other coordinates pushed to (numerical) zero as well.
      for (int p = static_cast<int>(active.indices().size()) - 1; p >= 0; --p) {
        const int j = active.indices()[p];
        if (w(j) <= 0.0) {
          w(j) = 0.0;
          active.remove_position(p);
        }
      }
    }
  };

  DiscreteSolution sol;
  double gap = std::numeric_limits<double>::infinity();
  int iter = 0;
  for (; iter < max_iters; ++iter) {
    const Eigen::VectorXd g = active_gradient();
    sol.energy_trace.push_back(energy(g));
    int j = 0;
    const double gmin = g.minCoeff(&j);
    gap = 2.0 * (g.dot(w) - gmin);
    if (gap <= 1e-6) break;
    if (std::find(active.indices().begin(), active.indices().end(), j) != active.indices().end()) {
      active.refactor(a);
    } else {
      active.add(a, j);
    }
    correct();
  }
  if (!(gap <= 1e-6)) {
    throw ConvergenceError("discrete_minimize: duality gap " + std::to_string(gap) +
                           " after " + std::to_string(max_iters) + " iterations");
  }

  // Polish on the final active set with a fresh factorization.
  active.refactor(a);
  correct();
  const Eigen::VectorXd g = active_gradient();
  sol.gap = 2.0 * (g.dot(w) - g.minCoeff());
  sol.energy = energy(g);
  sol.energy_trace.push_back(sol.energy);
  sol.iterations = iter;

  double omega_est = std::numeric_limits<double>::infinity();
  for (int j : active.indices()) omega_est = std::min(omega_est, g(j));
  sol.omega_est = omega_est;

  const double threshold = 10.0 / (static_cast<double>(n) * n);
  const Regime regime = classify_regime(tau);
  double beta_est = (regime == Regime::Repulsive) ? 1.0 : 0.0;
  for (int i = 0; i < n; ++i) {
    if (w(i) <= threshold) continue;
    const double ax = std::abs(x[i]);
    beta_est = (regime == Regime::Repulsive) ? std::min(beta_est, ax) : std::max(beta_est, ax);
  }
  sol.beta_est = beta_est;

  sol.measure.nodes = x;
  sol.measure.weights.assign(w.data(), w.data() + n);
  return sol;
}

// ---------------------------------------------------------------------------
// Verification report.

struct VerificationReport {
  double tau = 0.0;
  double mass_error = 0.0;
  double flatness_error = 0.0;
  double inequality_margin = 0.0;
  double sp_error = 0.0;
  double cross_route_omega_spread = 0.0;

  bool pass() const {
    return mass_error <= 1e-8 && flatness_error <= 1e-6 && inequality_margin >= -1e-9 &&
           sp_error <= 1e-4 && cross_route_omega_spread <= 1e-8;
  }
};

namespace detail {

// n points spread over the union of intervals, each interval shrunk by `inset`
// of its width, allocated in proportion to interval width.
inline std::vector<double> spread_points(const std::vector<std::pair<double, double>>& intervals,
                                         int n, double inset) {
  std::vector<double> pts;
  if (intervals.empty()) return pts;
  double total = 0.0;
  for (auto [a, b] : intervals) total += b - a;
  int remaining = n;
  for (std::size_t k = 0; k < intervals.size(); ++k) {
    const auto [a, b] = intervals[k];
    const int m = (k + 1 == intervals.size())
                      ? remaining
                      : static_cast<int>(std::lround(n * (b - a) / total));
    remaining -= m;
    const double lo = a + inset * (b - a);
    const double hi = b - inset * (b - a);
    for (int i = 0; i < m; ++i) pts.push_back(lo + (hi - lo) * (i + 0.5) / m);
  }
  return pts;
}

// Parts of [-1, 1] outside the support.
inline std::vector<std::pair<double, double>> gaps(const Support& sup) {
  switch (sup.shape) {
    case SupportShape::FullInterval: return {};
    case SupportShape::OneCut: return {{-1.0, -sup.beta}, {sup.beta, 1.0}};
    case SupportShape::TwoCut: return {{-sup.beta, sup.beta}};
  }
  return {};
}

// Value at eps = 0 of the parabola through (e_k, f_k).
inline double extrapolate_to_zero(const double (&e)[3], const double (&f)[3]) {
  double v = 0.0;
  for (int i = 0; i < 3; ++i) {
    double l = 1.0;
    for (int j = 0; j < 3; ++j) {
      if (j != i) l *= (0.0 - e[j]) / (e[i] - e[j]);
    }
    v += l * f[i];
  }
  return v;
}

}  // namespace detail

/// -(1/pi) Im C(x + i eps) extrapolated to eps = 0 from eps in {1e-3, 1e-4, 1e-5}.
inline double plemelj_density(double tau, double x) {
  const double eps[3] = {1e-3, 1e-4, 1e-5};
  double vals[3];
  for (int k = 0; k < 3; ++k) vals[k] = -cauchy(tau, cplx(x, eps[k])).imag() / std::numbers::pi;
  return detail::extrapolate_to_zero(eps, vals);
}

inline VerificationReport verify(double tau) {
  require_finite(tau, "verify");
  VerificationReport r;
  r.tau = tau;
  const MeasureMap map(tau);
  const Support& sup = map.support();
  double om = 0.0;
  double om_other = 0.0;
  if (sup.shape == SupportShape::TwoCut) {
    om = series::omega_series(tau, 1e-13).value;
    om_other = series::omega_integral(tau);
  } else {
    om = omega(tau);
  }

  r.mass_error = std::abs(measure_quadrature(map, [](double) { return 1.0; }) - 1.0);

  auto total = [&](double x) { return potential_quad(map, cplx(x, 0.0)) + external_field(tau, x); };

  r.flatness_error = 0.0;
  for (double x : detail::spread_points(sup.intervals(), 200, 0.0)) {
    r.flatness_error = std::max(r.flatness_error, std::abs(total(x) - om));
  }

  const auto gap_intervals = detail::gaps(sup);
  if (gap_intervals.empty()) {
    r.inequality_margin = 0.0;
  } else {
    r.inequality_margin = std::numeric_limits<double>::infinity();
    for (double x : detail::spread_points(gap_intervals, 200, 0.0)) {
      r.inequality_margin = std::min(r.inequality_margin, total(x) - om);
    }
  }

  r.sp_error = 0.0;
  for (double x : detail::spread_points(sup.intervals(), 20, 0.1)) {
    r.sp_error = std::max(r.sp_error, std::abs(plemelj_density(tau, x) - density(tau, x)));
  }

  if (sup.shape == SupportShape::TwoCut) {
    r.cross_route_omega_spread = std::abs(om - om_other);
  } else {
    r.cross_route_omega_spread = std::abs(om - total(0.0));
  }
  return r;
}

}  // namespace logeq::oracle
