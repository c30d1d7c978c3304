#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

#include "logeq/branches.hpp"
#include "logeq/density.hpp"
#include "logeq/error.hpp"
#include "logeq/integrate.hpp"
#include "logeq/oracle.hpp"
#include "logeq/regime.hpp"
#include "logeq/specfun.hpp"
#include "logeq/transform.hpp"
#include "support/oracles.hpp"

using Catch::Matchers::WithinAbs;
using namespace logeq;
using namespace logeq::oracle;

namespace {

constexpr double kPi = std::numbers::pi;

// Principal value by symmetric pairing around x >= 0, with r = beta - x:
//   int_0^r (g(x-u) - g(x+u))/u du + int_{-beta}^{x-r} g(y)/(x-y) dy.
// g(y) = n(y)/sqrt((beta - y)(beta + y)); endpoint distances come from the
// tanh-sinh complement argument so the edge factors never round to zero.
// Odd extension for x < 0.
double pv_pairing(const std::function<double(double)>& n, double beta, double x) {
  if (x < 0) return -pv_pairing(n, beta, -x);
  const double r = beta - x;
  auto inner = [&](double u, double uc) {
    const double to_edge = uc > 0 ? uc : r - u;  // beta - (x + u)
    const double gp = n(x + u) / std::sqrt(to_edge * (beta + x + u));
    const double gm = n(x - u) / std::sqrt((beta - x + u) * (beta + x - u));
    return (gm - gp) / u;
  };
  double total = oracle_ref::ts_complement(inner, 0.0, r);
  if (x > 0) {
    const double hi = x - r;
    auto outer = [&](double y, double yc) {
      const double from_edge = yc < 0 ? -yc : y + beta;  // y - (-beta)
      return n(y) / std::sqrt(from_edge * (beta - y)) / (x - y);
    };
    total += oracle_ref::ts_complement(outer, -beta, hi);
  }
  return total;
}

}  // namespace

TEST_CASE("Chebyshev kernel has zero principal value") {
  for (double x : {-0.3, 0.0, 0.1, 0.39}) {
    CHECK(std::abs(pv_integral(PvKernel::Chebyshev, 0.417299, x)) <= 1e-12);
  }
  // Independent confirmation of the vanishing principal value.
  for (double x : {-0.4, 0.2, 0.5}) {
    CHECK(std::abs(pv_pairing([](double) { return 1.0; }, 0.6, x)) <= 1e-9);
  }
}

TEST_CASE("full kernel principal value identity") {
  CHECK(std::abs(pv_integral(PvKernel::Full, 0.417299, 0.0)) <= 1e-15);
  const double beta = 0.417299;
  CHECK_THAT(pv_integral(PvKernel::Full, beta, 0.2),
             WithinAbs(2 * 0.2 * specfun::integral_I(std::sqrt(1 - 0.04), beta), 1e-9));
  for (double b : {0.2, 0.417299, 0.8}) {
    for (int i = 0; i < 20; ++i) {
      const double x = b * (-0.95 + 1.9 * i / 19.0);
      const double identity = 2 * x * specfun::integral_I(std::sqrt(1 - x * x), b);
      INFO("beta = " << b << " x = " << x);
      CHECK_THAT(pv_integral(PvKernel::Full, b, x), WithinAbs(identity, 1e-9));
    }
  }
}

TEST_CASE("principal value against symmetric pairing") {
  for (double b : {0.3, 0.7}) {
    for (double x : {-0.5 * b, 0.1 * b, 0.8 * b}) {
      const double ref = pv_pairing([](double y) { return std::sqrt((1 - y) * (1 + y)); }, b, x);
      CHECK_THAT(pv_integral(PvKernel::Full, b, x), WithinAbs(ref, 1e-9));
    }
  }
}

TEST_CASE("principal value domain checks") {
  CHECK_THROWS_AS(pv_integral(PvKernel::Full, 0.5, 0.5), DomainError);
  CHECK_THROWS_AS(pv_integral(PvKernel::Full, 1.0, 0.0), DomainError);
  CHECK_THROWS_AS(pv_integral(PvKernel::Chebyshev, 0.5, -0.6), DomainError);
}

TEST_CASE("Chebyshev Cauchy integral equals pi over sqrt_cut") {
  const double beta = 0.417299;
  for (cplx z : {cplx(2, 0), cplx(1, 1), cplx(0, -3)}) {
    auto part = [&](bool imag) {
      return [&, imag](double t) {
        const cplx v = 1.0 / (z - beta * std::sin(t));
        return imag ? v.imag() : v.real();
      };
    };
    const cplx q(oracle_ref::gk(part(false), -kPi / 2, kPi / 2),
                 oracle_ref::gk(part(true), -kPi / 2, kPi / 2));
    CHECK(std::abs(q - kPi / sqrt_cut(z, beta)) <= 1e-10);
  }
}

TEST_CASE("measure quadrature mass and transform") {
  for (double tau : {-3.0, -2.0, -1.0, 0.0, 1.0, kTauCritical, 2.0, 5.0}) {
    INFO("tau = " << tau);
    CHECK_THAT(measure_mass(tau), WithinAbs(1.0, 1e-8));
  }
  const cplx q = measure_quadrature(2.0, [](double x) { return 1.0 / (3.0 - x); });
  CHECK_THAT(q.real(), WithinAbs(cauchy(2.0, {3, 0}).real(), 1e-8));
  const double second = measure_quadrature(0.0, [](double x) { return x * x; });
  CHECK_THAT(second, WithinAbs(0.5, 1e-13));
  const double uniform_second = measure_quadrature(-1.0, [](double x) { return x * x; });
  CHECK_THAT(uniform_second, WithinAbs(1.0 / 3.0, 1e-13));
}

TEST_CASE("verify reports") {
  const auto r0 = verify(0.0);
  CHECK(r0.flatness_error <= 1e-7);
  CHECK(r0.mass_error <= 1e-8);
  CHECK(r0.pass());

  const auto rm = verify(-2.0);
  CHECK(rm.inequality_margin >= -1e-9);
  CHECK(rm.flatness_error <= 1e-6);
  CHECK(rm.pass());

  const auto rp = verify(2.0);
  CHECK(rp.inequality_margin >= -1e-9);
  CHECK(rp.cross_route_omega_spread <= 1e-8);
  CHECK(rp.sp_error <= 1e-4);
  CHECK(rp.pass());

  for (const auto& r : {r0, rm, rp}) {
    CHECK(std::isfinite(r.mass_error));
    CHECK(r.mass_error >= 0);
    CHECK(r.flatness_error >= 0);
    CHECK(r.sp_error >= 0);
    CHECK(r.cross_route_omega_spread >= 0);
  }
}

TEST_CASE("verification tolerances") {
  VerificationReport r;
  CHECK(r.pass());
  r.inequality_margin = -2e-9;
  CHECK_FALSE(r.pass());
  r.inequality_margin = 0.0;
  r.sp_error = 2e-4;
  CHECK_FALSE(r.pass());
}

TEST_CASE("one-sided limits match the density in every regime") {
  for (double tau : {-2.0, 0.5, 3.0}) {
    for (auto [a, b] : support(tau).intervals()) {
      for (double f : {0.2, 0.5, 0.8}) {
        const double x = a + f * (b - a);
        CHECK_THAT(plemelj_density(tau, x), WithinAbs(density(tau, x), 1e-4));
      }
    }
  }
}
