#include <doctest.h>

#include <boost/math/constants/constants.hpp>

#include <cmath>
#include <vector>

#include "fracsub/errors.hpp"
#include "fracsub/subordination.hpp"
#include "oracles.hpp"

using namespace fracsub;
using boost::math::constants::pi;

namespace {

const double kPi = pi<double>();

// (2/pi) int_0^inf e^{-s}/(1+s^2) ds, 40 digits offline.
const double kCauchyBenchmark = 0.3956271183189224615;

InitialCondition sine_ic(int count = 64) {
  return InitialCondition([](const Point& x) { return std::sin(x[0]); }, "sin").project(Domain::interval(kPi), count);
}

// int_0^inf e^{-lambda s} p^alpha(t,s) ds written in frequency space:
// (1/pi) int_0^inf exp(-t xi^alpha) lambda/(lambda^2 + xi^2) dxi.
double mode_integral_fourier(double alpha, double lambda, double t, int xi_power = 0) {
  return oracle::integrate_half_line(
             [&](double xi) {
               return std::pow(xi, xi_power) * std::exp(-t * std::pow(xi, alpha)) * lambda / (lambda * lambda + xi * xi);
             },
             -30.0, 8.0) /
         kPi;
}

}  // namespace

TEST_CASE("mode_laplace_identity: quadrature against the Mittag-Leffler series") {
  for (double beta : {1.0 / 2, 1.0 / 3, 1.0 / 4})
    for (double lambda : {1.0, 4.0, 9.0})
      for (double t : {0.25, 1.0, 4.0}) {
        const auto [q, e] = mode_laplace_identity(beta, lambda, t);
        INFO("beta=" << beta << " lambda=" << lambda << " t=" << t);
        CHECK(std::abs(q - e) <= 1e-8);
      }
  const auto [q0, e0] = mode_laplace_identity(0.5, 0.0, 1.0);
  CHECK(e0 == 1.0);
  CHECK(std::abs(q0 - 1.0) < 1e-10);
  const auto [q3, e3] = mode_laplace_identity(1.0 / 3, 4.0, 0.5);
  CHECK(std::abs(q3 - e3) <= 1e-8);
  // beta = 1/2: the clock is half-normal, so the transform is erfcx(lambda sqrt(t))
  for (double lambda : {1.0, 4.0})
    CHECK(std::abs(mode_laplace_identity(0.5, lambda, 2.0).first - oracle::erfcx(lambda * std::sqrt(2.0))) < 1e-10);
  CHECK_THROWS_AS(mode_laplace_identity(1.5, 1.0, 1.0), ParameterError);
}

TEST_CASE("clock densities normalize") {
  for (double beta : {0.2, 0.5, 0.8})
    for (double t : {0.3, 3.0}) CHECK(std::abs(mode_laplace_identity(beta, 0.0, t).first - 1.0) < 1e-8);
  for (double alpha : {0.7, 1.0, 1.5, 2.0})
    for (double t : {0.5, 2.0}) {
      INFO("alpha=" << alpha << " t=" << t);
      CHECK(std::abs(2 * alpha_clock_mode_integral(alpha, 0.0, t, 1e-10) - 1.0) < 1e-8);
    }
}

TEST_CASE("solve_inverse_stable_quadrature: benchmark and cross-method agreement") {
  const Domain d = Domain::interval(kPi);
  const auto f = sine_ic();
  const auto u = solve_inverse_stable_quadrature(d, f, FractionalOrder::from_beta(0.5), {{1.0, {kPi / 2}}});
  CHECK(u.method == Method::quadrature);
  CHECK(std::abs(u.values[0] - oracle::ml_series(0.5, 1.0)) < 1e-9);
  CHECK(u.err[0] < 1e-8);

  const auto zero = InitialCondition([](const Point&) { return 0.0; }).project(d, 16);
  CHECK(solve_inverse_stable_quadrature(d, zero, FractionalOrder::from_beta(0.5), {{1.0, {1.0}}}).values[0] == 0.0);

  const auto poly = InitialCondition([](const Point& x) { return x[0] * (kPi - x[0]); }).project(d, 512);
  const std::vector<GridPoint> grid{{0.3, {0.4}}, {0.7, {1.1}}, {1.0, {kPi / 2}}, {1.6, {2.0}}, {2.5, {2.9}}};
  const auto order = FractionalOrder::from_beta(0.25);
  const auto q = solve_inverse_stable_quadrature(d, poly, order, grid);
  const auto s = solve_spectral(d, poly, order, grid, {1e-10});
  for (std::size_t k = 0; k < grid.size(); ++k) {
    CHECK(std::abs(q.values[k] - s.values[k]) <= 2e-8);
    CHECK(std::abs(q.values[k] - s.values[k]) <= q.err[k] + s.err[k]);
  }
  CHECK_THROWS_AS(solve_inverse_stable_quadrature(d, f, order, {{0.0, {1.0}}}), ParameterError);
}

TEST_CASE("solve_alpha_clock_quadrature: Cauchy clock benchmark") {
  const double oracle_value =
      2.0 / kPi * oracle::integrate_half_line([](double s) { return std::exp(-s) / (1 + s * s); }, -30.0, 6.0);
  CHECK(std::abs(oracle_value - kCauchyBenchmark) < 1e-12);

  const Domain d = Domain::interval(kPi);
  const auto f = sine_ic();
  const auto u = solve_alpha_clock_quadrature(d, f, StableClockParam::from_alpha(1.0), {{1.0, {kPi / 2}}});
  CHECK(std::abs(u.values[0] - kCauchyBenchmark) < 1e-9);
  CHECK(u.err[0] < 1e-8);
  const auto at_edge = solve_alpha_clock_quadrature(d, f, StableClockParam::from_alpha(1.0), {{1.0, {kPi}}});
  CHECK(std::abs(at_edge.values[0]) <= at_edge.err[0]);
}

TEST_CASE("solve_alpha_clock_quadrature: Gaussian clock and other indices") {
  const Domain d = Domain::interval(kPi);
  const auto f = sine_ic();
  // alpha = 2: 2 int e^{-s} N(0,2t)(s) ds = erfcx(sqrt t)
  const auto u = solve_alpha_clock_quadrature(d, f, StableClockParam::from_alpha(2.0),
                                              {{1.0, {1.2}}, {1e-4, {1.2}}, {1e-7, {1.2}}});
  CHECK(std::abs(u.values[0] - std::sin(1.2) * oracle::erfcx(1.0)) < 1e-9);
  // approach to f is O(sqrt t): 1 - erfcx(sqrt t) ~ 2 sqrt(t/pi)
  CHECK(std::abs(u.values[1] - std::sin(1.2) * oracle::erfcx(1e-2)) < 1e-9);
  CHECK(std::abs(u.values[2] - std::sin(1.2)) < 1e-3);

  for (auto alpha : {StableClockParam::from_rational(1, 2), StableClockParam::from_rational(3, 2)}) {
    const auto v = solve_alpha_clock_quadrature(d, f, alpha, {{0.8, {kPi / 2}}});
    INFO("alpha=" << alpha.alpha());
    CHECK(std::abs(v.values[0] - 2 * mode_integral_fourier(alpha.alpha(), 1.0, 0.8)) < 1e-8);
  }
}

TEST_CASE("alpha clock mode terms: bound, positivity, monotonicity") {
  CHECK(alpha_clock_mode_integral(1.0, 1.0, 2.0) <= 1.0 / (2 * kPi));
  for (double t : {0.5, 1.0, 2.0})
    for (double lambda : {1.0, 4.0, 9.0}) CHECK(alpha_clock_mode_integral(1.0, lambda, t) <= 1.0 / (kPi * t * lambda));
  for (double t : {0.5, 2.0}) {
    double prev = 1.0;
    for (double lambda : {1.0, 4.0, 9.0}) {
      const double v = alpha_clock_mode_integral(1.0, lambda, t);
      CHECK(v > 0.0);
      CHECK(v < prev);
      CHECK(std::abs(v - mode_integral_fourier(1.0, lambda, t)) < 1e-11);
      prev = v;
    }
  }
}

TEST_CASE("Cauchy clock: per-mode second-derivative identity") {
  // I(t) = int e^{-lambda s} p^1(t,s) ds. In frequency form I'' carries xi^2, and
  // I'' + lambda^2 I = (lambda/pi) int e^{-t xi} dxi = lambda/(pi t).
  for (double t : {0.5, 1.0, 1.5, 2.0}) {
    const double lambda = 1.0;
    const double i0 = mode_integral_fourier(1.0, lambda, t);
    const double i2 = mode_integral_fourier(1.0, lambda, t, 2);
    CHECK(std::abs(i2 - (lambda / (kPi * t) - lambda * lambda * i0)) < 1e-11);
    // and the library's quadrature of I matches, differentiated numerically
    const double h = 1e-2;
    auto lib = [&](double s) { return alpha_clock_mode_integral(1.0, lambda, s, 1e-14); };
    const double d2 = (-lib(t + 2 * h) + 16 * lib(t + h) - 30 * lib(t) + 16 * lib(t - h) - lib(t - 2 * h)) / (12 * h * h);
    CHECK(std::abs(d2 - i2) < 1e-6);
  }
}

TEST_CASE("cauchy_clock_residual") {
  const Domain d = Domain::interval(kPi);
  const auto f = sine_ic();
  std::vector<GridPoint> grid;
  for (double t = 0.5; t <= 2.0 + 1e-12; t += 0.25) grid.push_back({t, {kPi / 2}});
  const double r = cauchy_clock_residual(d, f, grid);
  INFO("residual " << r);
  CHECK(r <= 1e-4);

  const auto zero = InitialCondition([](const Point&) { return 0.0; }).project(d, 16);
  CHECK(cauchy_clock_residual(d, zero, grid) == 0.0);
  CHECK_THROWS_AS(cauchy_clock_residual(d, f, {{0.0, {1.0}}}), ParameterError);

  // two-mode datum with a box domain
  const Domain sq = Domain::box({kPi, kPi});
  const auto g = InitialCondition([](const Point& x) { return std::sin(x[0]) * std::sin(x[1]) + 0.3 * std::sin(2 * x[0]) * std::sin(x[1]); })
                     .project(sq, 16);
  CHECK(cauchy_clock_residual(sq, g, {{0.7, {1.0, 2.0}}, {1.3, {0.5, 0.5}}}) <= 1e-4);
}
