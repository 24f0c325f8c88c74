#include "fracsub/subordination.hpp"

#include <algorithm>
#include <boost/math/constants/constants.hpp>
#include <cmath>
#include <functional>
#include <limits>
#include <unordered_map>

#include "fracsub/errors.hpp"
#include "quadrature.hpp"

namespace fracsub {

namespace {

constexpr double kPi = boost::math::constants::pi<double>();

// Clock density memoized on the abscissa. Successive tanh-sinh/exp-sinh
// passes revisit the same nodes, and the densities are the expensive part.
class CachedDensity {
 public:
  explicit CachedDensity(std::function<double(double)> g) : g_(std::move(g)) {}
  double operator()(double l) {
    auto it = cache_.find(l);
    if (it != cache_.end()) return it->second;
    const double v = g_(l);
    cache_.emplace(l, v);
    return v;
  }

 private:
  std::function<double(double)> g_;
  std::unordered_map<double, double> cache_;
};

// int_0^inf density(l) sum_n amp[n] exp(-lambda[n] l) dl over the first n modes,
// split at `split`.
detail::QuadResult integrate_modes(CachedDensity& density, double split, const std::vector<double>& lambda,
                                   const std::vector<double>& amp, int n, double tol) {
  auto integrand = [&](double l) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) {
      if (amp[j] == 0.0) continue;
      s += amp[j] * std::exp(-lambda[j] * l);
    }
    return s == 0.0 ? 0.0 : s * density(l);
  };
  const auto head = detail::integrate_finite(integrand, 0.0, split, tol);
  const auto tail = detail::integrate_to_infinity(integrand, split, tol);
  auto r = head + tail;
  if (!std::isfinite(r.value) || r.error > 1e3 * tol * std::max(r.l1, 1e-300) + 1e-300) {
    throw NumericError("clock quadrature did not converge", r.value, r.error);
  }
  return r;
}

struct ClockIntegral {
  std::function<double(double)> density;  // on (0, inf)
  double split = 1.0;
  double weight = 1.0;  // overall factor (2 for the folded symmetric clock)
};

PointEstimate converge_point(const ClockIntegral& clock, const std::vector<EigenMode>& modes,
                             const std::vector<double>& coeffs, const Point& x, int power,
                             const QuadratureOptions& opts) {
  const int count = static_cast<int>(coeffs.size());
  std::vector<double> lambda(count), amp(count);
  for (int j = 0; j < count; ++j) {
    lambda[j] = modes[j].lambda;
    double a = coeffs[j] * modes[j].phi(x);
    for (int l = 0; l < power; ++l) a *= -modes[j].lambda;
    amp[j] = a;
  }
  CachedDensity density(clock.density);
  int n = std::min(std::max(1, opts.initial_modes), count);
  auto lo = integrate_modes(density, clock.split, lambda, amp, n, opts.tol);
  for (;;) {
    const int n2 = 2 * n;
    if (n2 > count) {
      throw CapacityError("clock quadrature not converged in modes with " + std::to_string(count) +
                          " cached coefficients; project more modes");
    }
    const auto hi = integrate_modes(density, clock.split, lambda, amp, n2, opts.tol);
    const double delta = clock.weight * std::abs(hi.value - lo.value);
    n = n2;
    if (delta < opts.mode_tol) {
      return {clock.weight * hi.value,
              delta + clock.weight * (hi.error + 8 * std::numeric_limits<double>::epsilon() * hi.l1)};
    }
    lo = hi;
  }
}

void check_grid(const Domain& domain, const std::vector<GridPoint>& grid) {
  for (const auto& g : grid) {
    if (!(g.t > 0.0) || !std::isfinite(g.t)) throw ParameterError("quadrature solvers need grid times t > 0");
    if (static_cast<int>(g.x.size()) != domain.dim())
      throw ParameterError("grid point dimension does not match the domain");
  }
}

SolutionField solve_with_clock(const Domain& domain, const InitialCondition& f, const std::vector<GridPoint>& grid,
                               const std::function<ClockIntegral(double)>& clock_at, const QuadratureOptions& opts,
                               int power = 0) {
  check_grid(domain, grid);
  const int count = f.coeff_count();
  if (count < 2) throw CapacityError("initial condition has no cached coefficients; call project() first");
  const auto modes = domain.eigenpairs(count);
  SolutionField field;
  field.grid = grid;
  field.method = Method::quadrature;
  field.values.resize(grid.size());
  field.err.resize(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    try {
      const auto r = converge_point(clock_at(grid[k].t), modes, f.coeffs(), grid[k].x, power, opts);
      field.values[k] = r.value;
      field.err[k] = r.err;
    } catch (const NumericError& e) {
      throw NumericError(std::string(e.what()) + " at t = " + std::to_string(grid[k].t), e.estimate(),
                         e.error_estimate());
    }
  }
  field.truncation = count;
  return field;
}

ClockIntegral inverse_stable_clock(double beta, double t) {
  return {[beta, t](double l) { return l > 0.0 ? inverse_stable_density(beta, t, l) : 0.0; },
          std::pow(t, beta), 1.0};
}

ClockIntegral alpha_clock(double alpha, double t) {
  return {[alpha, t](double s) { return alpha_stable_density_1d(alpha, t, s); }, std::pow(t, 1.0 / alpha), 2.0};
}

}  // namespace

SolutionField solve_inverse_stable_quadrature(const Domain& domain, const InitialCondition& f,
                                              const FractionalOrder& order, const std::vector<GridPoint>& grid,
                                              const QuadratureOptions& opts) {
  if (order.is_heat()) {
    check_grid(domain, grid);
    // E^1(t) = t: no averaging left to do
    SolutionField field = solve_spectral(domain, f, order, grid, {opts.mode_tol});
    field.method = Method::quadrature;
    return field;
  }
  const double beta = order.beta();
  return solve_with_clock(domain, f, grid, [beta](double t) { return inverse_stable_clock(beta, t); }, opts);
}

std::pair<double, double> mode_laplace_identity(double beta, double lambda, double t) {
  if (!(beta > 0.0 && beta < 1.0)) throw ParameterError("mode_laplace_identity needs 0 < beta < 1");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw ParameterError("lambda must be finite and >= 0");
  if (!(t > 0.0)) throw ParameterError("mode_laplace_identity needs t > 0");
  CachedDensity density(inverse_stable_clock(beta, t).density);
  const double split = std::pow(t, beta);
  const auto q = integrate_modes(density, split, {lambda}, {1.0}, 1, 1e-12);
  return {q.value, mittag_leffler(beta, lambda * std::pow(t, beta))};
}

SolutionField solve_alpha_clock_quadrature(const Domain& domain, const InitialCondition& f,
                                           const StableClockParam& alpha, const std::vector<GridPoint>& grid,
                                           const QuadratureOptions& opts) {
  const double a = alpha.alpha();
  return solve_with_clock(domain, f, grid, [a](double t) { return alpha_clock(a, t); }, opts);
}

double alpha_clock_mode_integral(double alpha, double lambda, double t, double tol) {
  if (!(alpha > 0.0 && alpha <= 2.0)) throw ParameterError("stability index must satisfy 0<α<=2");
  if (!(lambda >= 0.0)) throw ParameterError("lambda must be >= 0");
  if (!(t > 0.0)) throw ParameterError("alpha clock needs t > 0");
  const auto c = alpha_clock(alpha, t);
  CachedDensity density(c.density);
  return integrate_modes(density, c.split, {lambda}, {1.0}, 1, tol).value;
}

double cauchy_clock_residual(const Domain& domain, const InitialCondition& f, const std::vector<GridPoint>& grid) {
  for (const auto& g : grid)
    if (!(g.t > 0.0)) throw ParameterError("Cauchy-clock residual is singular at t = 0; use t > 0");
  check_grid(domain, grid);
  const int count = f.coeff_count();
  if (count < 2) throw CapacityError("initial condition has no cached coefficients; call project() first");
  const auto modes = domain.eigenpairs(count);
  const auto& c = f.coeffs();
  QuadratureOptions tight;
  tight.tol = 1e-14;
  tight.mode_tol = 1e-12;

  double worst = 0.0;
  for (const auto& g : grid) {
    auto u = [&](double t) { return converge_point(alpha_clock(1.0, t), modes, c, g.x, 0, tight).value; };
    // second difference with Richardson extrapolation; keep the step whose
    // extrapolant moved least from the previous one
    const double u0 = u(g.t);
    auto d2 = [&](double h) { return (u(g.t + h) - 2 * u0 + u(g.t - h)) / (h * h); };
    double h = g.t / 4;
    double dh = d2(h);
    double prev_r = std::numeric_limits<double>::quiet_NaN();
    double best = 0.0, best_gap = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 7; ++k) {
      const double dh2 = d2(h / 2);
      const double r = (4 * dh2 - dh) / 3;
      if (std::isfinite(prev_r)) {
        const double gap = std::abs(r - prev_r);
        if (gap < best_gap) {
          best_gap = gap;
          best = r;
        }
      }
      prev_r = r;
      dh = dh2;
      h /= 2;
    }
    double lap_f = 0.0;
    for (int j = 0; j < count; ++j) lap_f -= modes[j].lambda * c[j] * modes[j].phi(g.x);
    const double lap2_u = converge_point(alpha_clock(1.0, g.t), modes, c, g.x, 2, tight).value;
    worst = std::max(worst, std::abs(best + 2 * lap_f / (kPi * g.t) + lap2_u));
  }
  return worst;
}

}  // namespace fracsub
