#include "fracsub/verification.hpp"

#include <algorithm>
#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <limits>
#include <map>

#include "fracsub/errors.hpp"
#include "quadrature.hpp"

namespace fracsub {

namespace {

constexpr double kPi = boost::math::constants::pi<double>();

void check_samples(const std::vector<double>& s) {
  if (s.size() < 1000) throw ParameterError("Kolmogorov-Smirnov test needs at least 1000 samples");
  for (double v : s)
    if (!std::isfinite(v)) throw ParameterError("Kolmogorov-Smirnov samples must be finite");
}

double stephens_p(double d, double ne) {
  if (d == 0.0) return 1.0;
  const double rn = std::sqrt(ne);
  return kolmogorov_q((rn + 0.12 + 0.11 / rn) * d);
}

double one_sample_statistic(const std::vector<double>& sorted, const std::vector<double>& cdf) {
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    d = std::max(d, static_cast<double>(i + 1) / n - cdf[i]);
    d = std::max(d, cdf[i] - static_cast<double>(i) / n);
  }
  return d;
}

}  // namespace

// ---------------------------------------------------------------- Caputo

std::vector<double> caputo_l1(const std::vector<double>& g, double tau, double beta) {
  if (!(beta > 0.0 && beta < 1.0)) throw ParameterError("Caputo order must satisfy 0<β<1");
  if (!(tau > 0.0) || tau > 1e-3) throw ParameterError("L1 scheme needs a grid step 0 < tau <= 1e-3");
  if (g.size() < 2) throw ParameterError("L1 scheme needs at least two samples");
  for (double v : g)
    if (!std::isfinite(v)) throw ParameterError("L1 scheme needs finite samples");
  const std::size_t n = g.size();
  std::vector<double> b(n), d(n, 0.0), out(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    const double jd = static_cast<double>(j);
    b[j] = std::pow(jd + 1, 1 - beta) - std::pow(jd, 1 - beta);
  }
  for (std::size_t k = 1; k < n; ++k) d[k] = g[k] - g[k - 1];
  const double c = std::pow(tau, -beta) / boost::math::tgamma(2 - beta);
  for (std::size_t m = 1; m < n; ++m) {
    double s = 0.0;
    for (std::size_t j = 0; j < m; ++j) s += b[j] * d[m - j];
    out[m] = c * s;
  }
  return out;
}

std::vector<double> caputo_l1(const std::vector<double>& t, const std::vector<double>& g, double beta) {
  if (t.size() != g.size()) throw ParameterError("time and sample vectors differ in length");
  if (t.size() < 2) throw ParameterError("L1 scheme needs at least two samples");
  if (t[0] != 0.0) throw ParameterError("L1 grid must start at t = 0");
  const double tau = t[1] - t[0];
  for (std::size_t i = 1; i < t.size(); ++i)
    if (std::abs((t[i] - t[i - 1]) - tau) > 1e-6 * tau) throw ParameterError("L1 scheme needs a uniform time grid");
  return caputo_l1(g, tau, beta);
}

// ---------------------------------------------------------------- residuals

ResidualReport fractional_residual(const Domain& domain, const InitialCondition& f, const FractionalOrder& order,
                                   const std::vector<GridPoint>& grid, const ResidualOptions& opts) {
  if (grid.empty()) throw ParameterError("residual grid is empty");
  if (!(opts.tau > 0.0)) throw ParameterError("residual time step must be > 0");
  const double t_min = std::max(10 * opts.tau, 1e-2);
  for (const auto& g : grid)
    if (!(g.t >= t_min))
      throw ParameterError("residual grid times must be >= max(10 tau, 1e-2) (forcing is singular at t = 0)");

  ResidualReport rep;
  rep.pde_tag = order.is_heat() ? "heat: u_t = Laplacian u" : "fractional: D_t^beta u = Laplacian u";
  rep.tau = opts.tau;
  rep.tolerance = opts.tolerance;
  rep.grid = grid;
  rep.residual.assign(grid.size(), 0.0);

  SpectralOptions plain{opts.spectral_tol};
  SpectralOptions lap = plain;
  lap.laplacian_power = 1;
  const double beta = order.beta();

  if (order.is_heat()) {
    const double dt = opts.tau;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const auto& g = grid[k];
      const auto u = solve_spectral(domain, f, order, {{g.t + dt, g.x}, {g.t - dt, g.x}}, plain);
      const auto l = solve_spectral(domain, f, order, {g}, lap);
      rep.residual[k] = std::abs((u.values[0] - u.values[1]) / (2 * dt) - l.values[0]);
      rep.truncation = std::max(rep.truncation, (u.err[0] + u.err[1]) / (2 * dt) + l.err[0]);
    }
  } else {
    // The sampled u is the series truncated at every cached mode (t = 0
    // included), which solves the equation mode by mode; the residual then
    // isolates the time discretization. Truncation against the untruncated
    // solution is reported separately.
    SpectralOptions fixed = plain;
    try {
      fixed.fixed_modes = solve_spectral(domain, f, order, grid, plain).truncation;
    } catch (const CapacityError&) {
      fixed.fixed_modes = f.coeff_count();
    }
    SpectralOptions fixed_lap = fixed;
    fixed_lap.laplacian_power = 1;

    std::vector<Point> xs;
    for (const auto& g : grid)
      if (std::find(xs.begin(), xs.end(), g.x) == xs.end()) xs.push_back(g.x);
    double t_max = 0.0;
    for (const auto& g : grid) t_max = std::max(t_max, g.t);
    const auto nodes = static_cast<std::size_t>(std::llround(t_max / opts.tau)) + 1;
    // time-major sampling grid shared by every spatial point
    std::vector<GridPoint> samples;
    samples.reserve((nodes + 1) * xs.size());
    for (std::size_t i = 0; i <= nodes; ++i)
      for (const auto& x : xs) samples.push_back({static_cast<double>(i) * opts.tau, x});
    const auto u = solve_spectral(domain, f, order, samples, fixed);
    const double amp = 2.0 / (opts.tau * boost::math::tgamma(2 - beta));

    for (std::size_t p = 0; p < xs.size(); ++p) {
      std::vector<double> series(nodes + 1), err(nodes + 1);
      for (std::size_t i = 0; i <= nodes; ++i) {
        series[i] = u.values[i * xs.size() + p];
        err[i] = u.err[i * xs.size() + p];
      }
      const auto caputo = caputo_l1(series, opts.tau, beta);
      double u_max = 0.0;
      for (double v : series) u_max = std::max(u_max, std::abs(v));
      for (std::size_t k = 0; k < grid.size(); ++k) {
        if (grid[k].x != xs[p]) continue;
        const auto i = static_cast<std::size_t>(std::llround(grid[k].t / opts.tau));
        const double ti = static_cast<double>(i) * opts.tau;
        const auto l = solve_spectral(domain, f, order, {{ti, xs[p]}}, fixed_lap);
        rep.grid[k].t = ti;
        rep.residual[k] = std::abs(caputo[i] - l.values[0]);
        // rounding in the samples, amplified by the L1 weights (they telescope
        // to t^{1-beta}/tau), plus the truncation gaps at t
        const double rounding = amp * 16 * std::numeric_limits<double>::epsilon() * u_max * std::pow(ti, 1 - beta);
        rep.truncation = std::max(rep.truncation, rounding + err[i] + l.err[0]);
      }
    }
  }
  for (double r : rep.residual) rep.max_residual = std::max(rep.max_residual, r);
  rep.inconclusive = rep.truncation > opts.tolerance;
  return rep;
}

// ---------------------------------------------------------------- KS

double kolmogorov_q(double lambda) {
  if (!(lambda > 0.0)) return 1.0;
  double p;
  if (lambda < 1.18) {
    // Jacobi-transformed series, fast for small lambda
    const double c = kPi * kPi / (8 * lambda * lambda);
    double s = 0.0;
    for (int k = 1; k <= 20; ++k) {
      const double term = std::exp(-static_cast<double>((2 * k - 1) * (2 * k - 1)) * c);
      s += term;
      if (term < 1e-18 * s) break;
    }
    p = 1.0 - std::sqrt(2 * kPi) / lambda * s;
  } else {
    double s = 0.0;
    for (int k = 1; k <= 100; ++k) {
      const double term = std::exp(-2.0 * k * k * lambda * lambda);
      s += (k % 2 ? term : -term);
      if (term < 1e-18) break;
    }
    p = 2 * s;
  }
  return std::clamp(p, 0.0, 1.0);
}

KsResult ks_distribution_test(std::vector<double> samples, const std::function<double(double)>& cdf) {
  check_samples(samples);
  std::sort(samples.begin(), samples.end());
  std::vector<double> F(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) F[i] = cdf(samples[i]);
  KsResult r;
  r.n = samples.size();
  r.statistic = one_sample_statistic(samples, F);
  r.p_value = stephens_p(r.statistic, static_cast<double>(r.n));
  return r;
}

KsResult ks_distribution_test(std::vector<double> samples, const DensityReference& ref) {
  check_samples(samples);
  if (!ref.density) throw ParameterError("reference density is empty");
  if (!(ref.upper > ref.lower)) throw ParameterError("reference support is empty");
  std::sort(samples.begin(), samples.end());
  if (samples.front() < ref.lower || samples.back() > ref.upper)
    throw ParameterError("samples fall outside the reference support");
  auto density = [&](double x) {
    const double v = ref.density(x);
    if (!std::isfinite(v) || v < 0.0) throw ReferenceError("reference density is negative or non-finite");
    return v;
  };
  const double tol = 1e-10;
  std::vector<double> F(samples.size());
  double acc = std::isfinite(ref.lower) ? detail::integrate_finite(density, ref.lower, samples.front(), tol).value : 0.0;
  if (!std::isfinite(ref.lower)) {
    // mirror the half line so exp-sinh can take it
    auto mirrored = [&](double y) { return density(-y); };
    acc = detail::integrate_to_infinity(mirrored, -samples.front(), tol).value;
  }
  F[0] = acc;
  // adaptive Gauss-Kronrod between every kKnot-th order statistic; inside a
  // panel the CDF follows the trapezoid sums of the density at the samples,
  // rescaled to the panel integral
  constexpr std::size_t kKnot = 32;
  std::vector<double> dens(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) dens[i] = density(samples[i]);
  for (std::size_t k0 = 0; k0 + 1 < samples.size(); k0 += kKnot) {
    const std::size_t k1 = std::min(k0 + kKnot, samples.size() - 1);
    const double exact =
        samples[k1] > samples[k0]
            ? boost::math::quadrature::gauss_kronrod<double, 15>::integrate(density, samples[k0], samples[k1], 8, tol)
            : 0.0;
    double trap = 0.0;
    for (std::size_t i = k0 + 1; i <= k1; ++i) {
      trap += 0.5 * (dens[i] + dens[i - 1]) * (samples[i] - samples[i - 1]);
      F[i] = trap;
    }
    const double scale = trap > 0.0 ? exact / trap : 0.0;
    for (std::size_t i = k0 + 1; i <= k1; ++i) F[i] = acc + F[i] * scale;
    acc += exact;
    F[k1] = acc;
  }
  const double tail = std::isfinite(ref.upper) ? detail::integrate_finite(density, samples.back(), ref.upper, tol).value
                                               : detail::integrate_to_infinity(density, samples.back(), tol).value;
  const double total = acc + tail;
  if (!(std::abs(total - 1.0) <= 1e-6))
    throw ReferenceError("reference density integrates to " + std::to_string(total) + ", not 1 within 1e-6");
  KsResult r;
  r.n = samples.size();
  r.statistic = one_sample_statistic(samples, F);
  r.p_value = stephens_p(r.statistic, static_cast<double>(r.n));
  return r;
}

KsResult ks_distribution_test(std::vector<double> a, std::vector<double> b) {
  check_samples(a);
  check_samples(b);
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == v) ++i;
    while (j < b.size() && b[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  KsResult r;
  r.n = a.size();
  r.m = b.size();
  r.statistic = d;
  r.p_value = stephens_p(d, na * nb / (na + nb));
  return r;
}

}  // namespace fracsub
