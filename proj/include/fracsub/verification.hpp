#pragma once

// Numerical checks of the defining identities: Caputo derivatives by the L1
// scheme, PDE residuals, and Kolmogorov-Smirnov distribution tests.

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "fracsub/spectral.hpp"
#include "fracsub/specfun.hpp"

namespace fracsub {

/// L1 approximation of the Caputo derivative of order beta at every node of a
/// uniform grid t_0 = 0 < t_1 < ... (value at t_0 is 0). Grid step <= 1e-3.
std::vector<double> caputo_l1(const std::vector<double>& t, const std::vector<double>& g, double beta);

/// Same, from the step alone (g[i] sampled at i * tau).
std::vector<double> caputo_l1(const std::vector<double>& g, double tau, double beta);

struct ResidualOptions {
  double tau = 1e-4;         // time step of the sampling grid
  double tolerance = 2e-3;   // requested residual tolerance
  double spectral_tol = 1e-12;
};

struct ResidualReport {
  std::string pde_tag;
  std::vector<GridPoint> grid;  // times snapped to the sampling grid
  std::vector<double> residual;
  double max_residual = 0.0;
  double tau = 0.0;
  double tolerance = 0.0;
  double truncation = 0.0;  // largest spectral error estimate propagated to the residual
  bool inconclusive = false;
  bool pass() const { return !inconclusive && max_residual <= tolerance; }
};

/// max |D_t^beta u - Delta u| over the grid, u from solve_spectral. beta = 1
/// checks u_t - Delta u by central differences. Grid times must be at least
/// max(10 tau, 1e-2). If the spectral truncation error could account for the
/// tolerance, the report is flagged inconclusive.
ResidualReport fractional_residual(const Domain& domain, const InitialCondition& f, const FractionalOrder& order,
                                   const std::vector<GridPoint>& grid, const ResidualOptions& opts = {});

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
  std::size_t n = 0;
  std::size_t m = 0;  // second sample size (0 for one-sample)
};

/// Continuous reference law given by a density on (lower, upper).
struct DensityReference {
  std::function<double(double)> density;
  double lower = 0.0;
  double upper = std::numeric_limits<double>::infinity();
};

/// One-sample test; the reference CDF is built by adaptive quadrature of the
/// density between every 32nd order statistic, interpolated in between by
/// trapezoid sums. The density must integrate
/// to 1 within 1e-6 (ReferenceError otherwise).
KsResult ks_distribution_test(std::vector<double> samples, const DensityReference& reference);

/// One-sample test against a closed-form CDF.
KsResult ks_distribution_test(std::vector<double> samples, const std::function<double(double)>& cdf);

/// Two-sample test; symmetric in its arguments.
KsResult ks_distribution_test(std::vector<double> a, std::vector<double> b);

/// Asymptotic Kolmogorov tail P(K > lambda).
double kolmogorov_q(double lambda);

}  // namespace fracsub
