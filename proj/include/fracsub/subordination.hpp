#pragma once

// Solutions written as the killed heat semigroup averaged over the law of an
// independent random clock, evaluated by deterministic quadrature.

#include <utility>
#include <vector>

#include "fracsub/spectral.hpp"
#include "fracsub/specfun.hpp"

namespace fracsub {

struct QuadratureOptions {
  double tol = 1e-11;        // relative quadrature tolerance on each clock integral
  double mode_tol = 1e-10;   // doubling criterion for the number of modes
  int initial_modes = 4;
};

/// u(t,x) = int_0^inf T_D(l) f(x) f_t(l) dl with f_t the density of E^beta(t).
/// The mode sum is carried inside the integrand; its length is fixed by
/// doubling before each quadrature pass. beta = 1 collapses the clock to t.
SolutionField solve_inverse_stable_quadrature(const Domain& domain, const InitialCondition& f,
                                              const FractionalOrder& order,
                                              const std::vector<GridPoint>& grid,
                                              const QuadratureOptions& opts = {});

/// (int_0^inf e^{-lambda l} f_t(l) dl, E_beta(-lambda t^beta))
std::pair<double, double> mode_laplace_identity(double beta, double lambda, double t);

/// u(t,x) = 2 int_0^inf T_D(s) f(x) p^alpha(t,s) ds, the semigroup run on |Y(t)|.
SolutionField solve_alpha_clock_quadrature(const Domain& domain, const InitialCondition& f,
                                           const StableClockParam& alpha,
                                           const std::vector<GridPoint>& grid,
                                           const QuadratureOptions& opts = {});

/// int_0^inf e^{-lambda s} p^alpha(t,s) ds (one half of the per-mode factor).
double alpha_clock_mode_integral(double alpha, double lambda, double t, double tol = 1e-12);

/// max over the grid of |u_tt + 2 Delta f/(pi t) + Delta^2 u| for the alpha = 1
/// solution. u_tt by central differences with Richardson step selection;
/// Delta f and Delta^2 u by term-wise multiplication with -lambda_n.
double cauchy_clock_residual(const Domain& domain, const InitialCondition& f,
                             const std::vector<GridPoint>& grid);

}  // namespace fracsub
