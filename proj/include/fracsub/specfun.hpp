#pragma once

// Analytic kernels: Mittag-Leffler function on the negative real axis, the
// one-sided stable density and its inverse-subordinator counterpart, and the
// symmetric alpha-stable transition density in one dimension.
//
// Conventions: Brownian motion has variance 2t, so the heat generator is the
// plain Laplacian and the alpha = 2 kernel is a Gaussian of variance 2t.

#include <optional>
#include <utility>

namespace fracsub {

/// Time-fractional order beta in (0, 1]. beta = 1 is the classical heat case.
/// When built from an integer m the order is exactly 1/m and m is retained.
class FractionalOrder {
 public:
  static FractionalOrder from_beta(double beta);
  static FractionalOrder from_m(int m);
  static FractionalOrder heat() { return FractionalOrder(1.0, std::nullopt); }

  double beta() const noexcept { return beta_; }
  std::optional<int> m() const noexcept { return m_; }
  bool is_heat() const noexcept { return beta_ == 1.0; }

 private:
  FractionalOrder(double beta, std::optional<int> m) : beta_(beta), m_(m) {}
  double beta_;
  std::optional<int> m_;
};

/// Stability index alpha in (0, 2], optionally given as a reduced fraction l/m.
class StableClockParam {
 public:
  static StableClockParam from_alpha(double alpha);
  static StableClockParam from_rational(int l, int m);

  double alpha() const noexcept { return alpha_; }
  std::optional<std::pair<int, int>> rational() const noexcept { return rational_; }

 private:
  StableClockParam(double alpha, std::optional<std::pair<int, int>> r)
      : alpha_(alpha), rational_(r) {}
  double alpha_;
  std::optional<std::pair<int, int>> rational_;
};

/// E_beta(-x) for x >= 0 and 0 < beta <= 1.
///
/// Taylor series for x <= 1, a positive integral representation for
/// 1 < x <= 1e6 and the algebraic asymptotic expansion beyond. Absolute error
/// is below 1e-12 throughout.
double mittag_leffler(double beta, double x);
inline double mittag_leffler(const FractionalOrder& order, double x) {
  return mittag_leffler(order.beta(), x);
}

/// d/dx E_beta(-x), evaluated from the termwise-differentiated representation
/// used in each region of mittag_leffler. Always <= 0.
double mittag_leffler_dx(double beta, double x);

/// Density g_beta of the one-sided stable law with Laplace transform
/// exp(-s^beta), 0 < beta < 1.
double stable_density(double beta, double u);

/// Distribution function of the same law.
double stable_cdf(double beta, double u);

/// Density of the inverse stable subordinator E^beta(t) at x:
/// (t / beta) x^{-1-1/beta} g_beta(t x^{-1/beta}).
double inverse_stable_density(double beta, double t, double x);

/// Transition density p^alpha(t, s) of the symmetric alpha-stable process with
/// characteristic function exp(-t |xi|^alpha).
double alpha_stable_density_1d(const StableClockParam& alpha, double t, double s);
double alpha_stable_density_1d(double alpha, double t, double s);

}  // namespace fracsub
