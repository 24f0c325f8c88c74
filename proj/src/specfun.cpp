#include "fracsub/specfun.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/ooura_fourier_integrals.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/sin_pi.hpp>

#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "fracsub/errors.hpp"
#include "quadrature.hpp"
#include "fracsub/detail/specfun.hpp"

namespace fracsub {

namespace {

constexpr double kPi = boost::math::constants::pi<double>();
constexpr double kTaylorLimit = 1.0;
constexpr double kAsymptoticStart = 1e6;

std::string describe(const char* what, double v) {
  std::ostringstream os;
  os.precision(17);
  os << what << " = " << v;
  return os.str();
}

void check_ml_beta(double beta) {
  if (!(beta > 0.0 && beta <= 1.0)) {
    throw ParameterError(describe("Mittag-Leffler order must satisfy 0 < beta <= 1, got beta", beta));
  }
}

void check_subordinator_beta(double beta) {
  if (!(beta > 0.0 && beta < 1.0)) {
    throw ParameterError(describe("stable index must satisfy 0 < beta < 1, got beta", beta));
  }
}

// 1/Gamma(z), zero at the poles.
double rgamma(double z) {
  if (z <= 0.0 && z == std::floor(z)) return 0.0;
  if (z > 170.0) return 0.0;
  return 1.0 / boost::math::tgamma(z);
}

double ml_taylor(double beta, double x, bool derivative) {
  double sum = 0.0;
  const double logx = x > 0.0 ? std::log(x) : -std::numeric_limits<double>::infinity();
  for (int k = derivative ? 1 : 0; k < 4000; ++k) {
    const int power = derivative ? k - 1 : k;
    double mag;
    if (power == 0) {
      mag = std::exp(-boost::math::lgamma(1.0 + beta * k));
    } else {
      if (x == 0.0) break;
      mag = std::exp(power * logx - boost::math::lgamma(1.0 + beta * k));
    }
    if (derivative) mag *= k;
    const double sign = (power % 2 == 0) ? 1.0 : -1.0;
    // d/dx (-x)^k = -k (-x)^{k-1}
    sum += (derivative ? -sign : sign) * mag;
    if (k > 4 && mag < 1e-18 * std::max(1.0, std::abs(sum))) break;
  }
  return sum;
}

// E_beta(-x) = sin(beta pi)/(beta pi) * int_0^inf exp(-v^{1/beta}) x / (v^2 + 2 v x cos(beta pi) + x^2) dv
// obtained from the completely monotone spectral representation after the
// substitution v = r^beta, which removes the endpoint singularity.
double ml_integral(double beta, double x, bool derivative) {
  const double c = std::cos(beta * kPi);
  const double pref = boost::math::sin_pi(beta) / (beta * kPi);
  auto integrand = [=](double v) {
    const double w = std::exp(-std::pow(v, 1.0 / beta));
    if (w == 0.0) return 0.0;
    const double den = v * v + 2.0 * v * x * c + x * x;
    if (derivative) return w * (v * v - x * x) / (den * den);
    return w * x / den;
  };
  // Breakpoints: the Lorentzian centre and the decay scale of the weight.
  const double centre = std::max(0.0, -x * c);
  double knots[4] = {0.0, 1.0, 1.0, 1.0};
  int nk = 2;
  if (centre > 1.0) {
    knots[nk++] = centre;
  } else if (centre > 0.0) {
    knots[1] = centre;
    knots[nk++] = 1.0;
  }
  double total = 0.0;
  for (int i = 0; i + 1 < nk; ++i) {
    total += detail::integrate_finite(integrand, knots[i], knots[i + 1], 1e-15).value;
  }
  total += detail::integrate_to_infinity(integrand, knots[nk - 1], 1e-15).value;
  return pref * total;
}

double ml_asymptotic(double beta, double x, bool derivative) {
  double sum = 0.0;
  double prev = std::numeric_limits<double>::infinity();
  for (int k = 1; k < 200; ++k) {
    double term = std::pow(x, -k - (derivative ? 1 : 0)) * rgamma(1.0 - beta * k);
    if (derivative) term *= -k;
    const double mag = std::abs(term);
    if (mag > prev && mag != 0.0) break;  // divergent tail
    sum += (k % 2 == 1) ? term : -term;
    if (mag != 0.0) prev = mag;
    if (mag != 0.0 && mag < 1e-20 * std::abs(sum)) break;
  }
  return sum;
}

}  // namespace

FractionalOrder FractionalOrder::from_beta(double beta) {
  if (!(beta > 0.0 && beta <= 1.0)) {
    throw ParameterError(describe("fractional order must satisfy 0<β<1 (or β=1 for heat), got beta", beta));
  }
  return FractionalOrder(beta, std::nullopt);
}

FractionalOrder FractionalOrder::from_m(int m) {
  if (m < 2) {
    throw ParameterError("higher-order index must satisfy m >= 2, got m = " + std::to_string(m));
  }
  return FractionalOrder(1.0 / static_cast<double>(m), m);
}

StableClockParam StableClockParam::from_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha <= 2.0)) {
    throw ParameterError(describe("stability index must satisfy 0<α<=2, got alpha", alpha));
  }
  return StableClockParam(alpha, std::nullopt);
}

StableClockParam StableClockParam::from_rational(int l, int m) {
  if (l <= 0 || m <= 0) {
    throw ParameterError("rational stability index needs positive l and m");
  }
  if (std::gcd(l, m) != 1) {
    throw ParameterError("rational stability index l/m must be reduced: gcd(" + std::to_string(l) +
                         ", " + std::to_string(m) + ") != 1");
  }
  const double alpha = static_cast<double>(l) / static_cast<double>(m);
  if (alpha > 2.0) {
    throw ParameterError(describe("stability index must satisfy 0<α<=2, got alpha", alpha));
  }
  return StableClockParam(alpha, std::make_pair(l, m));
}

double mittag_leffler(double beta, double x) {
  check_ml_beta(beta);
  if (!(x >= 0.0)) throw ParameterError(describe("Mittag-Leffler argument must be >= 0, got x", x));
  if (beta == 1.0) return std::exp(-x);
  if (std::isinf(x)) return 0.0;
  if (x <= kTaylorLimit) return ml_taylor(beta, x, false);
  if (x <= kAsymptoticStart) return ml_integral(beta, x, false);
  return ml_asymptotic(beta, x, false);
}

double mittag_leffler_dx(double beta, double x) {
  check_ml_beta(beta);
  if (!(x >= 0.0)) throw ParameterError(describe("Mittag-Leffler argument must be >= 0, got x", x));
  if (beta == 1.0) return -std::exp(-x);
  if (std::isinf(x)) return 0.0;
  if (x <= kTaylorLimit) return ml_taylor(beta, x, true);
  if (x <= kAsymptoticStart) return ml_integral(beta, x, true);
  return ml_asymptotic(beta, x, true);
}

namespace detail {

double ml_region(double beta, double x, MlRegion region) {
  switch (region) {
    case MlRegion::taylor:
      return ml_taylor(beta, x, false);
    case MlRegion::integral:
      return ml_integral(beta, x, false);
    case MlRegion::asymptotic:
      return ml_asymptotic(beta, x, false);
  }
  return 0.0;
}

// Integral over (0, L) of V^power exp(-z V) for a monotone V given through
// its logarithm. log_v evaluates at theta, log_v_c at the complement L - theta
// so both endpoints keep full relative precision.
template <class LogV, class LogVc>
double peaked_integral(const LogV& log_v, const LogVc& log_v_c, double span, double z, int power) {
  const double target = -std::log(z);
  const double half = 0.5 * span;
  auto value = [=](double lv) {
    if (std::isnan(lv)) return 0.0;
    const double v = std::exp(lv);
    if (std::isinf(v)) return 0.0;
    const double e = -z * v;
    return power == 0 ? std::exp(e) : std::exp(lv + e);
  };
  double total = 0.0;
  auto segment = [&](const auto& lv_of) {
    auto f = [&](double s) { return value(lv_of(s)); };
    // locate lv_of(s) == target on a log scale in s
    const double lo_s = 1e-150;
    const double lv_lo = lv_of(lo_s);
    const double lv_hi = lv_of(half);
    double split = -1.0;
    if ((lv_lo - target) * (lv_hi - target) < 0.0) {
      double a = std::log(lo_s), b = std::log(half);
      const bool rising = lv_hi > lv_lo;
      for (int it = 0; it < 200 && b - a > 1e-14; ++it) {
        const double mid = 0.5 * (a + b);
        const double lm = lv_of(std::exp(mid));
        if ((lm < target) == rising) {
          a = mid;
        } else {
          b = mid;
        }
      }
      split = std::exp(0.5 * (a + b));
    }
    if (split > 0.0) {
      total += integrate_finite(f, 0.0, split, 1e-14).value;
      total += integrate_finite(f, split, half, 1e-14).value;
    } else {
      total += integrate_finite(f, 0.0, half, 1e-14).value;
    }
  };
  segment(log_v);
  segment(log_v_c);
  return total;
}

}  // namespace detail

namespace {

// Zolotarev/Kanter function of the one-sided stable law,
// A(phi) = [sin^beta(beta phi) sin^{1-beta}((1-beta) phi) / sin(phi)]^{1/(1-beta)}.
double kanter_log_a(double beta, double phi, double sin_phi) {
  const double r = 1.0 / (1.0 - beta);
  return r * (beta * std::log(std::sin(beta * phi)) +
              (1.0 - beta) * std::log(std::sin((1.0 - beta) * phi)) - std::log(sin_phi));
}

double kanter_integral(double beta, double z, int power) {
  auto log_a = [=](double phi) { return kanter_log_a(beta, phi, std::sin(phi)); };
  auto log_a_c = [=](double psi) { return kanter_log_a(beta, kPi - psi, std::sin(psi)); };
  return detail::peaked_integral(log_a, log_a_c, kPi, z, power);
}

// Convergent large-argument series of g_beta.
double stable_density_series(double beta, double u) {
  double sum = 0.0;
  for (int k = 1; k < 100; ++k) {
    const double term = std::exp(boost::math::lgamma(beta * k + 1.0) - boost::math::lgamma(k + 1.0) -
                                 (beta * k + 1.0) * std::log(u)) *
                        boost::math::sin_pi(beta * k);
    sum += (k % 2 == 1) ? term : -term;
    if (std::abs(term) < 1e-19 * std::abs(sum) && k > 2) break;
  }
  return sum / kPi;
}

constexpr double kSeriesThreshold = 1e-4;  // switch to the series once u^{-beta} is below this

}  // namespace

double stable_density(double beta, double u) {
  check_subordinator_beta(beta);
  if (!(u > 0.0)) throw ParameterError(describe("stable density argument must be > 0, got u", u));
  if (std::isinf(u)) return 0.0;
  if (beta == 0.5) {
    return std::exp(-1.0 / (4.0 * u) - 1.5 * std::log(u)) / (2.0 * std::sqrt(kPi));
  }
  if (std::pow(u, -beta) < kSeriesThreshold) return stable_density_series(beta, u);
  const double z = std::pow(u, -beta / (1.0 - beta));
  // exp(-z A(0)) bounds the integrand; A(0) = (beta^beta (1-beta)^{1-beta})^{1/(1-beta)}
  const double log_a0 = (beta * std::log(beta) + (1.0 - beta) * std::log(1.0 - beta)) / (1.0 - beta);
  if (z * std::exp(log_a0) > 740.0) return 0.0;
  const double integral = kanter_integral(beta, z, 1);
  return beta / (1.0 - beta) * std::pow(u, -1.0 / (1.0 - beta)) * integral / kPi;
}

double stable_cdf(double beta, double u) {
  check_subordinator_beta(beta);
  if (!(u > 0.0)) {
    if (u == 0.0) return 0.0;
    throw ParameterError(describe("stable cdf argument must be >= 0, got u", u));
  }
  if (std::isinf(u)) return 1.0;
  if (beta == 0.5) return std::erfc(0.5 / std::sqrt(u));
  const double z = std::pow(u, -beta / (1.0 - beta));
  const double log_a0 = (beta * std::log(beta) + (1.0 - beta) * std::log(1.0 - beta)) / (1.0 - beta);
  if (z * std::exp(log_a0) > 740.0) return 0.0;
  return kanter_integral(beta, z, 0) / kPi;
}

double inverse_stable_density(double beta, double t, double x) {
  check_subordinator_beta(beta);
  if (!(t > 0.0)) throw ParameterError(describe("inverse stable density needs t > 0, got t", t));
  if (!(x > 0.0)) throw ParameterError(describe("inverse stable density needs x > 0, got x", x));
  if (std::isinf(x)) return 0.0;
  const double u = t * std::pow(x, -1.0 / beta);
  if (std::isinf(u)) {
    // x -> 0+ limit
    return std::pow(t, -beta) * rgamma(1.0 - beta);
  }
  if (u == 0.0) return 0.0;
  const double g = stable_density(beta, u);
  if (g == 0.0) return 0.0;
  return t / beta * std::exp((-1.0 - 1.0 / beta) * std::log(x) + std::log(g));
}

namespace detail {

double alpha_stable_unit_fourier(double alpha, double y) {
  y = std::abs(y);
  if (y == 0.0) return boost::math::tgamma(1.0 + 1.0 / alpha) / kPi;
  auto decay = [alpha](double xi) { return std::exp(-std::pow(xi, alpha)); };
  if (y <= 1.0) {
    auto f = [&](double xi) { return std::cos(y * xi) * decay(xi); };
    return integrate_to_infinity(f, 0.0, 1e-14).value / kPi;
  }
  thread_local boost::math::quadrature::ooura_fourier_cos<double> ooura(1e-11, 10);
  const auto [value, err] = ooura.integrate(decay, y);
  (void)err;
  return value / kPi;
}

// Large-|y| expansion; convergent for alpha < 1, asymptotic for alpha > 1.
double alpha_stable_unit_series(double alpha, double y, double* last_term) {
  y = std::abs(y);
  double sum = 0.0;
  double prev = std::numeric_limits<double>::infinity();
  double last = prev;
  for (int k = 1; k < 200; ++k) {
    const double mag = std::exp(boost::math::lgamma(alpha * k + 1.0) - boost::math::lgamma(k + 1.0) -
                                (alpha * k + 1.0) * std::log(y));
    const double term = mag * boost::math::sin_pi(0.5 * alpha * k);
    if (mag > prev) break;
    prev = mag;
    last = std::abs(term) > 0.0 ? mag : last;
    sum += (k % 2 == 1) ? term : -term;
    if (mag < 1e-19 * std::abs(sum) && k > 2) {
      last = mag;
      break;
    }
  }
  if (last_term) *last_term = last;
  return sum / kPi;
}

}  // namespace detail

double alpha_stable_density_1d(const StableClockParam& alpha, double t, double s) {
  return alpha_stable_density_1d(alpha.alpha(), t, s);
}

double alpha_stable_density_1d(double alpha, double t, double s) {
  if (!(alpha > 0.0 && alpha <= 2.0)) {
    throw ParameterError(describe("stability index must satisfy 0<α<=2, got alpha", alpha));
  }
  if (!(t > 0.0)) throw ParameterError(describe("alpha-stable density needs t > 0, got t", t));
  if (std::isinf(s)) return 0.0;
  if (alpha == 1.0) return t / (kPi * (t * t + s * s));
  if (alpha == 2.0) return std::exp(-s * s / (4.0 * t)) / std::sqrt(4.0 * kPi * t);
  const double scale = std::pow(t, 1.0 / alpha);
  const double y = std::abs(s) / scale;
  if (y > 8.0) {
    double last = 0.0;
    const double v = detail::alpha_stable_unit_series(alpha, y, &last);
    if (last < 1e-17 * std::max(v, 1e-300)) return v / scale;
  }
  return detail::alpha_stable_unit_fourier(alpha, y) / scale;
}

}  // namespace fracsub
