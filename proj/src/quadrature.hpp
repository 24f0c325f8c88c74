#pragma once

// Thin wrappers over the Boost.Math double-exponential and Gauss-Kronrod
// rules. The integrator objects precompute abscissae, so one instance is kept
// per thread.

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <limits>

namespace fracsub::detail {

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  double l1 = 0.0;
};

inline boost::math::quadrature::tanh_sinh<double>& tanh_sinh_rule() {
  thread_local boost::math::quadrature::tanh_sinh<double> rule(15);
  return rule;
}

inline boost::math::quadrature::exp_sinh<double>& exp_sinh_rule() {
  thread_local boost::math::quadrature::exp_sinh<double> rule(9);
  return rule;
}

// Integral over a finite interval; tol is relative to the L1 norm.
template <class F>
QuadResult integrate_finite(const F& f, double a, double b, double tol) {
  QuadResult r;
  if (!(b > a)) return r;
  r.value = tanh_sinh_rule().integrate(f, a, b, tol, &r.error, &r.l1);
  return r;
}

// Integral over [a, inf).
template <class F>
QuadResult integrate_to_infinity(const F& f, double a, double tol) {
  QuadResult r;
  r.value = exp_sinh_rule().integrate(f, a, std::numeric_limits<double>::infinity(), tol,
                                      &r.error, &r.l1);
  return r;
}

// Adaptive 31-point Gauss-Kronrod on a finite panel.
template <class F>
QuadResult integrate_gk(const F& f, double a, double b, double tol, unsigned max_depth = 12) {
  QuadResult r;
  r.value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, max_depth, tol,
                                                                          &r.error, &r.l1);
  return r;
}

inline QuadResult operator+(QuadResult a, const QuadResult& b) {
  a.value += b.value;
  a.error += b.error;
  a.l1 += b.l1;
  return a;
}

}  // namespace fracsub::detail
