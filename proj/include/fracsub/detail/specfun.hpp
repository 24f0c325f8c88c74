#pragma once

// Internal entry points of specfun, exposed for cross-region tests.

namespace fracsub::detail {

enum class MlRegion { taylor, integral, asymptotic };

// E_beta(-x) evaluated with one specific representation regardless of x.
double ml_region(double beta, double x, MlRegion region);

// Unit-time symmetric stable density by cosine-transform inversion.
double alpha_stable_unit_fourier(double alpha, double y);

// Large-|y| series of the unit-time symmetric stable density; last_term
// receives the magnitude of the last term kept.
double alpha_stable_unit_series(double alpha, double y, double* last_term);

}  // namespace fracsub::detail
