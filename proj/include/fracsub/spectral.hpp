#pragma once

// Bounded domains described by their Dirichlet eigenpairs, projection of
// initial data onto the eigenbasis, and the series solutions built from it.

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "fracsub/specfun.hpp"

namespace fracsub {

using Point = std::vector<double>;
using PointFn = std::function<double(const Point&)>;

struct EigenMode {
  int n = 0;  // 1-based position in the sorted spectrum
  double lambda = 0.0;
  PointFn phi;
  double sup_norm = 0.0;
  std::vector<int> multi_index;  // empty for table domains
};

struct TableMode {
  double lambda = 0.0;
  PointFn phi;
  double sup_norm = 0.0;
};

/// User-supplied spectrum on a domain contained in the box [lower, upper].
/// `inside` defaults to the open box; `boundary_samples` defaults to points
/// on the faces of the box.
struct TableSpec {
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<TableMode> modes;
  std::function<bool(const Point&)> inside;
  std::vector<Point> boundary_samples;
};

class Domain {
 public:
  enum class Kind { interval, box, table };

  /// (0, length)
  static Domain interval(double length);
  /// (0, L_1) x ... x (0, L_d)
  static Domain box(std::vector<double> sides);
  /// Validates eigenvalue ordering, boundary vanishing (1e-10) and
  /// orthonormality (1e-6) before accepting the table.
  static Domain table(TableSpec spec);

  Kind kind() const noexcept { return kind_; }
  int dim() const noexcept { return static_cast<int>(lower_.size()); }
  const std::vector<double>& lower() const noexcept { return lower_; }
  const std::vector<double>& upper() const noexcept { return upper_; }
  double scale() const noexcept;
  bool contains(const Point& x) const;

  /// Points on the boundary, `per_edge` per side direction of each face.
  std::vector<Point> boundary_samples(int per_edge = 5) const;

  /// First `count` eigenpairs, nondecreasing in lambda. Box ties are broken by
  /// the lexicographic order of the multi-index.
  std::vector<EigenMode> eigenpairs(int count) const;

  /// Largest mode count available; unbounded for interval and box.
  int capacity() const noexcept;

  const TableSpec* table_spec() const noexcept { return table_.get(); }

 private:
  Domain(Kind kind, std::vector<double> lower, std::vector<double> upper)
      : kind_(kind), lower_(std::move(lower)), upper_(std::move(upper)) {}
  Kind kind_;
  std::vector<double> lower_;
  std::vector<double> upper_;
  std::shared_ptr<const TableSpec> table_;
};

/// f_bar(n) = int_D phi_n f dx for the first `count` modes. tol <= 0 selects
/// the default absolute tolerance: 1e-10 on intervals, 1e-8 otherwise.
/// Non-finite samples of f raise InputError.
std::vector<double> coefficients(const Domain& domain, const PointFn& f, int count,
                                 double tol = 0.0);

class InitialCondition {
 public:
  explicit InitialCondition(PointFn f, std::string label = "custom");

  double operator()(const Point& x) const { return f_(x); }
  const PointFn& fn() const noexcept { return f_; }
  const std::string& label() const noexcept { return label_; }

  /// Copy of this condition carrying cached coefficients on `domain`.
  InitialCondition project(const Domain& domain, int count, double tol = 0.0) const;

  const std::vector<double>& coeffs() const;
  int coeff_count() const noexcept { return coeffs_ ? static_cast<int>(coeffs_->size()) : 0; }

 private:
  PointFn f_;
  std::string label_;
  std::shared_ptr<const std::vector<double>> coeffs_;
};

/// Named initial data: "sine" (first mode shape, d = 1), "product-sine",
/// "bump" (product of exp(4/L^2 - 1/(x(L-x))), peak 1) and "polynomial"
/// (product of x(L-x)). Interval and box domains only.
InitialCondition builtin_initial(const std::string& name, const Domain& domain);

struct PointEstimate {
  double value = 0.0;
  double err = 0.0;
};

/// T_D(t)f(x) from the first n_modes terms; err compares against n_modes/2.
PointEstimate heat_semigroup(const Domain& domain, const InitialCondition& f, double t,
                             const Point& x, int n_modes);

struct GridPoint {
  double t = 0.0;
  Point x;
};

/// Cartesian product, time-major.
std::vector<GridPoint> make_grid(const std::vector<double>& times, const std::vector<Point>& points);

enum class Method { spectral, quadrature, mc };
const char* method_name(Method m);

struct SolutionField {
  std::vector<GridPoint> grid;
  std::vector<double> values;
  std::vector<double> err;
  Method method = Method::spectral;
  int truncation = 0;
};

struct SpectralOptions {
  double tol = 1e-12;
  int initial_modes = 4;
  // Evaluate Delta^l u instead of u (term-wise multiplication by (-lambda)^l).
  int laplacian_power = 0;
  // > 0: sum exactly this many modes (t = 0 included) instead of doubling;
  // err is then the gap to the half-length sum
  int fixed_modes = 0;
};

/// u(t,x) = sum f_bar(n) phi_n(x) E_beta(-lambda_n t^beta), truncated by
/// doubling N until consecutive partial sums agree to tol at every point.
/// t = 0 returns f(x) exactly.
SolutionField solve_spectral(const Domain& domain, const InitialCondition& f,
                             const FractionalOrder& order, const std::vector<GridPoint>& grid,
                             const SpectralOptions& opts = {});

/// max over t of |d/dt E - sum_{j<m} t^{j/m-1}/Gamma(j/m) (-lambda)^j - (-lambda)^m E|
/// with E = E_{1/m}(-lambda t^{1/m}).
double per_mode_higher_order_residual(double lambda, int m, const std::vector<double>& t_grid);

struct DecayFit {
  double slope = 0.0;
  int modes_used = 0;
  bool pass = false;
};

struct DecayOptions {
  int count = 1024;
  double floor = 1e-11;  // coefficients below this are treated as zero
  double tol = 1e-13;
};

/// Least-squares slope of log|f_bar(n)| against log lambda_n over the modes
/// above the noise floor; passes when slope <= -k + 0.5. Fewer than 8 usable
/// modes raise InsufficientDataError.
DecayFit fit_coefficient_decay(const Domain& domain, const PointFn& f, int k,
                               const DecayOptions& opts = {});
bool coefficient_decay_check(const Domain& domain, const PointFn& f, int k,
                             const DecayOptions& opts = {});

}  // namespace fracsub
