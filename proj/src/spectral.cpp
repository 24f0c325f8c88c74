#include "fracsub/spectral.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/sin_pi.hpp>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include "fracsub/errors.hpp"
#include "quadrature.hpp"

namespace fracsub {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr std::size_t kMaxTensorPoints = std::size_t{1} << 24;

std::string fmt_point(const Point& x) {
  std::ostringstream os;
  os.precision(17);
  os << '(';
  for (std::size_t i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x[i];
  os << ')';
  return os.str();
}

double checked_eval(const PointFn& f, const Point& x) {
  const double v = f(x);
  if (!std::isfinite(v)) throw InputError("initial condition is not finite at " + fmt_point(x));
  return v;
}

// sqrt(2/L) sin(n pi x / L), exactly zero at both ends.
double sine_mode(int n, double x, double length) {
  return std::sqrt(2.0 / length) * boost::math::sin_pi(n * (x / length));
}

struct AxisRule {
  std::vector<double> x;
  std::vector<double> w;
};

// Composite 10-point Gauss-Legendre.
AxisRule composite_gauss(double a, double b, int panels) {
  using rule = boost::math::quadrature::gauss<double, 10>;
  const auto& abs = rule::abscissa();
  const auto& wts = rule::weights();
  AxisRule r;
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * h;
    for (std::size_t i = 0; i < abs.size(); ++i) {
      for (double s : {-1.0, 1.0}) {
        r.x.push_back(mid + s * abs[i] * h / 2);
        r.w.push_back(wts[i] * h / 2);
      }
    }
  }
  return r;
}

// Evaluates w(x) f(x) on the tensor grid, row-major in the axis order.
std::vector<double> tensor_samples(const std::vector<AxisRule>& rules, const PointFn& f,
                                   const std::function<bool(const Point&)>& inside) {
  const int d = static_cast<int>(rules.size());
  std::size_t total = 1;
  for (const auto& r : rules) total *= r.x.size();
  std::vector<double> out(total);
  std::vector<std::size_t> idx(d, 0);
  Point x(d);
  for (std::size_t k = 0; k < total; ++k) {
    double w = 1.0;
    for (int i = 0; i < d; ++i) {
      x[i] = rules[i].x[idx[i]];
      w *= rules[i].w[idx[i]];
    }
    out[k] = (inside && !inside(x)) ? 0.0 : w * checked_eval(f, x);
    for (int i = d - 1; i >= 0; --i) {
      if (++idx[i] < rules[i].x.size()) break;
      idx[i] = 0;
    }
  }
  return out;
}

// Contracts axis `axis` of a row-major tensor with the rows of m (r x dims[axis]).
std::vector<double> contract(const std::vector<double>& t, std::vector<std::size_t>& dims, int axis,
                             const std::vector<double>& m, std::size_t r) {
  std::size_t outer = 1, inner = 1;
  for (int j = 0; j < axis; ++j) outer *= dims[j];
  for (std::size_t j = axis + 1; j < dims.size(); ++j) inner *= dims[j];
  const std::size_t a = dims[axis];
  std::vector<double> out(outer * r * inner, 0.0);
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t row = 0; row < r; ++row) {
      double* dst = &out[(o * r + row) * inner];
      for (std::size_t k = 0; k < a; ++k) {
        const double c = m[row * a + k];
        if (c == 0.0) continue;
        const double* src = &t[(o * a + k) * inner];
        for (std::size_t in = 0; in < inner; ++in) dst[in] += c * src[in];
      }
    }
  }
  dims[axis] = r;
  return out;
}

// Rows n = 1..nmax of sqrt(2/L) sin(n pi (x - a)/L) at the given nodes, by
// angle-addition recurrence reseeded every 32 steps.
std::vector<double> sine_table(const std::vector<double>& nodes, double a, double len, int nmax) {
  const std::size_t m = nodes.size();
  std::vector<double> s(static_cast<std::size_t>(nmax) * m);
  const double norm = std::sqrt(2.0 / len);
  const double pi = boost::math::constants::pi<double>();
  for (std::size_t k = 0; k < m; ++k) {
    const double theta = pi * (nodes[k] - a) / len;
    const double c1 = std::cos(theta), s1 = std::sin(theta);
    double cn = 1.0, sn = 0.0;
    for (int n = 1; n <= nmax; ++n) {
      if (n % 32 == 1) {
        cn = std::cos(n * theta);
        sn = std::sin(n * theta);
      } else {
        const double c = cn * c1 - sn * s1;
        sn = sn * c1 + cn * s1;
        cn = c;
      }
      s[(n - 1) * m + k] = norm * sn;
    }
  }
  return s;
}

// Composite Gauss-Legendre on the tensor grid, one panel per half-wave of the
// highest mode along each axis, doubled until the coefficients settle.
std::vector<double> box_coefficients(const Domain& d, const PointFn& f,
                                     const std::vector<EigenMode>& modes, double tol) {
  const int dim = d.dim();
  std::vector<int> nmax(dim, 1);
  for (const auto& m : modes)
    for (int i = 0; i < dim; ++i) nmax[i] = std::max(nmax[i], m.multi_index[i]);
  std::vector<int> panels(dim);
  for (int i = 0; i < dim; ++i) panels[i] = std::max(2, nmax[i]);

  std::vector<double> prev;
  double delta = std::numeric_limits<double>::infinity();
  for (;;) {
    std::vector<AxisRule> rules;
    std::size_t total = 1;
    for (int i = 0; i < dim; ++i) {
      rules.push_back(composite_gauss(d.lower()[i], d.upper()[i], panels[i]));
      total *= rules.back().x.size();
    }
    if (total > kMaxTensorPoints) {
      throw NumericError("box coefficient quadrature did not reach tolerance", prev.empty() ? 0.0 : prev[0],
                         delta);
    }
    std::vector<double> t = tensor_samples(rules, f, nullptr);
    std::vector<std::size_t> dims(dim);
    for (int i = 0; i < dim; ++i) dims[i] = rules[i].x.size();
    for (int i = 0; i < dim; ++i) {
      const auto s = sine_table(rules[i].x, d.lower()[i], d.upper()[i] - d.lower()[i], nmax[i]);
      t = contract(t, dims, i, s, nmax[i]);
    }
    std::vector<double> cur(modes.size());
    for (std::size_t j = 0; j < modes.size(); ++j) {
      std::size_t flat = 0;
      for (int i = 0; i < dim; ++i) flat = flat * nmax[i] + (modes[j].multi_index[i] - 1);
      cur[j] = t[flat];
    }
    if (!prev.empty()) {
      delta = 0.0;
      for (std::size_t j = 0; j < cur.size(); ++j) delta = std::max(delta, std::abs(cur[j] - prev[j]));
      if (delta < tol) return cur;
    }
    prev = std::move(cur);
    for (auto& p : panels) p *= 2;
  }
}

// Projections onto arbitrary evaluators over the bounding box. Returns the
// matrix of integrals <phi_i, g_j> for phi = modes, g = rhs functions.
std::vector<double> table_projection(const Domain& d, const std::vector<PointFn>& lhs,
                                     const std::vector<PointFn>& rhs, double tol,
                                     bool throw_on_failure, int start_panels = 8) {
  const TableSpec& spec = *d.table_spec();
  const int dim = d.dim();
  int panels = start_panels;
  std::vector<double> prev;
  double delta = std::numeric_limits<double>::infinity();
  for (;;) {
    std::vector<AxisRule> rules;
    std::size_t total = 1;
    for (int i = 0; i < dim; ++i) {
      rules.push_back(composite_gauss(d.lower()[i], d.upper()[i], panels));
      total *= rules.back().x.size();
    }
    if (total * (lhs.size() + rhs.size()) > kMaxTensorPoints * 4) {
      if (!throw_on_failure && !prev.empty()) return prev;
      throw NumericError("table quadrature did not reach tolerance", prev.empty() ? 0.0 : prev[0], delta);
    }
    const std::vector<double> w = tensor_samples(rules, [](const Point&) { return 1.0; }, spec.inside);
    auto sample = [&](const PointFn& g) {
      std::vector<double> v(total);
      std::vector<std::size_t> idx(dim, 0);
      Point x(dim);
      for (std::size_t k = 0; k < total; ++k) {
        for (int i = 0; i < dim; ++i) x[i] = rules[i].x[idx[i]];
        v[k] = w[k] == 0.0 ? 0.0 : checked_eval(g, x);
        for (int i = dim - 1; i >= 0; --i) {
          if (++idx[i] < rules[i].x.size()) break;
          idx[i] = 0;
        }
      }
      return v;
    };
    std::vector<std::vector<double>> ls, rs;
    for (const auto& g : lhs) ls.push_back(sample(g));
    for (const auto& g : rhs) rs.push_back(sample(g));
    std::vector<double> cur(lhs.size() * rhs.size());
    for (std::size_t i = 0; i < lhs.size(); ++i)
      for (std::size_t j = 0; j < rhs.size(); ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < total; ++k) s += w[k] * ls[i][k] * rs[j][k];
        cur[i * rhs.size() + j] = s;
      }
    if (!prev.empty()) {
      delta = 0.0;
      for (std::size_t k = 0; k < cur.size(); ++k) delta = std::max(delta, std::abs(cur[k] - prev[k]));
      if (delta < tol) return cur;
    }
    prev = std::move(cur);
    panels *= 2;
  }
}

std::vector<EigenMode> box_modes(const std::vector<double>& lower, const std::vector<double>& upper,
                                 int count) {
  const int dim = static_cast<int>(lower.size());
  std::vector<double> k2(dim);
  double base = 0.0;
  for (int i = 0; i < dim; ++i) {
    const double k = boost::math::constants::pi<double>() / (upper[i] - lower[i]);
    k2[i] = k * k;
    base += k2[i];
  }
  std::vector<double> rest_min(dim + 1, 0.0);
  for (int i = dim - 1; i >= 0; --i) rest_min[i] = rest_min[i + 1] + k2[i];

  struct Cand {
    double lambda;
    std::vector<int> idx;
  };
  std::vector<Cand> cands;
  double cap = 4.0 * base;
  for (;;) {
    cands.clear();
    std::vector<int> idx(dim, 1);
    std::function<void(int, double)> rec = [&](int axis, double partial) {
      if (axis == dim) {
        cands.push_back({partial, idx});
        return;
      }
      for (int n = 1;; ++n) {
        const double v = partial + n * n * k2[axis];
        if (v + rest_min[axis + 1] > cap) break;
        idx[axis] = n;
        rec(axis + 1, v);
      }
    };
    rec(0, 0.0);
    if (static_cast<int>(cands.size()) >= count) break;
    cap *= 2.0;
  }
  std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
    if (a.lambda != b.lambda) return a.lambda < b.lambda;
    return a.idx < b.idx;
  });

  double sup = 1.0;
  for (int i = 0; i < dim; ++i) sup *= std::sqrt(2.0 / (upper[i] - lower[i]));

  std::vector<EigenMode> out(count);
  for (int j = 0; j < count; ++j) {
    EigenMode& m = out[j];
    m.n = j + 1;
    m.lambda = cands[j].lambda;
    m.multi_index = cands[j].idx;
    m.sup_norm = sup;
    m.phi = [idx = m.multi_index, lower, upper](const Point& x) {
      double v = 1.0;
      for (std::size_t i = 0; i < idx.size(); ++i)
        v *= sine_mode(idx[i], x[i] - lower[i], upper[i] - lower[i]);
      return v;
    };
  }
  return out;
}

}  // namespace

Domain Domain::interval(double length) {
  if (!(length > 0.0) || !std::isfinite(length))
    throw ParameterError("interval length must be positive and finite");
  return Domain(Kind::interval, {0.0}, {length});
}

Domain Domain::box(std::vector<double> sides) {
  if (sides.empty()) throw ParameterError("box needs at least one side");
  for (double s : sides)
    if (!(s > 0.0) || !std::isfinite(s)) throw ParameterError("box sides must be positive and finite");
  std::vector<double> lo(sides.size(), 0.0);
  return Domain(Kind::box, std::move(lo), std::move(sides));
}

Domain Domain::table(TableSpec spec) {
  const std::size_t dim = spec.lower.size();
  if (dim == 0 || spec.upper.size() != dim) throw InputError("table bounding box is malformed");
  for (std::size_t i = 0; i < dim; ++i)
    if (!(spec.upper[i] > spec.lower[i])) throw InputError("table bounding box has nonpositive side");
  if (spec.modes.empty()) throw InputError("table has no modes");
  double prev = 0.0;
  for (std::size_t j = 0; j < spec.modes.size(); ++j) {
    const auto& m = spec.modes[j];
    if (!(m.lambda > 0.0)) throw InputError("table eigenvalue " + std::to_string(j + 1) + " is not positive");
    if (m.lambda < prev) throw InputError("table eigenvalues decrease at mode " + std::to_string(j + 1));
    if (!m.phi) throw InputError("table mode " + std::to_string(j + 1) + " has no evaluator");
    if (!(m.sup_norm > 0.0)) throw InputError("table mode " + std::to_string(j + 1) + " needs a positive sup norm");
    prev = m.lambda;
  }
  if (!spec.inside) {
    spec.inside = [lo = spec.lower, hi = spec.upper](const Point& x) {
      for (std::size_t i = 0; i < lo.size(); ++i)
        if (!(x[i] > lo[i] && x[i] < hi[i])) return false;
      return true;
    };
  }
  Domain d(Kind::table, spec.lower, spec.upper);
  if (spec.boundary_samples.empty()) {
    Domain box(Kind::box, spec.lower, spec.upper);
    spec.boundary_samples = box.boundary_samples();
  }
  for (const auto& p : spec.boundary_samples) {
    for (std::size_t j = 0; j < spec.modes.size(); ++j) {
      if (std::abs(spec.modes[j].phi(p)) > 1e-10)
        throw InputError("table mode " + std::to_string(j + 1) + " does not vanish at boundary point " +
                         fmt_point(p));
    }
  }
  d.table_ = std::make_shared<const TableSpec>(std::move(spec));

  const std::size_t check = std::min<std::size_t>(d.table_->modes.size(), 32);
  std::vector<PointFn> phis;
  for (std::size_t j = 0; j < check; ++j) phis.push_back(d.table_->modes[j].phi);
  const std::vector<double> gram = table_projection(d, phis, phis, 1e-8, false);
  for (std::size_t i = 0; i < check; ++i)
    for (std::size_t j = 0; j < check; ++j) {
      const double target = i == j ? 1.0 : 0.0;
      if (std::abs(gram[i * check + j] - target) > 1e-6) {
        throw InputError("table modes " + std::to_string(i + 1) + " and " + std::to_string(j + 1) +
                         " are not orthonormal (inner product " + std::to_string(gram[i * check + j]) + ")");
      }
    }
  return d;
}

double Domain::scale() const noexcept {
  double s = 0.0;
  for (std::size_t i = 0; i < lower_.size(); ++i) s = std::max(s, upper_[i] - lower_[i]);
  return s;
}

bool Domain::contains(const Point& x) const {
  if (x.size() != lower_.size()) throw ParameterError("point dimension does not match the domain");
  if (kind_ == Kind::table) return table_->inside(x);
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!(x[i] > lower_[i] && x[i] < upper_[i])) return false;
  return true;
}

std::vector<Point> Domain::boundary_samples(int per_edge) const {
  if (kind_ == Kind::table && table_) return table_->boundary_samples;
  const int d = dim();
  std::vector<Point> out;
  for (int face = 0; face < d; ++face) {
    for (double side : {lower_[face], upper_[face]}) {
      // grid of per_edge points along each remaining coordinate
      std::size_t total = 1;
      for (int i = 0; i < d - 1; ++i) total *= per_edge;
      for (std::size_t k = 0; k < total; ++k) {
        Point x(d);
        std::size_t rem = k;
        for (int i = 0; i < d; ++i) {
          if (i == face) {
            x[i] = side;
            continue;
          }
          const int j = static_cast<int>(rem % per_edge);
          rem /= per_edge;
          x[i] = lower_[i] + (upper_[i] - lower_[i]) * (j + 0.5) / per_edge;
        }
        out.push_back(std::move(x));
      }
    }
  }
  return out;
}

std::vector<EigenMode> Domain::eigenpairs(int count) const {
  if (count < 1) throw ParameterError("eigenpair count must be at least 1");
  if (kind_ != Kind::table) return box_modes(lower_, upper_, count);
  if (count > capacity()) {
    throw CapacityError("table holds " + std::to_string(capacity()) + " modes, " + std::to_string(count) +
                        " requested");
  }
  std::vector<EigenMode> out(count);
  for (int j = 0; j < count; ++j) {
    const TableMode& t = table_->modes[j];
    out[j] = EigenMode{j + 1, t.lambda, t.phi, t.sup_norm, {}};
  }
  return out;
}

int Domain::capacity() const noexcept {
  if (kind_ == Kind::table) return static_cast<int>(table_->modes.size());
  return std::numeric_limits<int>::max();
}

std::vector<double> coefficients(const Domain& domain, const PointFn& f, int count, double tol) {
  if (count < 1) throw ParameterError("coefficient count must be at least 1");
  switch (domain.kind()) {
    case Domain::Kind::interval:
      return box_coefficients(domain, f, domain.eigenpairs(count), tol > 0 ? tol : 1e-10);
    case Domain::Kind::box:
      return box_coefficients(domain, f, domain.eigenpairs(count), tol > 0 ? tol : 1e-8);
    case Domain::Kind::table: {
      std::vector<PointFn> phis;
      for (const auto& m : domain.eigenpairs(count)) phis.push_back(m.phi);
      return table_projection(domain, phis, {f}, tol > 0 ? tol : 1e-8, true);
    }
  }
  return {};
}

InitialCondition::InitialCondition(PointFn f, std::string label) : f_(std::move(f)), label_(std::move(label)) {
  if (!f_) throw ParameterError("initial condition needs an evaluator");
}

InitialCondition InitialCondition::project(const Domain& domain, int count, double tol) const {
  InitialCondition out(*this);
  out.coeffs_ = std::make_shared<const std::vector<double>>(coefficients(domain, f_, count, tol));
  return out;
}

const std::vector<double>& InitialCondition::coeffs() const {
  static const std::vector<double> empty;
  return coeffs_ ? *coeffs_ : empty;
}

InitialCondition builtin_initial(const std::string& name, const Domain& domain) {
  if (domain.kind() == Domain::Kind::table)
    throw ParameterError("built-in initial data are defined on intervals and boxes only");
  const std::vector<double> len = domain.upper();
  if (name == "sine") {
    if (domain.dim() != 1) throw ParameterError("'sine' needs a one-dimensional domain; use 'product-sine'");
    return InitialCondition([l = len[0]](const Point& x) { return boost::math::sin_pi(x[0] / l); }, name);
  }
  if (name == "product-sine") {
    return InitialCondition(
        [len](const Point& x) {
          double v = 1.0;
          for (std::size_t i = 0; i < len.size(); ++i) v *= boost::math::sin_pi(x[i] / len[i]);
          return v;
        },
        name);
  }
  if (name == "bump") {
    return InitialCondition(
        [len](const Point& x) {
          double v = 1.0;
          for (std::size_t i = 0; i < len.size(); ++i) {
            const double l = len[i];
            if (!(x[i] > 0.0 && x[i] < l)) return 0.0;
            v *= std::exp(4.0 / (l * l) - 1.0 / (x[i] * (l - x[i])));
          }
          return v;
        },
        name);
  }
  if (name == "polynomial") {
    return InitialCondition(
        [len](const Point& x) {
          double v = 1.0;
          for (std::size_t i = 0; i < len.size(); ++i) v *= x[i] * (len[i] - x[i]);
          return v;
        },
        name);
  }
  throw ParameterError("unknown initial condition '" + name +
                       "' (expected sine, product-sine, bump or polynomial)");
}

PointEstimate heat_semigroup(const Domain& domain, const InitialCondition& f, double t, const Point& x,
                             int n_modes) {
  if (!(t > 0.0)) throw ParameterError("heat_semigroup needs t > 0; at t = 0 use f(x)");
  if (n_modes < 1) throw ParameterError("n_modes must be at least 1");
  if (f.coeff_count() < n_modes) {
    throw CapacityError("heat_semigroup asked for " + std::to_string(n_modes) + " modes but only " +
                        std::to_string(f.coeff_count()) + " coefficients are cached");
  }
  const auto modes = domain.eigenpairs(n_modes);
  const auto& c = f.coeffs();
  double sum = 0.0, half = 0.0, mag = 0.0;
  for (int n = 0; n < n_modes; ++n) {
    if (n == n_modes / 2) half = sum;
    const double term = c[n] * modes[n].phi(x) * std::exp(-modes[n].lambda * t);
    sum += term;
    mag += std::abs(term);
  }
  if (n_modes == 1) half = 0.0;
  return {sum, std::abs(sum - half) + 8 * kEps * mag};
}

std::vector<GridPoint> make_grid(const std::vector<double>& times, const std::vector<Point>& points) {
  std::vector<GridPoint> g;
  g.reserve(times.size() * points.size());
  for (double t : times)
    for (const auto& x : points) g.push_back({t, x});
  return g;
}

const char* method_name(Method m) {
  switch (m) {
    case Method::spectral: return "spectral";
    case Method::quadrature: return "quadrature";
    case Method::mc: return "mc";
  }
  return "?";
}

SolutionField solve_spectral(const Domain& domain, const InitialCondition& f, const FractionalOrder& order,
                             const std::vector<GridPoint>& grid, const SpectralOptions& opts) {
  if (opts.laplacian_power < 0) throw ParameterError("laplacian_power must be nonnegative");
  if (!(opts.tol > 0.0)) throw ParameterError("spectral tolerance must be positive");
  SolutionField field;
  field.grid = grid;
  field.method = Method::spectral;
  field.values.assign(grid.size(), 0.0);
  field.err.assign(grid.size(), 0.0);
  if (grid.empty()) return field;

  std::map<double, int> time_idx;
  std::map<Point, int> point_idx;
  std::vector<int> gt(grid.size()), gx(grid.size());
  bool any_positive = false;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double t = grid[k].t;
    if (!(t >= 0.0) || !std::isfinite(t)) throw ParameterError("grid times must be finite and nonnegative");
    if (static_cast<int>(grid[k].x.size()) != domain.dim())
      throw ParameterError("grid point dimension does not match the domain");
    if (t > 0.0) any_positive = true;
    gt[k] = time_idx.emplace(t, static_cast<int>(time_idx.size())).first->second;
    gx[k] = point_idx.emplace(grid[k].x, static_cast<int>(point_idx.size())).first->second;
  }
  const bool fixed = opts.fixed_modes > 0;
  if (!any_positive && !fixed) {
    if (opts.laplacian_power > 0) throw ParameterError("Delta^l u at t = 0 is not available from the series");
    for (std::size_t k = 0; k < grid.size(); ++k) field.values[k] = f(grid[k].x);
    return field;
  }

  const int count = f.coeff_count();
  if (fixed && (opts.fixed_modes < 2 || opts.fixed_modes > count))
    throw CapacityError("fixed_modes = " + std::to_string(opts.fixed_modes) + " needs 2.." + std::to_string(count) +
                        " cached coefficients");
  int n = fixed ? opts.fixed_modes / 2 : std::min(std::max(1, opts.initial_modes), count);
  if (count < 2 || 2 * n > count) {
    throw CapacityError("spectral solve needs at least " + std::to_string(2 * std::max(n, 1)) +
                        " cached coefficients, have " + std::to_string(count));
  }
  const auto modes = domain.eigenpairs(count);
  const auto& c = f.coeffs();
  const double beta = order.beta();

  std::vector<double> times(time_idx.size());
  for (const auto& [t, i] : time_idx) times[i] = t;
  std::vector<Point> points(point_idx.size());
  for (const auto& [x, i] : point_idx) points[i] = x;

  // lazily grown per-time and per-point tables
  std::vector<std::vector<double>> e_tab(times.size()), phi_tab(points.size());
  auto grow = [&](int upto) {
    for (std::size_t i = 0; i < times.size(); ++i) {
      auto& row = e_tab[i];
      const double tb = times[i] > 0.0 ? std::pow(times[i], beta) : 0.0;
      for (int j = static_cast<int>(row.size()); j < upto; ++j) {
        double v = mittag_leffler(beta, modes[j].lambda * tb);
        for (int l = 0; l < opts.laplacian_power; ++l) v *= -modes[j].lambda;
        row.push_back(c[j] * v);
      }
    }
    for (std::size_t i = 0; i < points.size(); ++i) {
      auto& row = phi_tab[i];
      for (int j = static_cast<int>(row.size()); j < upto; ++j) row.push_back(modes[j].phi(points[i]));
    }
  };
  auto partial = [&](int upto, std::vector<double>& sum, std::vector<double>& mag) {
    grow(upto);
    sum.assign(grid.size(), 0.0);
    mag.assign(grid.size(), 0.0);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      if (grid[k].t == 0.0 && !fixed) continue;
      const auto& e = e_tab[gt[k]];
      const auto& p = phi_tab[gx[k]];
      double s = 0.0, a = 0.0;
      for (int j = 0; j < upto; ++j) {
        const double term = e[j] * p[j];
        s += term;
        a += std::abs(term);
      }
      sum[k] = s;
      mag[k] = a;
    }
  };

  std::vector<double> lo, lo_mag, hi, hi_mag;
  partial(n, lo, lo_mag);
  if (fixed) {
    partial(opts.fixed_modes, hi, hi_mag);
    field.truncation = opts.fixed_modes;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      field.values[k] = hi[k];
      field.err[k] = std::abs(hi[k] - lo[k]) + 8 * kEps * hi_mag[k];
    }
    return field;
  }
  for (;;) {
    const int n2 = 2 * n;
    if (n2 > count) {
      std::ostringstream tol;
      tol << opts.tol;
      throw CapacityError("spectral series not converged to " + tol.str() + " with " +
                          std::to_string(count) + " cached coefficients; project more modes");
    }
    partial(n2, hi, hi_mag);
    double delta = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) delta = std::max(delta, std::abs(hi[k] - lo[k]));
    n = n2;
    if (delta < opts.tol) break;
    lo.swap(hi);
    lo_mag.swap(hi_mag);
  }
  field.truncation = n;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (grid[k].t == 0.0) {
      if (opts.laplacian_power > 0) throw ParameterError("Delta^l u at t = 0 is not available from the series");
      field.values[k] = f(grid[k].x);
      continue;
    }
    field.values[k] = hi[k];
    field.err[k] = std::abs(hi[k] - lo[k]) + 8 * kEps * hi_mag[k];
  }
  return field;
}

double per_mode_higher_order_residual(double lambda, int m, const std::vector<double>& t_grid) {
  if (m < 2) throw ParameterError("higher-order identity needs m >= 2");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw ParameterError("lambda must be finite and >= 0");
  const double beta = 1.0 / m;
  double worst = 0.0;
  for (double t : t_grid) {
    if (!(t > 0.0)) throw ParameterError("residual times must be positive");
    const double x = lambda * std::pow(t, beta);
    const double e = mittag_leffler(beta, x);
    const double de = mittag_leffler_dx(beta, x) * lambda * beta * std::pow(t, beta - 1.0);
    double forcing = 0.0;
    double lp = 1.0;
    for (int j = 1; j < m; ++j) {
      lp *= -lambda;
      forcing += std::pow(t, j * beta - 1.0) / boost::math::tgamma(j * beta) * lp;
    }
    lp *= -lambda;
    worst = std::max(worst, std::abs(de - forcing - lp * e));
  }
  return worst;
}

DecayFit fit_coefficient_decay(const Domain& domain, const PointFn& f, int k, const DecayOptions& opts) {
  if (opts.count < 8) throw ParameterError("decay fit needs at least 8 modes");
  const auto c = coefficients(domain, f, opts.count, opts.tol);
  const auto modes = domain.eigenpairs(opts.count);
  std::vector<double> xs, ys;
  for (int n = 0; n < opts.count; ++n) {
    if (std::abs(c[n]) > opts.floor) {
      xs.push_back(std::log(modes[n].lambda));
      ys.push_back(std::log(std::abs(c[n])));
    }
  }
  if (xs.size() < 8) {
    throw InsufficientDataError("only " + std::to_string(xs.size()) +
                                " coefficients above the noise floor; need 8 for a decay fit");
  }
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / ys.size();
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  DecayFit fit;
  fit.slope = sxy / sxx;
  fit.modes_used = static_cast<int>(xs.size());
  fit.pass = fit.slope <= -k + 0.5;
  return fit;
}

bool coefficient_decay_check(const Domain& domain, const PointFn& f, int k, const DecayOptions& opts) {
  return fit_coefficient_decay(domain, f, k, opts).pass;
}

}  // namespace fracsub
