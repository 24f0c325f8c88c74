#include "fracsub/cli_io.hpp"

#include <boost/math/constants/constants.hpp>
#include <charconv>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "fracsub/errors.hpp"
#include "fracsub/subordination.hpp"

namespace fracsub {

using json = nlohmann::ordered_json;

namespace {

constexpr double kPi = boost::math::constants::pi<double>();

const char* killing_name(KillingMode k) {
  return k == KillingMode::clock_then_path ? "clock_then_path" : "subordinated_path";
}

// Collects diagnostics while walking the document; every reader returns a
// usable fallback so the walk can continue past errors.
class Reader {
 public:
  std::vector<std::string> diag;

  void check_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
    for (const auto& [key, _] : obj.items()) {
      bool ok = false;
      for (const char* a : allowed) ok = ok || key == a;
      if (!ok) {
        std::string list;
        for (const char* a : allowed) list += (list.empty() ? "" : ", ") + std::string(a);
        diag.push_back("unknown key '" + path(where, key) + "' (allowed: " + list + ")");
      }
    }
  }

  bool object(const json& v, const std::string& where) {
    if (v.is_object()) return true;
    diag.push_back("'" + where + "' must be an object");
    return false;
  }

  double number(const json& v, const std::string& where, double fallback) {
    if (!v.is_number()) {
      diag.push_back("'" + where + "' must be a number");
      return fallback;
    }
    const double d = v.get<double>();
    if (!std::isfinite(d)) {
      diag.push_back("'" + where + "' must be finite");
      return fallback;
    }
    return d;
  }

  long long integer(const json& v, const std::string& where, long long fallback) {
    if (!v.is_number_integer()) {
      diag.push_back("'" + where + "' must be an integer");
      return fallback;
    }
    return v.get<long long>();
  }

  std::string string(const json& v, const std::string& where, const std::string& fallback) {
    if (!v.is_string()) {
      diag.push_back("'" + where + "' must be a string");
      return fallback;
    }
    return v.get<std::string>();
  }

  void positive(double v, const std::string& where) {
    if (!(v > 0.0)) diag.push_back("'" + where + "' = " + format_double(v) + " out of range: accepted > 0");
  }

  static std::string path(const std::string& where, const std::string& key) {
    return where.empty() ? key : where + "." + key;
  }
};

Method method_from(const std::string& s, bool& ok) {
  ok = true;
  if (s == "spectral") return Method::spectral;
  if (s == "quadrature") return Method::quadrature;
  if (s == "mc") return Method::mc;
  ok = false;
  return Method::spectral;
}

json config_json(const RunConfig& cfg) {
  json j;
  j["domain"] = {{"type", cfg.domain.type}, {"sides", cfg.domain.sides}};
  j["initial"] = cfg.initial;
  j["modes"] = cfg.modes;
  json o;
  switch (cfg.order.kind) {
    case OrderSpec::Kind::beta: o["beta"] = cfg.order.value; break;
    case OrderSpec::Kind::m: o["m"] = cfg.order.integer; break;
    case OrderSpec::Kind::alpha: o["alpha"] = cfg.order.value; break;
    case OrderSpec::Kind::k:
      o["k"] = cfg.order.integer;
      o["two_sided"] = cfg.order.two_sided;
      break;
  }
  j["order"] = o;
  j["grid"] = {{"times", cfg.times}, {"points", cfg.points}};
  json methods = json::array();
  for (auto m : cfg.methods) methods.push_back(method_name(m));
  j["methods"] = methods;
  json mc = {{"n", cfg.mc.n}, {"h", cfg.mc.h}, {"threads", cfg.mc.threads}, {"killing", killing_name(cfg.mc.killing)}};
  if (cfg.mc.seed) mc["seed"] = *cfg.mc.seed;
  j["mc"] = mc;
  j["tolerances"] = {{"spectral", cfg.tol.spectral},
                     {"quadrature", cfg.tol.quadrature},
                     {"modes", cfg.tol.modes},
                     {"sigma", cfg.tol.sigma},
                     {"absolute", cfg.tol.absolute}};
  j["output"] = {{"csv", cfg.csv_path}, {"report", cfg.report_path}};
  return j;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, r.ptr);
}

Domain DomainSpec::build() const {
  if (type == "interval") return Domain::interval(sides.at(0));
  return Domain::box(sides);
}

FractionalOrder OrderSpec::fractional() const {
  switch (kind) {
    case Kind::beta: return FractionalOrder::from_beta(value);
    case Kind::m: return FractionalOrder::from_m(integer);
    case Kind::k: return FractionalOrder::from_beta(std::ldexp(1.0, -integer));
    case Kind::alpha: break;
  }
  throw ParameterError("the alpha-clock problem has no time-fractional order");
}

ClockKind OrderSpec::clock() const {
  switch (kind) {
    case Kind::beta: return ClockKind::inverse_stable(value);
    case Kind::m: return ClockKind::inverse_stable(1.0 / integer);
    case Kind::k: return two_sided ? ClockKind::two_sided_iterated(integer) : ClockKind::iterated_bm(integer);
    case Kind::alpha: return ClockKind::alpha_stable(value);
  }
  throw ParameterError("unknown order kind");
}

std::string OrderSpec::describe() const {
  switch (kind) {
    case Kind::beta: return "beta=" + format_double(value);
    case Kind::m: return "m=" + std::to_string(integer);
    case Kind::alpha: return "alpha=" + format_double(value);
    case Kind::k: return "k=" + std::to_string(integer) + (two_sided ? " (two-sided)" : "");
  }
  return "";
}

RunConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError({std::string("invalid JSON: ") + e.what()});
  }
  Reader rd;
  if (!rd.object(doc, "(top level)")) throw ConfigError(rd.diag);
  rd.check_keys(doc, "", {"domain", "initial", "modes", "order", "grid", "methods", "mc", "tolerances", "output"});

  RunConfig cfg;
  cfg.domain.sides = {kPi};

  // domain
  if (doc.contains("domain") && rd.object(doc["domain"], "domain")) {
    const auto& d = doc["domain"];
    rd.check_keys(d, "domain", {"type", "length", "sides"});
    if (d.contains("type")) cfg.domain.type = rd.string(d["type"], "domain.type", "interval");
    if (cfg.domain.type == "interval") {
      if (d.contains("sides")) rd.diag.push_back("'domain.sides' applies to type 'box'; use 'domain.length'");
      if (d.contains("length")) {
        cfg.domain.sides = {rd.number(d["length"], "domain.length", kPi)};
        rd.positive(cfg.domain.sides[0], "domain.length");
      }
    } else if (cfg.domain.type == "box") {
      if (d.contains("length")) rd.diag.push_back("'domain.length' applies to type 'interval'; use 'domain.sides'");
      if (!d.contains("sides") || !d["sides"].is_array() || d["sides"].empty()) {
        rd.diag.push_back("'domain.sides' must be a non-empty array of side lengths for type 'box'");
      } else {
        cfg.domain.sides.clear();
        for (std::size_t i = 0; i < d["sides"].size(); ++i) {
          const auto where = "domain.sides[" + std::to_string(i) + "]";
          cfg.domain.sides.push_back(rd.number(d["sides"][i], where, 1.0));
          rd.positive(cfg.domain.sides.back(), where);
        }
      }
    } else {
      rd.diag.push_back("'domain.type' = '" + cfg.domain.type + "' is not one of: interval, box");
      cfg.domain.type = "interval";
    }
  }
  const int dim = static_cast<int>(cfg.domain.sides.size());

  if (doc.contains("initial")) {
    cfg.initial = rd.string(doc["initial"], "initial", "sine");
    static const std::set<std::string> names{"sine", "product-sine", "bump", "polynomial"};
    if (!names.count(cfg.initial)) {
      rd.diag.push_back("'initial' = '" + cfg.initial + "' is not one of: sine, product-sine, bump, polynomial");
    }
  }
  if (cfg.initial == "sine" && dim > 1)
    rd.diag.push_back("'initial' = 'sine' needs an interval domain; use 'product-sine' on boxes");

  if (doc.contains("modes")) {
    const auto m = rd.integer(doc["modes"], "modes", 256);
    if (m < 8 || m > 65536) {
      rd.diag.push_back("'modes' = " + std::to_string(m) + " out of range: accepted 8..65536");
    } else {
      cfg.modes = static_cast<int>(m);
    }
  }

  // order: exactly one selector
  if (doc.contains("order") && rd.object(doc["order"], "order")) {
    const auto& o = doc["order"];
    rd.check_keys(o, "order", {"beta", "m", "alpha", "k", "two_sided"});
    int selectors = 0;
    for (const char* key : {"beta", "m", "alpha", "k"}) selectors += o.contains(key) ? 1 : 0;
    if (selectors != 1) {
      rd.diag.push_back("'order' needs exactly one of beta, m, alpha, k");
    } else if (o.contains("beta")) {
      cfg.order.kind = OrderSpec::Kind::beta;
      cfg.order.value = rd.number(o["beta"], "order.beta", 0.5);
      if (!(cfg.order.value > 0.0 && cfg.order.value <= 1.0))
        rd.diag.push_back("'order.beta' = " + format_double(cfg.order.value) +
                          " out of range: accepted 0<β<1 (β = 1 selects the heat equation)");
    } else if (o.contains("m")) {
      cfg.order.kind = OrderSpec::Kind::m;
      cfg.order.integer = static_cast<int>(rd.integer(o["m"], "order.m", 2));
      if (cfg.order.integer < 2 || cfg.order.integer > 64)
        rd.diag.push_back("'order.m' = " + std::to_string(cfg.order.integer) + " out of range: accepted 2..64");
    } else if (o.contains("alpha")) {
      cfg.order.kind = OrderSpec::Kind::alpha;
      cfg.order.value = rd.number(o["alpha"], "order.alpha", 1.0);
      if (!(cfg.order.value > 0.0 && cfg.order.value <= 2.0))
        rd.diag.push_back("'order.alpha' = " + format_double(cfg.order.value) + " out of range: accepted 0<α<=2");
    } else {
      cfg.order.kind = OrderSpec::Kind::k;
      cfg.order.integer = static_cast<int>(rd.integer(o["k"], "order.k", 1));
      if (cfg.order.integer < 1 || cfg.order.integer > 10)
        rd.diag.push_back("'order.k' = " + std::to_string(cfg.order.integer) + " out of range: accepted 1..10");
    }
    if (o.contains("two_sided")) {
      if (!o["two_sided"].is_boolean()) {
        rd.diag.push_back("'order.two_sided' must be true or false");
      } else if (cfg.order.kind != OrderSpec::Kind::k) {
        rd.diag.push_back("'order.two_sided' only applies with 'order.k'");
      } else {
        cfg.order.two_sided = o["two_sided"].get<bool>();
      }
    }
  }

  // methods
  cfg.methods = {Method::spectral};
  if (doc.contains("methods")) {
    const auto& m = doc["methods"];
    if (!m.is_array() || m.empty()) {
      rd.diag.push_back("'methods' must be a non-empty array drawn from: spectral, quadrature, mc");
    } else {
      cfg.methods.clear();
      for (std::size_t i = 0; i < m.size(); ++i) {
        const auto s = rd.string(m[i], "methods[" + std::to_string(i) + "]", "");
        bool ok = false;
        const auto meth = method_from(s, ok);
        if (!ok) {
          rd.diag.push_back("'methods[" + std::to_string(i) + "]' = '" + s + "' is not one of: spectral, quadrature, mc");
        } else if (std::find(cfg.methods.begin(), cfg.methods.end(), meth) != cfg.methods.end()) {
          rd.diag.push_back("'methods' lists '" + s + "' twice");
        } else {
          cfg.methods.push_back(meth);
        }
      }
    }
  }
  auto has = [&](Method m) { return std::find(cfg.methods.begin(), cfg.methods.end(), m) != cfg.methods.end(); };
  if (cfg.order.kind == OrderSpec::Kind::alpha && has(Method::spectral))
    rd.diag.push_back("'methods' includes 'spectral', which is not available for 'order.alpha'; use quadrature or mc");

  // grid
  if (!doc.contains("grid")) {
    rd.diag.push_back("'grid' is required (times and points)");
  } else if (rd.object(doc["grid"], "grid")) {
    const auto& g = doc["grid"];
    rd.check_keys(g, "grid", {"times", "points"});
    if (!g.contains("times") || !g["times"].is_array() || g["times"].empty()) {
      rd.diag.push_back("'grid.times' must be a non-empty array");
    } else {
      const bool spectral_only = cfg.methods.size() == 1 && cfg.methods[0] == Method::spectral;
      for (std::size_t i = 0; i < g["times"].size(); ++i) {
        const auto where = "grid.times[" + std::to_string(i) + "]";
        const double t = rd.number(g["times"][i], where, 1.0);
        if (spectral_only ? !(t >= 0.0) : !(t > 0.0))
          rd.diag.push_back("'" + where + "' = " + format_double(t) + " out of range: accepted " +
                            (spectral_only ? ">= 0" : "> 0 (t = 0 is only accepted with methods = [spectral])"));
        cfg.times.push_back(t);
      }
    }
    if (!g.contains("points") || !g["points"].is_array() || g["points"].empty()) {
      rd.diag.push_back("'grid.points' must be a non-empty array");
    } else {
      for (std::size_t i = 0; i < g["points"].size(); ++i) {
        const auto where = "grid.points[" + std::to_string(i) + "]";
        const auto& p = g["points"][i];
        Point x;
        if (p.is_number()) {
          x = {rd.number(p, where, 0.0)};
        } else if (p.is_array()) {
          for (std::size_t c = 0; c < p.size(); ++c) x.push_back(rd.number(p[c], where + "[" + std::to_string(c) + "]", 0.0));
        } else {
          rd.diag.push_back("'" + where + "' must be a number or an array of coordinates");
          continue;
        }
        if (static_cast<int>(x.size()) != dim) {
          rd.diag.push_back("'" + where + "' has " + std::to_string(x.size()) + " coordinates, domain has " +
                            std::to_string(dim));
          continue;
        }
        for (int c = 0; c < dim; ++c)
          if (!(x[c] >= 0.0 && x[c] <= cfg.domain.sides[c]))
            rd.diag.push_back("'" + where + "' coordinate " + std::to_string(c + 1) + " = " + format_double(x[c]) +
                              " lies outside [0, " + format_double(cfg.domain.sides[c]) + "]");
        cfg.points.push_back(x);
      }
    }
  }

  // mc
  if (doc.contains("mc") && rd.object(doc["mc"], "mc")) {
    const auto& m = doc["mc"];
    rd.check_keys(m, "mc", {"n", "h", "seed", "threads", "killing"});
    if (m.contains("n")) {
      const auto n = rd.integer(m["n"], "mc.n", 0);
      if (n < 0) {
        rd.diag.push_back("'mc.n' must be nonnegative");
      } else {
        cfg.mc.n = static_cast<std::size_t>(n);
      }
    }
    if (m.contains("h")) {
      cfg.mc.h = rd.number(m["h"], "mc.h", 0.0);
      rd.positive(cfg.mc.h, "mc.h");
    }
    if (m.contains("seed")) {
      if (!m["seed"].is_number_unsigned()) {
        rd.diag.push_back("'mc.seed' must be a nonnegative integer");
      } else {
        cfg.mc.seed = m["seed"].get<std::uint64_t>();
      }
    }
    if (m.contains("threads")) {
      const auto t = rd.integer(m["threads"], "mc.threads", 0);
      if (t < 0 || t > 1024) {
        rd.diag.push_back("'mc.threads' = " + std::to_string(t) + " out of range: accepted 0..1024 (0 = default)");
      } else {
        cfg.mc.threads = static_cast<int>(t);
      }
    }
    if (m.contains("killing")) {
      const auto k = rd.string(m["killing"], "mc.killing", "clock_then_path");
      if (k == "clock_then_path") {
        cfg.mc.killing = KillingMode::clock_then_path;
      } else if (k == "subordinated_path") {
        cfg.mc.killing = KillingMode::subordinated_path;
      } else {
        rd.diag.push_back("'mc.killing' = '" + k + "' is not one of: clock_then_path, subordinated_path");
      }
    }
  }
  if (has(Method::mc)) {
    if (cfg.mc.n < 100) rd.diag.push_back("'mc.n' = " + std::to_string(cfg.mc.n) + " out of range: mc needs n >= 100");
    if (!cfg.mc.seed) rd.diag.push_back("'mc.seed' is required when methods includes 'mc'");
    if (cfg.mc.killing == KillingMode::subordinated_path && cfg.order.kind != OrderSpec::Kind::beta &&
        cfg.order.kind != OrderSpec::Kind::m)
      rd.diag.push_back("'mc.killing' = 'subordinated_path' needs 'order.beta' or 'order.m'");
  }

  if (doc.contains("tolerances") && rd.object(doc["tolerances"], "tolerances")) {
    const auto& t = doc["tolerances"];
    rd.check_keys(t, "tolerances", {"spectral", "quadrature", "modes", "sigma", "absolute"});
    auto read = [&](const char* key, double& slot) {
      if (!t.contains(key)) return;
      const auto where = std::string("tolerances.") + key;
      slot = rd.number(t[key], where, slot);
      rd.positive(slot, where);
    };
    read("spectral", cfg.tol.spectral);
    read("quadrature", cfg.tol.quadrature);
    read("modes", cfg.tol.modes);
    read("sigma", cfg.tol.sigma);
    read("absolute", cfg.tol.absolute);
  }

  if (doc.contains("output") && rd.object(doc["output"], "output")) {
    const auto& o = doc["output"];
    rd.check_keys(o, "output", {"csv", "report"});
    if (o.contains("csv")) cfg.csv_path = rd.string(o["csv"], "output.csv", cfg.csv_path);
    if (o.contains("report")) cfg.report_path = rd.string(o["report"], "output.report", cfg.report_path);
  }

  if (!rd.diag.empty()) throw ConfigError(rd.diag);
  return cfg;
}

Comparison compare_fields(const SolutionField& a, const SolutionField& b, const Tolerances& tol) {
  if (a.values.size() != b.values.size()) throw ParameterError("fields are on different grids");
  Comparison c;
  c.a = a.method;
  c.b = b.method;
  const bool stochastic = a.method == Method::mc || b.method == Method::mc;
  for (std::size_t k = 0; k < a.values.size(); ++k) {
    PointComparison p;
    p.index = k;
    p.delta = std::abs(a.values[k] - b.values[k]);
    p.tolerance = (stochastic ? tol.sigma * std::hypot(a.err[k], b.err[k]) : a.err[k] + b.err[k]) + tol.absolute;
    p.pass = p.delta <= p.tolerance;
    c.max_delta = std::max(c.max_delta, p.delta);
    c.pass = c.pass && p.pass;
    c.points.push_back(p);
  }
  return c;
}

RunResult execute(const RunConfig& cfg) {
  const Domain domain = cfg.domain.build();
  const auto grid = cfg.grid();
  if (grid.empty()) throw ConfigError({"'grid' is empty"});
  InitialCondition f = builtin_initial(cfg.initial, domain).project(domain, cfg.modes);

  RunResult res;
  for (auto method : cfg.methods) {
    try {
      switch (method) {
        case Method::spectral: {
          SpectralOptions o;
          o.tol = cfg.tol.spectral;
          res.fields.push_back(solve_spectral(domain, f, cfg.order.fractional(), grid, o));
          break;
        }
        case Method::quadrature: {
          QuadratureOptions o;
          o.tol = cfg.tol.quadrature;
          o.mode_tol = cfg.tol.modes;
          if (cfg.order.kind == OrderSpec::Kind::alpha) {
            res.fields.push_back(
                solve_alpha_clock_quadrature(domain, f, StableClockParam::from_alpha(cfg.order.value), grid, o));
          } else {
            res.fields.push_back(solve_inverse_stable_quadrature(domain, f, cfg.order.fractional(), grid, o));
          }
          break;
        }
        case Method::mc: {
          McConfig mc;
          mc.mode = cfg.mc.killing;
          mc.threads = cfg.mc.threads;
          const double h = cfg.mc.h > 0.0 ? cfg.mc.h : default_time_step(domain);
          res.fields.push_back(solve_mc(domain, f, cfg.order.clock(), grid, cfg.mc.n, h, cfg.mc.seed.value(), mc));
          break;
        }
      }
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw RunError(std::string(method_name(method)) + " (" + cfg.order.describe() + "): " + e.what());
    }
  }
  for (std::size_t i = 0; i < res.fields.size(); ++i)
    for (std::size_t j = i + 1; j < res.fields.size(); ++j)
      res.comparisons.push_back(compare_fields(res.fields[i], res.fields[j], cfg.tol));
  res.exit_status = 0;
  for (const auto& c : res.comparisons)
    if (!c.pass) res.exit_status = 1;
  return res;
}

void write_csv(std::ostream& os, const std::vector<SolutionField>& fields) {
  std::size_t dim = 0;
  for (const auto& f : fields)
    for (const auto& g : f.grid) dim = std::max(dim, g.x.size());
  os << "method,t";
  for (std::size_t i = 1; i <= dim; ++i) os << ",x" << i;
  os << ",u,err\n";
  for (const auto& f : fields) {
    for (std::size_t k = 0; k < f.grid.size(); ++k) {
      os << method_name(f.method) << ',' << format_double(f.grid[k].t);
      for (double x : f.grid[k].x) os << ',' << format_double(x);
      os << ',' << format_double(f.values[k]) << ',' << format_double(f.err[k]) << '\n';
    }
  }
}

void write_report(std::ostream& os, const RunConfig& cfg, const RunResult& result) {
  json r;
  r["schema"] = 1;
  r["config"] = config_json(cfg);
  json fields = json::array();
  for (const auto& f : result.fields) {
    double max_err = 0.0;
    for (double e : f.err) max_err = std::max(max_err, e);
    json jf = {{"method", method_name(f.method)}, {"points", f.values.size()}, {"max_err", max_err}};
    if (f.method != Method::mc) jf["modes"] = f.truncation;
    fields.push_back(jf);
  }
  r["fields"] = fields;
  json comps = json::array();
  for (const auto& c : result.comparisons) {
    json pts = json::array();
    for (const auto& p : c.points) {
      const auto& g = result.fields.front().grid[p.index];
      pts.push_back({{"index", p.index}, {"t", g.t}, {"x", g.x}, {"delta", p.delta}, {"tolerance", p.tolerance},
                     {"pass", p.pass}});
    }
    comps.push_back({{"a", method_name(c.a)},
                     {"b", method_name(c.b)},
                     {"rule", (c.a == Method::mc || c.b == Method::mc) ? "sigma*hypot(err_a,err_b)+absolute"
                                                                       : "err_a+err_b+absolute"},
                     {"max_delta", c.max_delta},
                     {"pass", c.pass},
                     {"points", pts}});
  }
  r["comparisons"] = comps;
  r["pass"] = result.exit_status == 0;
  r["exit_status"] = result.exit_status;
  os << r.dump(2) << '\n';
}

std::vector<KsCase> ks_suite(std::size_t n, std::uint64_t seed) {
  auto draw = [&](std::uint64_t stream, auto sampler) {
    RngStream rng(seed, stream);
    std::vector<double> v(n);
    for (auto& x : v) x = sampler(rng);
    return v;
  };
  const auto i1 = draw(0, [](RngStream& g) { return sample_iterated_bm_clock(1, 1.0, g).value; });
  const auto i2 = draw(1, [](RngStream& g) { return sample_iterated_bm_clock(2, 1.0, g).value; });
  const auto e4 = draw(2, [](RngStream& g) { return sample_inverse_stable(0.25, 1.0, g).value; });
  const auto e2 = draw(3, [](RngStream& g) { return sample_inverse_stable(0.5, 1.0, g).value; });
  const auto y1 = draw(4, [](RngStream& g) { return sample_alpha_clock(1.0, 1.0, g).value; });
  const auto j2 = draw(5, [](RngStream& g) { return std::abs(sample_two_sided_clock(2, 1.0, g).value); });
  const auto half_normal = [](double x) { return std::erf(x / 2); };

  std::vector<KsCase> out;
  out.push_back({"|I_2(1)| vs E^{1/4}(1), two-sample", ks_distribution_test(i2, e4)});
  out.push_back({"|I_1(1)| vs erf(x/2)", ks_distribution_test(i1, half_normal)});
  out.push_back({"|I_2(1)| vs density of E^{1/4}(1)",
                 ks_distribution_test(i2, DensityReference{[](double x) { return inverse_stable_density(0.25, 1.0, x); }})});
  out.push_back({"E^{1/2}(1) vs erf(x/2)", ks_distribution_test(e2, half_normal)});
  out.push_back({"|Y(1)|, alpha = 1, vs (2/pi) atan(x)",
                 ks_distribution_test(y1, [](double x) { return 2 / kPi * std::atan(x); })});
  out.push_back({"|J_2(1)| vs |I_2(1)|, two-sample", ks_distribution_test(j2, i2)});
  return out;
}

int run(const RunConfig& cfg) {
  const auto result = execute(cfg);
  {
    std::ofstream csv(cfg.csv_path, std::ios::binary);
    if (!csv) throw InputError("cannot open '" + cfg.csv_path + "' for writing");
    write_csv(csv, result.fields);
  }
  {
    std::ofstream rep(cfg.report_path, std::ios::binary);
    if (!rep) throw InputError("cannot open '" + cfg.report_path + "' for writing");
    write_report(rep, cfg, result);
  }
  return result.exit_status;
}

}  // namespace fracsub
