// fracsub command line: solve, verify, dist-test, eigen.

#include <CLI11.hpp>
#include <json.hpp>

#include <boost/math/constants/constants.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "fracsub/cli_io.hpp"
#include "fracsub/errors.hpp"
#include "fracsub/subordination.hpp"
#include "fracsub/verification.hpp"

using namespace fracsub;
using json = nlohmann::ordered_json;

namespace {

constexpr double kPi = boost::math::constants::pi<double>();

// "1.0,2.0" -> [1.0, 2.0]
json parse_point(const std::string& s) {
  json p = json::array();
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) p.push_back(std::stod(item));
  return p.size() == 1 ? p[0] : p;
}

struct SolveFlags {
  std::string config;
  std::optional<double> beta, alpha, length, h;
  std::optional<int> m, k, modes, threads;
  std::optional<std::size_t> n;
  std::optional<std::uint64_t> seed;
  bool two_sided = false;
  std::optional<std::string> initial, csv, report, killing;
  std::vector<std::string> methods, points;
  std::vector<double> times, sides;
};

int do_solve(const SolveFlags& fl) {
  json doc = json::object();
  if (!fl.config.empty()) {
    std::ifstream in(fl.config);
    if (!in) {
      std::cerr << "cannot read config '" << fl.config << "'\n";
      return 2;
    }
    std::stringstream buf;
    buf << in.rdbuf();
    try {
      doc = json::parse(buf.str());
    } catch (const json::parse_error& e) {
      std::cerr << "config: invalid JSON: " << e.what() << '\n';
      return 2;
    }
  }
  // flags override file values
  if (fl.beta || fl.m || fl.alpha || fl.k) {
    json o = json::object();
    if (fl.beta) o["beta"] = *fl.beta;
    if (fl.m) o["m"] = *fl.m;
    if (fl.alpha) o["alpha"] = *fl.alpha;
    if (fl.k) o["k"] = *fl.k;
    if (fl.two_sided) o["two_sided"] = true;
    doc["order"] = o;
  } else if (fl.two_sided) {
    doc["order"]["two_sided"] = true;
  }
  if (fl.length) doc["domain"] = {{"type", "interval"}, {"length", *fl.length}};
  if (!fl.sides.empty()) doc["domain"] = {{"type", "box"}, {"sides", fl.sides}};
  if (fl.initial) doc["initial"] = *fl.initial;
  if (fl.modes) doc["modes"] = *fl.modes;
  if (!fl.methods.empty()) doc["methods"] = fl.methods;
  if (!fl.times.empty()) doc["grid"]["times"] = fl.times;
  if (!fl.points.empty()) {
    json pts = json::array();
    for (const auto& p : fl.points) pts.push_back(parse_point(p));
    doc["grid"]["points"] = pts;
  }
  if (fl.n) doc["mc"]["n"] = *fl.n;
  if (fl.h) doc["mc"]["h"] = *fl.h;
  if (fl.seed) doc["mc"]["seed"] = *fl.seed;
  if (fl.threads) doc["mc"]["threads"] = *fl.threads;
  if (fl.killing) doc["mc"]["killing"] = *fl.killing;
  if (fl.csv) doc["output"]["csv"] = *fl.csv;
  if (fl.report) doc["output"]["report"] = *fl.report;

  RunConfig cfg;
  try {
    cfg = parse_config(doc.dump());
  } catch (const ConfigError& e) {
    for (const auto& d : e.diagnostics()) std::cerr << "config: " << d << '\n';
    return 2;
  }
  const int status = run(cfg);
  std::cout << "wrote " << cfg.csv_path << " and " << cfg.report_path << '\n';
  std::ifstream rep(cfg.report_path);
  const auto r = json::parse(rep);
  for (const auto& c : r["comparisons"])
    std::cout << c["a"].get<std::string>() << " vs " << c["b"].get<std::string>()
              << ": max delta " << format_double(c["max_delta"].get<double>()) << (c["pass"].get<bool>() ? "  PASS" : "  FAIL")
              << '\n';
  return status;
}

struct VerifyFlags {
  std::string what = "fractional";
  double beta = 0.5;
  int m = 2;
  std::string initial = "sine";
  double length = kPi;
  std::vector<double> times{0.1, 0.5, 1.0, 1.5, 2.0};
  std::vector<double> xs{kPi / 2};
  std::vector<double> lambdas{1.0, 4.0};
  double tau = 1e-4;
  double tol = 2e-3;
  int modes = 64;
};

int do_verify(const VerifyFlags& fl) {
  const Domain d = Domain::interval(fl.length);
  json out;
  bool pass = true;
  if (fl.what == "fractional") {
    const auto f = builtin_initial(fl.initial, d).project(d, fl.modes);
    std::vector<Point> pts;
    for (double x : fl.xs) pts.push_back({x});
    ResidualOptions o;
    o.tau = fl.tau;
    o.tolerance = fl.tol;
    const auto rep = fractional_residual(d, f, FractionalOrder::from_beta(fl.beta), make_grid(fl.times, pts), o);
    out = {{"pde", rep.pde_tag},     {"max_residual", rep.max_residual}, {"tolerance", rep.tolerance},
           {"tau", rep.tau},         {"truncation", rep.truncation},     {"inconclusive", rep.inconclusive},
           {"pass", rep.pass()}};
    pass = rep.pass();
  } else if (fl.what == "higher-order") {
    json rows = json::array();
    for (double lam : fl.lambdas) {
      const double r = per_mode_higher_order_residual(lam, fl.m, fl.times);
      rows.push_back({{"lambda", lam}, {"m", fl.m}, {"residual", r}, {"pass", r <= fl.tol}});
      pass = pass && r <= fl.tol;
    }
    out = {{"pde", "per-mode higher-order"}, {"tolerance", fl.tol}, {"modes", rows}, {"pass", pass}};
  } else if (fl.what == "cauchy") {
    const auto f = builtin_initial(fl.initial, d).project(d, fl.modes);
    std::vector<Point> pts;
    for (double x : fl.xs) pts.push_back({x});
    const double r = cauchy_clock_residual(d, f, make_grid(fl.times, pts));
    pass = r <= fl.tol;
    out = {{"pde", "alpha = 1 clock: u_tt + 2 Lf/(pi t) + L^2 u"}, {"max_residual", r}, {"tolerance", fl.tol}, {"pass", pass}};
  } else {
    std::cerr << "verify: unknown check '" << fl.what << "' (fractional, higher-order, cauchy)\n";
    return 2;
  }
  std::cout << out.dump(2) << '\n';
  return pass ? 0 : 1;
}

int do_dist_test(std::size_t n, std::uint64_t seed, double level) {
  bool pass = true;
  for (const auto& c : ks_suite(n, seed)) {
    const bool ok = c.result.p_value > level;
    pass = pass && ok;
    std::cout << (ok ? "PASS  " : "FAIL  ") << c.name << "  D=" << format_double(c.result.statistic)
              << "  p=" << format_double(c.result.p_value) << '\n';
  }
  return pass ? 0 : 1;
}

int do_eigen(double length, const std::vector<double>& sides, int count) {
  const Domain d = sides.empty() ? Domain::interval(length) : Domain::box(sides);
  std::cout << "n,lambda";
  for (int i = 1; i <= d.dim(); ++i) std::cout << ",i" << i;
  std::cout << '\n';
  for (const auto& e : d.eigenpairs(count)) {
    std::cout << e.n << ',' << format_double(e.lambda);
    for (int i : e.multi_index) std::cout << ',' << i;
    std::cout << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fractional Cauchy problems on bounded domains by spectral series, clock quadrature and Monte Carlo"};
  app.require_subcommand(1);

  SolveFlags sf;
  auto* solve = app.add_subcommand("solve", "solve on a (t, x) grid and compare methods");
  solve->add_option("-c,--config", sf.config, "JSON config file");
  solve->add_option("--beta", sf.beta, "time-fractional order 0<beta<=1");
  solve->add_option("--m", sf.m, "higher-order index (beta = 1/m)");
  solve->add_option("--alpha", sf.alpha, "symmetric stable clock index 0<alpha<=2");
  solve->add_option("--k", sf.k, "iterated Brownian clock depth");
  solve->add_flag("--two-sided", sf.two_sided, "two-sided iterated clock (with --k)");
  solve->add_option("--length", sf.length, "interval length");
  solve->add_option("--sides", sf.sides, "box side lengths");
  solve->add_option("--initial", sf.initial, "sine | product-sine | bump | polynomial");
  solve->add_option("--modes", sf.modes, "cached coefficients");
  solve->add_option("--methods", sf.methods, "spectral quadrature mc");
  solve->add_option("--times", sf.times, "grid times");
  solve->add_option("--point", sf.points, "grid point, comma separated (repeatable)");
  solve->add_option("--n", sf.n, "Monte Carlo replicates");
  solve->add_option("--step", sf.h, "path step (mc.h)");
  solve->add_option("--seed", sf.seed, "Monte Carlo seed");
  solve->add_option("--threads", sf.threads, "worker threads (0: FRACSUB_THREADS or all cores)");
  solve->add_option("--killing", sf.killing, "clock_then_path | subordinated_path");
  solve->add_option("--csv", sf.csv, "solution CSV path");
  solve->add_option("--report", sf.report, "comparison report path");

  VerifyFlags vf;
  auto* verify = app.add_subcommand("verify", "PDE residual checks");
  verify->add_option("check", vf.what, "fractional | higher-order | cauchy")->capture_default_str();
  verify->add_option("--beta", vf.beta)->capture_default_str();
  verify->add_option("--m", vf.m)->capture_default_str();
  verify->add_option("--initial", vf.initial)->capture_default_str();
  verify->add_option("--length", vf.length)->capture_default_str();
  verify->add_option("--times", vf.times);
  verify->add_option("--x", vf.xs);
  verify->add_option("--lambda", vf.lambdas);
  verify->add_option("--tau", vf.tau)->capture_default_str();
  verify->add_option("--tol", vf.tol)->capture_default_str();
  verify->add_option("--modes", vf.modes)->capture_default_str();

  std::size_t ks_n = 50000;
  std::uint64_t ks_seed = 1;
  double ks_level = 0.01;
  auto* dist = app.add_subcommand("dist-test", "Kolmogorov-Smirnov suite for the clock samplers");
  dist->add_option("--n", ks_n, "samples per law")->capture_default_str();
  dist->add_option("--seed", ks_seed)->capture_default_str();
  dist->add_option("--level", ks_level)->capture_default_str();

  double eig_length = kPi;
  std::vector<double> eig_sides;
  int eig_count = 10;
  auto* eigen = app.add_subcommand("eigen", "dump Dirichlet eigenpairs as CSV");
  eigen->add_option("--length", eig_length)->capture_default_str();
  eigen->add_option("--sides", eig_sides, "box side lengths");
  eigen->add_option("--count", eig_count)->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve) return do_solve(sf);
    if (*verify) return do_verify(vf);
    if (*dist) return do_dist_test(ks_n, ks_seed, ks_level);
    if (*eigen) return do_eigen(eig_length, eig_sides, eig_count);
  } catch (const ConfigError& e) {
    for (const auto& d : e.diagnostics()) std::cerr << "config: " << d << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
