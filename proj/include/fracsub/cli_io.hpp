#pragma once

// Run configuration, orchestration of the three solution routes, and the
// CSV / JSON artifacts they produce.

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "fracsub/spectral.hpp"
#include "fracsub/stochastic.hpp"
#include "fracsub/verification.hpp"

namespace fracsub {

struct DomainSpec {
  std::string type = "interval";  // "interval" or "box"
  std::vector<double> sides;      // one entry for an interval
  Domain build() const;
};

struct OrderSpec {
  enum class Kind { beta, m, alpha, k };
  Kind kind = Kind::beta;
  double value = 0.5;       // beta or alpha
  int integer = 0;          // m or k
  bool two_sided = false;   // k only: J_k instead of I_k for Monte Carlo

  /// Time-fractional order of the matching Cauchy problem (not for alpha).
  FractionalOrder fractional() const;
  ClockKind clock() const;
  std::string describe() const;
};

struct McParams {
  std::size_t n = 0;
  double h = 0.0;  // 0: 1e-3 * scale^2
  std::optional<std::uint64_t> seed;
  int threads = 0;
  KillingMode killing = KillingMode::clock_then_path;
};

struct Tolerances {
  double spectral = 1e-12;
  double quadrature = 1e-11;
  double modes = 1e-10;
  double sigma = 3.0;        // stderr multiple for comparisons involving mc
  double absolute = 1e-8;    // slack added to deterministic-only comparisons
};

struct RunConfig {
  DomainSpec domain;
  std::string initial = "sine";
  int modes = 256;  // cached coefficients
  OrderSpec order;
  std::vector<double> times;
  std::vector<Point> points;
  std::vector<Method> methods;
  McParams mc;
  Tolerances tol;
  std::string csv_path = "solution.csv";
  std::string report_path = "report.json";

  std::vector<GridPoint> grid() const { return make_grid(times, points); }
};

/// JSON text -> validated config. Missing keys take documented defaults;
/// every problem found is reported at once through ConfigError.
RunConfig parse_config(const std::string& text);

struct PointComparison {
  std::size_t index = 0;
  double delta = 0.0;
  double tolerance = 0.0;
  bool pass = true;
};

struct Comparison {
  Method a = Method::spectral;
  Method b = Method::spectral;
  double max_delta = 0.0;
  bool pass = true;
  std::vector<PointComparison> points;
};

/// Pairwise comparison of two fields on the same grid. Uses only the values
/// and error columns, so it can be redone from the CSV.
Comparison compare_fields(const SolutionField& a, const SolutionField& b, const Tolerances& tol);

struct RunResult {
  std::vector<SolutionField> fields;
  std::vector<Comparison> comparisons;
  int exit_status = 0;
};

/// Compute every selected method, no I/O.
RunResult execute(const RunConfig& cfg);

void write_csv(std::ostream& os, const std::vector<SolutionField>& fields);
void write_report(std::ostream& os, const RunConfig& cfg, const RunResult& result);

/// execute + write csv_path and report_path. Returns 0 iff every comparison passed.
int run(const RunConfig& cfg);

struct KsCase {
  std::string name;
  KsResult result;
};

/// The distributional checks behind the dist-test subcommand: iterated
/// Brownian clocks against inverse stable clocks, the Gaussian and Cauchy
/// folded laws, and the two-sided fold. Case i draws from stream i of `seed`.
std::vector<KsCase> ks_suite(std::size_t n, std::uint64_t seed);

/// 17 significant digits, '.' separator.
std::string format_double(double v);

}  // namespace fracsub
