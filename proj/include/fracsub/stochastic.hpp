#pragma once

// Random clocks, killed Brownian paths and the Monte Carlo estimators built
// from them. Brownian motion has generator Delta (variance 2t per coordinate).

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "fracsub/spectral.hpp"

namespace fracsub {

/// Philox4x32-10 counter-based generator. The 64-bit seed is the key; the
/// 128-bit counter is (position, stream_id), so distinct stream ids never
/// share a block.
class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()();

  double uniform();      // open interval (0, 1)
  double normal();       // standard normal
  double exponential();  // rate 1

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_; }

  /// Independent child stream, e.g. one per Monte Carlo replicate.
  RngStream substream(std::uint64_t index) const;

  /// Raw Philox4x32-10 block function, exposed for known-answer tests.
  static std::array<std::uint32_t, 4> philox(std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key);

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t position_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  int available_ = 0;
};

struct ClockKind {
  enum class Type { inverse_stable, iterated_bm, two_sided_iterated, alpha_stable };
  Type type = Type::inverse_stable;
  double beta = 0.5;
  int k = 1;
  double alpha = 1.0;

  static ClockKind inverse_stable(double beta);
  static ClockKind iterated_bm(int k);
  static ClockKind two_sided_iterated(int k);
  static ClockKind alpha_stable(double alpha);
  std::string describe() const;
};

struct ClockSample {
  ClockKind kind;
  double t = 0.0;
  double value = 0.0;  // signed only for two-sided clocks
};

/// One draw of D(1), Laplace transform exp(-s^beta) (Kanter's representation).
double sample_stable_subordinator(double beta, RngStream& rng);
/// E^beta(t) = (t / D(1))^beta.
ClockSample sample_inverse_stable(double beta, double t, RngStream& rng);
/// |I_k(t)| by nested half-normal draws.
ClockSample sample_iterated_bm_clock(int k, double t, RngStream& rng);
/// J_k(t) by nested signed normal draws.
ClockSample sample_two_sided_clock(int k, double t, RngStream& rng);
/// |Y(t)| with Y symmetric alpha-stable (Chambers-Mallows-Stuck).
ClockSample sample_alpha_clock(double alpha, double t, RngStream& rng);
ClockSample sample_clock(const ClockKind& kind, double t, RngStream& rng);

struct PathResult {
  bool exited = false;
  Point position;     // state at the horizon, or the last interior state before exit
  double time = 0.0;  // horizon, or the step at which the exit was detected
};

/// Euler walk with N(0, 2h) increments and a Brownian-bridge crossing test
/// against every face of the bounding box. The final step is shortened to
/// land on the horizon.
PathResult simulate_killed_path(const Domain& domain, const Point& x0, double horizon, double h, RngStream& rng);

struct MCEstimate {
  double mean = 0.0;
  double stderr_ = 0.0;
  std::size_t n = 0;
  double time_step = 0.0;
  std::size_t rejected = 0;
};

enum class KillingMode {
  clock_then_path,    // draw L, score f(X_L) 1{tau_D > L}
  subordinated_path,  // walk X(E(s)) in outer time and check exit before t
};

struct McConfig {
  KillingMode mode = KillingMode::clock_then_path;
  int threads = 0;  // 0: FRACSUB_THREADS or hardware concurrency
};

/// Thread count used when McConfig::threads is 0.
int default_thread_count();

/// 1e-3 * scale^2.
double default_time_step(const Domain& domain);

/// Monte Carlo estimate of E_x[f(X(L)) 1{tau_D(X) > L}], L the clock at time t.
/// Replicate i draws from rng.substream(i); results do not depend on the
/// thread count. Non-finite clock draws are rejected and counted; more than
/// 0.1% rejections raise RunError. t = 0 is allowed (every clock is 0 there).
/// subordinated_path needs an inverse_stable clock.
MCEstimate mc_solve(const Domain& domain, const PointFn& f, const ClockKind& clock, double t, const Point& x,
                    std::size_t n, double h, const RngStream& rng, const McConfig& cfg = {});

/// mc_solve at every grid point (grid point k uses stream k of `seed`).
/// err holds the standard error; boundary points return 0 with err 0.
SolutionField solve_mc(const Domain& domain, const InitialCondition& f, const ClockKind& clock,
                       const std::vector<GridPoint>& grid, std::size_t n, double h, std::uint64_t seed,
                       const McConfig& cfg = {});

}  // namespace fracsub
