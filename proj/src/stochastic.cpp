#include "fracsub/stochastic.hpp"

#include <algorithm>
#include <atomic>
#include <boost/math/constants/constants.hpp>
#include <boost/random/exponential_distribution.hpp>
#include <boost/random/normal_distribution.hpp>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "fracsub/errors.hpp"

namespace fracsub {

namespace {

constexpr double kPi = boost::math::constants::pi<double>();
constexpr std::size_t kBlock = 1024;

constexpr std::uint32_t kM0 = 0xD2511F53u, kM1 = 0xCD9E8D57u;
constexpr std::uint32_t kW0 = 0x9E3779B9u, kW1 = 0xBB67AE85u;

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

void check_beta(double beta) {
  if (!(beta > 0.0 && beta < 1.0)) throw ParameterError("stable subordinator index must satisfy 0<β<1");
}

void check_time(double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw ParameterError("clock time must be finite and >= 0");
}

// running mean / M2, merged with Chan's update
struct Welford {
  std::size_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;
  std::size_t rejected = 0;

  void add(double v) {
    ++n;
    const double d = v - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (v - mean);
  }
  void merge(const Welford& o) {
    rejected += o.rejected;
    if (o.n == 0) return;
    if (n == 0) {
      const auto r = rejected;
      *this = o;
      rejected = r;
      return;
    }
    const double na = static_cast<double>(n), nb = static_cast<double>(o.n);
    const double d = o.mean - mean;
    const double nt = na + nb;
    mean += d * nb / nt;
    m2 += o.m2 + d * d * na * nb / nt;
    n += o.n;
  }
};

// Survival through one step x -> y of length dt, given both endpoints inside
// the box. Every face is tested, not only the nearest one.
double bridge_cross_probability(const Point& x, const Point& y, const std::vector<double>& lo,
                                const std::vector<double>& hi, double dt) {
  double survive = 1.0;
  bool any = false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (double e : {(x[i] - lo[i]) * (y[i] - lo[i]), (hi[i] - x[i]) * (hi[i] - y[i])}) {
      const double a = e / dt;
      if (a < 40.0) {  // exp(-40) ~ 4e-18, below the uniform's resolution
        survive *= 1.0 - std::exp(-a);
        any = true;
      }
    }
  }
  return any ? 1.0 - survive : 0.0;
}

bool in_box(const Point& y, const std::vector<double>& lo, const std::vector<double>& hi) {
  for (std::size_t i = 0; i < y.size(); ++i)
    if (!(y[i] > lo[i] && y[i] < hi[i])) return false;
  return true;
}

}  // namespace

// ---------------------------------------------------------------- RngStream

std::array<std::uint32_t, 4> RngStream::philox(std::array<std::uint32_t, 4> c, std::array<std::uint32_t, 2> k) {
  for (int r = 0; r < 10; ++r) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * c[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * c[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32), lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32), lo1 = static_cast<std::uint32_t>(p1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    k[0] += kW0;
    k[1] += kW1;
  }
  return c;
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id) : seed_(seed), stream_(stream_id) {}

RngStream::result_type RngStream::operator()() {
  if (available_ == 0) {
    const std::array<std::uint32_t, 4> ctr{static_cast<std::uint32_t>(position_),
                                           static_cast<std::uint32_t>(position_ >> 32),
                                           static_cast<std::uint32_t>(stream_),
                                           static_cast<std::uint32_t>(stream_ >> 32)};
    const std::array<std::uint32_t, 2> key{static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32)};
    const auto out = philox(ctr, key);
    ++position_;
    buffer_[0] = (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
    buffer_[1] = (static_cast<std::uint64_t>(out[3]) << 32) | out[2];
    available_ = 2;
  }
  return buffer_[2 - available_--];
}

double RngStream::uniform() { return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53; }

double RngStream::normal() { return boost::random::normal_distribution<double>()(*this); }

double RngStream::exponential() { return boost::random::exponential_distribution<double>()(*this); }

RngStream RngStream::substream(std::uint64_t index) const {
  return RngStream(seed_, splitmix64(splitmix64(stream_) + index));
}

// ---------------------------------------------------------------- clocks

ClockKind ClockKind::inverse_stable(double beta) {
  if (!(beta > 0.0 && beta <= 1.0)) throw ParameterError("inverse stable clock needs 0<β<=1");
  ClockKind c;
  c.type = Type::inverse_stable;
  c.beta = beta;
  return c;
}

ClockKind ClockKind::iterated_bm(int k) {
  if (k < 1) throw ParameterError("iterated Brownian clock needs k >= 1");
  ClockKind c;
  c.type = Type::iterated_bm;
  c.k = k;
  return c;
}

ClockKind ClockKind::two_sided_iterated(int k) {
  if (k < 1) throw ParameterError("two-sided iterated clock needs k >= 1");
  ClockKind c;
  c.type = Type::two_sided_iterated;
  c.k = k;
  return c;
}

ClockKind ClockKind::alpha_stable(double alpha) {
  if (!(alpha > 0.0 && alpha <= 2.0)) throw ParameterError("stability index must satisfy 0<α<=2");
  ClockKind c;
  c.type = Type::alpha_stable;
  c.alpha = alpha;
  return c;
}

std::string ClockKind::describe() const {
  std::ostringstream os;
  switch (type) {
    case Type::inverse_stable: os << "inverse_stable(beta=" << beta << ")"; break;
    case Type::iterated_bm: os << "iterated_bm(k=" << k << ")"; break;
    case Type::two_sided_iterated: os << "two_sided_iterated(k=" << k << ")"; break;
    case Type::alpha_stable: os << "alpha_stable(alpha=" << alpha << ")"; break;
  }
  return os.str();
}

double sample_stable_subordinator(double beta, RngStream& rng) {
  check_beta(beta);
  const double phi = kPi * rng.uniform();
  const double w = rng.exponential();
  const double log_a =
      (beta * std::log(std::sin(beta * phi)) + (1 - beta) * std::log(std::sin((1 - beta) * phi)) - std::log(std::sin(phi))) /
      (1 - beta);
  return std::exp((1 - beta) / beta * (log_a - std::log(w)));
}

ClockSample sample_inverse_stable(double beta, double t, RngStream& rng) {
  check_time(t);
  ClockSample s{ClockKind::inverse_stable(beta), t, 0.0};
  if (beta == 1.0) {
    s.value = t;
    return s;
  }
  const double d = sample_stable_subordinator(beta, rng);
  s.value = t == 0.0 ? 0.0 : std::exp(beta * (std::log(t) - std::log(d)));
  return s;
}

ClockSample sample_iterated_bm_clock(int k, double t, RngStream& rng) {
  check_time(t);
  ClockSample s{ClockKind::iterated_bm(k), t, t};
  for (int j = 0; j < k; ++j) s.value = std::sqrt(2 * s.value) * std::abs(rng.normal());
  return s;
}

ClockSample sample_two_sided_clock(int k, double t, RngStream& rng) {
  check_time(t);
  ClockSample s{ClockKind::two_sided_iterated(k), t, t};
  for (int j = 0; j < k; ++j) s.value = std::sqrt(2 * std::abs(s.value)) * rng.normal();
  return s;
}

ClockSample sample_alpha_clock(double alpha, double t, RngStream& rng) {
  check_time(t);
  ClockSample s{ClockKind::alpha_stable(alpha), t, 0.0};
  const double v = kPi * (rng.uniform() - 0.5);
  const double w = rng.exponential();
  double y;
  if (alpha == 1.0) {
    y = std::tan(v);
  } else {
    y = std::sin(alpha * v) / std::pow(std::cos(v), 1 / alpha) *
        std::pow(std::cos((1 - alpha) * v) / w, (1 - alpha) / alpha);
  }
  s.value = std::abs(std::pow(t, 1 / alpha) * y);
  return s;
}

ClockSample sample_clock(const ClockKind& kind, double t, RngStream& rng) {
  switch (kind.type) {
    case ClockKind::Type::inverse_stable: return sample_inverse_stable(kind.beta, t, rng);
    case ClockKind::Type::iterated_bm: return sample_iterated_bm_clock(kind.k, t, rng);
    case ClockKind::Type::two_sided_iterated: return sample_two_sided_clock(kind.k, t, rng);
    case ClockKind::Type::alpha_stable: return sample_alpha_clock(kind.alpha, t, rng);
  }
  throw ParameterError("unknown clock kind");
}

// ---------------------------------------------------------------- paths

PathResult simulate_killed_path(const Domain& domain, const Point& x0, double horizon, double h, RngStream& rng) {
  if (!domain.contains(x0)) throw ParameterError("killed path must start strictly inside the domain");
  if (!(h > 0.0) || !std::isfinite(h)) throw ParameterError("path step h must be > 0");
  if (!(horizon >= 0.0) || !std::isfinite(horizon)) throw ParameterError("path horizon must be finite and >= 0");
  const auto& lo = domain.lower();
  const auto& hi = domain.upper();
  const bool table = domain.kind() == Domain::Kind::table;

  PathResult r;
  r.position = x0;
  Point y(x0.size());
  double elapsed = 0.0;
  while (elapsed < horizon) {
    const double dt = std::min(h, horizon - elapsed);
    const double sd = std::sqrt(2 * dt);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = r.position[i] + sd * rng.normal();
    elapsed += dt;
    const bool inside = table ? domain.contains(y) : in_box(y, lo, hi);
    if (!inside) {
      r.exited = true;
      r.time = elapsed;
      return r;
    }
    const double p = bridge_cross_probability(r.position, y, lo, hi, dt);
    if (p > 0.0 && rng.uniform() < p) {
      r.exited = true;
      r.time = elapsed;
      return r;
    }
    r.position.swap(y);
  }
  r.time = horizon;
  return r;
}

// ---------------------------------------------------------------- estimators

int default_thread_count() {
  if (const char* env = std::getenv("FRACSUB_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

double default_time_step(const Domain& domain) {
  const double s = domain.scale();
  return 1e-3 * s * s;
}

namespace {

// one replicate; returns NaN for a rejected clock draw
double replicate(const Domain& domain, const PointFn& f, const ClockKind& clock, double t, const Point& x, double h,
                 KillingMode mode, RngStream& rng) {
  if (mode == KillingMode::subordinated_path) {
    // walk in operational time, stop at the first step where D(jh) > t;
    // the clock E(t) then lies in ((j-1)h, jh]
    const double beta = clock.beta;
    const double scale = std::pow(h, 1 / beta);
    const auto& lo = domain.lower();
    const auto& hi = domain.upper();
    const bool table = domain.kind() == Domain::Kind::table;
    const double sd = std::sqrt(2 * h);
    Point pos = x, y(x.size());
    double d = 0.0;
    for (;;) {
      const double inc = beta == 1.0 ? h : scale * sample_stable_subordinator(beta, rng);
      if (!std::isfinite(inc)) return std::numeric_limits<double>::quiet_NaN();
      d += inc;
      if (d > t) return f(pos);
      for (std::size_t i = 0; i < y.size(); ++i) y[i] = pos[i] + sd * rng.normal();
      if (!(table ? domain.contains(y) : in_box(y, lo, hi))) return 0.0;
      const double p = bridge_cross_probability(pos, y, lo, hi, h);
      if (p > 0.0 && rng.uniform() < p) return 0.0;
      pos.swap(y);
    }
  }
  const auto c = sample_clock(clock, t, rng);
  if (!std::isfinite(c.value)) return std::numeric_limits<double>::quiet_NaN();
  // two-sided: -tau(X-) < J < tau(X+) only involves the side J falls on,
  // and X(J) is that side's path at |J|
  const auto path = simulate_killed_path(domain, x, std::abs(c.value), h, rng);
  return path.exited ? 0.0 : f(path.position);
}

}  // namespace

MCEstimate mc_solve(const Domain& domain, const PointFn& f, const ClockKind& clock, double t, const Point& x,
                    std::size_t n, double h, const RngStream& rng, const McConfig& cfg) {
  if (n < 100) throw ParameterError("Monte Carlo needs n >= 100 replicates");
  if (!(h > 0.0) || !std::isfinite(h)) throw ParameterError("path step h must be > 0");
  check_time(t);
  if (!domain.contains(x)) throw ParameterError("Monte Carlo point must lie strictly inside the domain");
  if (cfg.mode == KillingMode::subordinated_path && clock.type != ClockKind::Type::inverse_stable)
    throw ParameterError("subordinated_path killing is only defined for the inverse stable clock");

  const std::size_t blocks = (n + kBlock - 1) / kBlock;
  std::vector<Welford> stats(blocks);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (;;) {
      const std::size_t b = next.fetch_add(1);
      if (b >= blocks) return;
      try {
        Welford w;
        const std::size_t end = std::min(n, (b + 1) * kBlock);
        for (std::size_t i = b * kBlock; i < end; ++i) {
          RngStream r = rng.substream(i);
          const double v = replicate(domain, f, clock, t, x, h, cfg.mode, r);
          if (std::isnan(v)) {
            ++w.rejected;
          } else {
            w.add(v);
          }
        }
        stats[b] = w;
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(blocks);
        return;
      }
    }
  };

  const int threads = std::max(1, std::min<int>(cfg.threads > 0 ? cfg.threads : default_thread_count(),
                                                static_cast<int>(blocks)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  Welford total;
  for (const auto& s : stats) total.merge(s);
  if (static_cast<double>(total.rejected) > 1e-3 * static_cast<double>(n)) {
    throw RunError(std::to_string(total.rejected) + " of " + std::to_string(n) + " clock draws were non-finite (" +
                   clock.describe() + ")");
  }
  if (total.n < 2) throw RunError("fewer than two accepted replicates");
  MCEstimate est;
  est.mean = total.mean;
  est.stderr_ = std::sqrt(total.m2 / static_cast<double>(total.n - 1) / static_cast<double>(total.n));
  est.n = total.n;
  est.time_step = h;
  est.rejected = total.rejected;
  return est;
}

SolutionField solve_mc(const Domain& domain, const InitialCondition& f, const ClockKind& clock,
                       const std::vector<GridPoint>& grid, std::size_t n, double h, std::uint64_t seed,
                       const McConfig& cfg) {
  SolutionField field;
  field.grid = grid;
  field.method = Method::mc;
  field.values.resize(grid.size());
  field.err.resize(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (!domain.contains(grid[k].x)) continue;  // killed on the boundary
    try {
      const auto e = mc_solve(domain, f.fn(), clock, grid[k].t, grid[k].x, n, h, RngStream(seed, k), cfg);
      field.values[k] = e.mean;
      field.err[k] = e.stderr_;
    } catch (const RunError& e) {
      throw RunError(std::string(e.what()) + " at grid point " + std::to_string(k));
    }
  }
  return field;
}

}  // namespace fracsub
