#pragma once

// Measurement harnesses: sequential per-iteration cost versus dimension, and
// wall-time speedup versus worker count for a fixed optimization workload.
//
// Timing: steady clock, one untimed warmup, median over the repetitions.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <ctime>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "dgo/engine.hpp"
#include "dgo/objectives.hpp"
#include "dgo/parallel.hpp"

namespace dgo {

inline double median(std::vector<double> xs) {
  if (xs.empty()) throw std::invalid_argument("median: empty sample");
  std::sort(xs.begin(), xs.end());
  const std::size_t n = xs.size();
  return n % 2 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

/// Least-squares slope of log(y) against log(x).
inline double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("loglog_slope: need at least two paired points");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0 && y[i] > 0)) throw std::invalid_argument("loglog_slope: values must be > 0");
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(y.size());
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  if (sxx == 0) throw std::invalid_argument("loglog_slope: x values must not all be equal");
  return sxy / sxx;
}

/// Children per iteration at `bits` bits per variable.
inline std::uint64_t evals_per_iteration(std::size_t dims, unsigned bits) {
  return 2 * static_cast<std::uint64_t>(dims) * bits - 1;
}

/// "seq", "pool:W" or "pool". A bare "pool" takes its size from `env_workers`
/// (the DGO_WORKERS variable) when set, else from the hardware thread count.
inline EvalBackend parse_backend(std::string_view spec,
                                 std::optional<std::string> env_workers = std::nullopt) {
  const auto parse_count = [](std::string_view text) -> std::size_t {
    std::size_t n = 0;
    if (text.empty()) throw std::invalid_argument("backend: empty worker count");
    for (char ch : text) {
      if (ch < '0' || ch > '9')
        throw std::invalid_argument("backend: bad worker count '" + std::string(text) + "'");
      n = n * 10 + static_cast<std::size_t>(ch - '0');
      if (n > 4096) throw std::invalid_argument("backend: worker count too large");
    }
    if (n == 0) throw std::invalid_argument("backend: worker count must be positive");
    return n;
  };
  if (spec == "seq") return EvalBackend::sequential();
  if (spec == "pool") {
    if (env_workers && !env_workers->empty())
      return EvalBackend::worker_pool(parse_count(*env_workers));
    return EvalBackend::worker_pool(std::max(1u, std::thread::hardware_concurrency()));
  }
  if (spec.starts_with("pool:")) return EvalBackend::worker_pool(parse_count(spec.substr(5)));
  throw std::invalid_argument("backend: expected seq, pool or pool:W, got '" + std::string(spec) +
                              "'");
}

inline std::optional<std::string> env_workers() {
  if (const char* v = std::getenv("DGO_WORKERS")) return std::string(v);
  return std::nullopt;
}

struct BenchMetadata {
  std::string hardware;
  std::size_t repetitions = 0;
  std::string timestamp;
};

inline BenchMetadata make_metadata(std::size_t repetitions) {
  BenchMetadata m;
  m.hardware = std::to_string(std::thread::hardware_concurrency()) + " hardware threads";
  m.repetitions = repetitions;
  const std::time_t now = std::time(nullptr);
  char buf[32];
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  m.timestamp = buf;
  return m;
}

// ---------------------------------------------------------------------------
// Sequential scaling
// ---------------------------------------------------------------------------

struct ScalingOptions {
  std::vector<std::size_t> dims{2, 4, 6, 8, 10, 12};
  unsigned bits = 8;
  std::size_t repetitions = 25;
  std::int64_t min_sample_ns = 2'000'000;  // per dims value and repetition
  std::uint64_t seed = 1;
};

struct ScalingRow {
  std::size_t dims;
  unsigned bits_per_var;
  std::uint64_t evals_per_iteration;
  std::uint64_t iterations;  // per run; deterministic
  double ns_per_iteration;   // median over repetitions
};

struct ScalingReport {
  std::vector<ScalingRow> rows;
  double slope = 0;
  BenchMetadata meta;
};

/// Quadratic objective on [-5, 5]^d at fixed resolution, sequential backend.
/// The timed unit is one iteration body (generate all children, evaluate
/// them, select) applied to a fixed set of random parents; the iterations
/// column is the length of one full run from the seeded start.
inline ScalingReport bench_scaling(const ScalingOptions& opt) {
  if (opt.dims.size() < 3)
    throw std::invalid_argument("bench scaling: need at least 3 dimension values for a slope");
  if (opt.repetitions < 1) throw std::invalid_argument("bench scaling: repetitions must be >= 1");
  for (auto d : opt.dims)
    if (d == 0) throw std::invalid_argument("bench scaling: dims must be positive");
  using clock = std::chrono::steady_clock;
  constexpr std::size_t kParents = 32;
  const EvalBackend backend = EvalBackend::sequential();
  ScalingReport report;
  report.meta = make_metadata(opt.repetitions);
  struct Workload {
    Objective f;
    Quantizer q;
    std::vector<SearchState> states;
    std::uint64_t iterations;
    std::vector<double> samples;
  };
  std::vector<Workload> loads;
  for (const std::size_t d : opt.dims) {
    const Objective f = make_quadratic(d);
    RunConfig cfg;
    cfg.bits_init = cfg.bits_max = opt.bits;
    cfg.seed = opt.seed;
    cfg.max_evals = std::uint64_t{1} << 40;
    const std::uint64_t iters = run(cfg, f, backend).iterations;
    const Quantizer q(f.bounds(), opt.bits);
    std::vector<SearchState> states;
    for (std::size_t i = 0; i < kParents; ++i) {
      BitString p = encode_point(random_point(q.bounds(), opt.seed + i), q);
      const double v = f(decode_point(p, q));
      states.push_back({std::move(p), v, q, 0, 1});
    }
    loads.push_back({f, q, std::move(states), iters, {}});
  }

  std::size_t sink = 0;
  const auto iterate = [&](const Workload& w, const SearchState& s) {
    const ChildSet children = generate_children(s.parent, opt.bits);
    const auto values = evaluate_batch(children, w.f, w.q, backend);
    sink += dgo_step(s, values, opt.bits).index();
  };
  for (const auto& w : loads)
    for (const auto& s : w.states) iterate(w, s);  // warmup

  // dims are interleaved within each repetition so slow drift in machine
  // speed affects every row alike
  for (std::size_t rep = 0; rep < opt.repetitions; ++rep)
    for (auto& w : loads) {
      std::uint64_t count = 0;
      const auto t0 = clock::now();
      std::int64_t elapsed = 0;
      do {
        for (const auto& s : w.states) iterate(w, s);
        count += w.states.size();
        elapsed = std::chrono::duration_cast<std::chrono::nanoseconds>(clock::now() - t0).count();
      } while (elapsed < opt.min_sample_ns);
      w.samples.push_back(static_cast<double>(elapsed) / static_cast<double>(count));
    }
  if (sink == std::size_t(-1)) report.meta.hardware += ' ';
  for (std::size_t i = 0; i < loads.size(); ++i)
    report.rows.push_back({opt.dims[i], opt.bits, evals_per_iteration(opt.dims[i], opt.bits),
                           loads[i].iterations, median(loads[i].samples)});
  std::vector<double> xs, ys;
  for (const auto& r : report.rows) {
    xs.push_back(static_cast<double>(r.dims));
    ys.push_back(r.ns_per_iteration);
  }
  report.slope = loglog_slope(xs, ys);
  return report;
}

// ---------------------------------------------------------------------------
// Worker-count speedup
// ---------------------------------------------------------------------------

struct SpeedupOptions {
  std::vector<std::size_t> workers{1, 2, 4, 8};
  std::int64_t spin_ns = 1'000'000;
  std::size_t dims = 5;  // 79 children per batch at 8 bits
  unsigned bits = 8;
  std::uint64_t iterations = 4;
  std::size_t repetitions = 5;
};

struct SpeedupRow {
  std::string backend;
  std::size_t workers;
  double wall_ms;  // median
  double speedup;  // T(1) / T(W)
};

struct SpeedupReport {
  std::vector<SpeedupRow> rows;
  std::uint64_t children_per_batch = 0;
  std::uint64_t evals_per_run = 0;
  BenchMetadata meta;
};

/// The workload is a DGO run on the quadratic with `spin_ns` of busy-work per
/// evaluation, started from the lower corner and capped at `iterations`
/// batches. W = 1 is the sequential backend; other counts use a worker pool.
inline SpeedupReport bench_speedup(const SpeedupOptions& opt) {
  if (std::find(opt.workers.begin(), opt.workers.end(), std::size_t{1}) == opt.workers.end())
    throw std::invalid_argument("bench speedup: worker list must include 1 (the baseline)");
  if (opt.repetitions < 1) throw std::invalid_argument("bench speedup: repetitions must be >= 1");
  if (opt.iterations < 1) throw std::invalid_argument("bench speedup: iterations must be >= 1");
  for (auto w : opt.workers)
    if (w == 0) throw std::invalid_argument("bench speedup: worker counts must be positive");

  const Objective f = with_spin(make_quadratic(opt.dims), opt.spin_ns);
  RunConfig cfg;
  cfg.bits_init = cfg.bits_max = opt.bits;
  cfg.initial_point = std::vector<double>(opt.dims, -5.0);
  const std::uint64_t batch = evals_per_iteration(opt.dims, opt.bits);
  cfg.max_evals = 1 + opt.iterations * batch;

  SpeedupReport report;
  report.children_per_batch = batch;
  report.meta = make_metadata(opt.repetitions);

  std::vector<std::size_t> order = opt.workers;
  std::sort(order.begin(), order.end());
  order.erase(std::unique(order.begin(), order.end()), order.end());
  double baseline_ms = 0;
  for (const std::size_t w : order) {
    const EvalBackend backend = w == 1 ? EvalBackend::sequential() : EvalBackend::worker_pool(w);
    report.evals_per_run = run(cfg, f, backend).evals;  // warmup
    std::vector<double> samples;
    for (std::size_t rep = 0; rep < opt.repetitions; ++rep)
      samples.push_back(static_cast<double>(run(cfg, f, backend).wall_ns) / 1e6);
    const double ms = median(samples);
    if (w == 1) baseline_ms = ms;
    report.rows.push_back({backend.describe(), w, ms, w == 1 ? 1.0 : baseline_ms / ms});
  }
  return report;
}

}  // namespace dgo
