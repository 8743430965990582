#pragma once

// Benchmark objectives: the n-D quadratic, the Shekel family, a 1-D multimodal
// sample and the XOR network, plus the gradient-descent baseline for XOR.

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "dgo/bitcodec.hpp"
#include "dgo/objective.hpp"

namespace dgo {

inline double quadratic(std::span<const double> x, std::span<const double> center) {
  if (x.size() != center.size()) throw std::invalid_argument("quadratic: dims mismatch");
  double sum = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double d = x[j] - center[j];
    sum += d * d;
  }
  return sum;
}

struct ShekelParams {
  std::vector<std::vector<double>> foci;  // m rows of d coordinates
  std::vector<double> shifts;             // m positive values

  std::size_t dims() const { return foci.empty() ? 0 : foci.front().size(); }

  void validate() const {
    if (foci.empty() || foci.size() != shifts.size())
      throw std::invalid_argument("ShekelParams: need one shift per focus");
    for (const auto& row : foci)
      if (row.size() != dims()) throw std::invalid_argument("ShekelParams: ragged foci");
    for (double c : shifts)
      if (!(c > 0.0)) throw std::invalid_argument("ShekelParams: shifts must be positive");
  }

  /// Classic 4-D, five-focus configuration on [0, 10]^4. Global minimum
  /// -10.1531996790582 at (4.0000372, 4.0001333, 4.0000372, 4.0001333),
  /// established by exhaustive grid search plus local refinement.
  static ShekelParams default_4d() {
    return {{{4, 4, 4, 4}, {1, 1, 1, 1}, {8, 8, 8, 8}, {6, 6, 6, 6}, {3, 7, 3, 7}},
            {0.1, 0.2, 0.2, 0.4, 0.4}};
  }
};

/// -sum_j 1 / (|x - A_j|^2 + c_j)
inline double shekel(std::span<const double> x, const ShekelParams& p) {
  if (x.size() != p.dims()) throw std::invalid_argument("shekel: dims mismatch");
  double sum = 0.0;
  for (std::size_t j = 0; j < p.foci.size(); ++j) {
    double d = p.shifts[j];
    for (std::size_t k = 0; k < x.size(); ++k) {
      const double diff = x[k] - p.foci[j][k];
      d += diff * diff;
    }
    sum -= 1.0 / d;
  }
  return sum;
}

/// 1 - cos(3 pi x) + 0.1 x^2 on [-5, 5]. Local minima near every multiple of
/// 2/3; the unique global minimum is f(0) = 0.
inline double multimodal1d(double x) {
  return 1.0 - std::cos(3.0 * std::numbers::pi * x) + 0.1 * x * x;
}

inline double multimodal1d_derivative(double x) {
  return 3.0 * std::numbers::pi * std::sin(3.0 * std::numbers::pi * x) + 0.2 * x;
}

// ---------------------------------------------------------------------------
// XOR network
//
// 2-2-1 logistic network, hidden biases, no output bias. Weight layout:
//   [w11, w12, w21, w22, b1, b2, v1, v2]
//   h_i = sigmoid(w_i1 x1 + w_i2 x2 + b_i),  y = sigmoid(v1 h1 + v2 h2)
// ---------------------------------------------------------------------------

inline constexpr std::size_t kXorWeights = 8;

struct XorPattern {
  double x1, x2, target;
};

inline constexpr std::array<XorPattern, 4> kXorPatterns{
    {{0, 0, 0}, {0, 1, 1}, {1, 0, 1}, {1, 1, 0}}};

inline double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

inline void check_xor_weights(std::span<const double> w) {
  if (w.size() != kXorWeights)
    throw std::invalid_argument("xor: expected 8 weights, got " + std::to_string(w.size()));
}

inline std::array<double, 4> xor_outputs(std::span<const double> w) {
  check_xor_weights(w);
  std::array<double, 4> out{};
  for (std::size_t p = 0; p < kXorPatterns.size(); ++p) {
    const auto& [x1, x2, t] = kXorPatterns[p];
    const double h1 = sigmoid(w[0] * x1 + w[1] * x2 + w[4]);
    const double h2 = sigmoid(w[2] * x1 + w[3] * x2 + w[5]);
    out[p] = sigmoid(w[6] * h1 + w[7] * h2);
  }
  return out;
}

inline double xor_sse(std::span<const double> w) {
  const auto y = xor_outputs(w);
  double sse = 0.0;
  for (std::size_t p = 0; p < y.size(); ++p) {
    const double e = y[p] - kXorPatterns[p].target;
    sse += e * e;
  }
  return sse;
}

/// True when every pattern lands on the correct side of 0.5.
inline bool xor_classifies(std::span<const double> w) {
  const auto y = xor_outputs(w);
  for (std::size_t p = 0; p < y.size(); ++p)
    if ((y[p] > 0.5) != (kXorPatterns[p].target > 0.5)) return false;
  return true;
}

/// Backpropagated gradient of xor_sse.
inline std::array<double, kXorWeights> xor_grad(std::span<const double> w) {
  check_xor_weights(w);
  std::array<double, kXorWeights> g{};
  for (const auto& [x1, x2, t] : kXorPatterns) {
    const double h1 = sigmoid(w[0] * x1 + w[1] * x2 + w[4]);
    const double h2 = sigmoid(w[2] * x1 + w[3] * x2 + w[5]);
    const double y = sigmoid(w[6] * h1 + w[7] * h2);
    const double delta = 2.0 * (y - t) * y * (1.0 - y);
    const double d1 = delta * w[6] * h1 * (1.0 - h1);
    const double d2 = delta * w[7] * h2 * (1.0 - h2);
    g[0] += d1 * x1;
    g[1] += d1 * x2;
    g[2] += d2 * x1;
    g[3] += d2 * x2;
    g[4] += d1;
    g[5] += d2;
    g[6] += delta * h1;
    g[7] += delta * h2;
  }
  return g;
}

struct GdStep {
  std::size_t step;
  double sse;
};

struct GdTrace {
  std::vector<GdStep> steps;  // steps + 1 entries unless diverged
  std::array<double, kXorWeights> final_weights{};
  bool diverged = false;
};

/// Full-batch gradient descent on xor_sse. Stops early if the error or any
/// weight becomes non-finite.
inline GdTrace gd_train(std::span<const double> w0, double lr, std::size_t steps) {
  check_xor_weights(w0);
  if (!(lr >= 0.0) || !std::isfinite(lr))
    throw std::invalid_argument("gd_train: learning rate must be finite and non-negative");
  GdTrace trace;
  std::array<double, kXorWeights> w{};
  std::copy(w0.begin(), w0.end(), w.begin());
  trace.steps.reserve(steps + 1);
  trace.steps.push_back({0, xor_sse(w)});
  for (std::size_t s = 1; s <= steps; ++s) {
    const auto g = xor_grad(w);
    for (std::size_t i = 0; i < kXorWeights; ++i) w[i] -= lr * g[i];
    const double e = xor_sse(w);
    bool finite = std::isfinite(e);
    for (double wi : w) finite = finite && std::isfinite(wi);
    if (!finite) {
      trace.diverged = true;
      break;
    }
    trace.steps.push_back({s, e});
  }
  trace.final_weights = w;
  return trace;
}

// ---------------------------------------------------------------------------
// Busy-work used to emulate expensive objectives in speedup measurements.
// The loop is CPU work, not a clock wait, so oversubscribed threads cannot
// overlap their waits.
// ---------------------------------------------------------------------------

namespace detail {

inline std::uint64_t spin_loops(std::uint64_t loops) {
  std::uint64_t x = 0x9E3779B97F4A7C15ULL;
  for (std::uint64_t i = 0; i < loops; ++i) {
    x ^= x << 13;
    x ^= x >> 7;
    x ^= x << 17;
  }
  return x;
}

inline std::atomic<std::uint64_t> spin_sink{0};

}  // namespace detail

/// Loops per nanosecond of the busy-work kernel, measured once per process.
inline double spin_loops_per_ns() {
  static const double rate = [] {
    using clock = std::chrono::steady_clock;
    constexpr std::uint64_t kLoops = 20'000'000;
    double best_ns = 1e300;
    for (int rep = 0; rep < 3; ++rep) {
      const auto t0 = clock::now();
      detail::spin_sink.fetch_add(detail::spin_loops(kLoops), std::memory_order_relaxed);
      const double ns = std::chrono::duration<double, std::nano>(clock::now() - t0).count();
      best_ns = std::min(best_ns, ns);
    }
    return static_cast<double>(kLoops) / std::max(best_ns, 1.0);
  }();
  return rate;
}

inline void spin_for_ns(std::int64_t ns) {
  if (ns <= 0) return;
  const auto loops = static_cast<std::uint64_t>(static_cast<double>(ns) * spin_loops_per_ns());
  detail::spin_sink.fetch_add(detail::spin_loops(loops), std::memory_order_relaxed);
}

// ---------------------------------------------------------------------------
// Factories
// ---------------------------------------------------------------------------

inline std::vector<Bounds> uniform_bounds(std::size_t dims, double lo, double hi) {
  return std::vector<Bounds>(dims, Bounds{lo, hi});
}

inline Objective make_quadratic(std::vector<Bounds> bounds, std::vector<double> center) {
  if (center.size() != bounds.size())
    throw std::invalid_argument("make_quadratic: center dims mismatch");
  return Objective("quadratic", std::move(bounds),
                   [c = std::move(center)](std::span<const double> x) { return quadratic(x, c); });
}

inline Objective make_quadratic(std::size_t dims, double lo = -5.0, double hi = 5.0) {
  return make_quadratic(uniform_bounds(dims, lo, hi), std::vector<double>(dims, 0.0));
}

inline Objective make_shekel(ShekelParams params = ShekelParams::default_4d(), double lo = 0.0,
                             double hi = 10.0) {
  params.validate();
  const std::size_t d = params.dims();
  return Objective("shekel", uniform_bounds(d, lo, hi),
                   [p = std::move(params)](std::span<const double> x) { return shekel(x, p); });
}

inline Objective make_multimodal1d(double lo = -5.0, double hi = 5.0) {
  return Objective("multimodal1d", {{lo, hi}},
                   [](std::span<const double> x) { return multimodal1d(x[0]); });
}

/// Default weight box for the XOR network.
inline constexpr double kXorWeightBox = 20.0;

inline Objective make_xor(double box = kXorWeightBox) {
  return Objective("xor", uniform_bounds(kXorWeights, -box, box),
                   [](std::span<const double> w) { return xor_sse(w); });
}

inline Objective make_constant(std::size_t dims, double value = 1.0, double lo = -1.0,
                               double hi = 1.0) {
  return Objective("constant", uniform_bounds(dims, lo, hi),
                   [value](std::span<const double>) { return value; });
}

/// Same objective with `ns` of busy-work added to every evaluation.
inline Objective with_spin(const Objective& base, std::int64_t ns) {
  if (ns <= 0) return base;
  spin_loops_per_ns();  // calibrate before any worker thread starts
  return Objective(base.name(), base.bounds(), [base, ns](std::span<const double> x) {
    spin_for_ns(ns);
    return base(x);
  });
}

}  // namespace dgo
