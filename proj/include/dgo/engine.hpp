#pragma once

// The outer optimization loop: generate all children of the parent, evaluate
// them, accept the best one if it strictly improves on the parent, otherwise
// refine the grid by one bit per variable, and stop once the finest grid has
// no improving child or the evaluation budget is spent.

#include <chrono>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "dgo/bitcodec.hpp"
#include "dgo/neighborhood.hpp"
#include "dgo/objective.hpp"
#include "dgo/parallel.hpp"

namespace dgo {

struct RunConfig {
  unsigned bits_init = 4;
  unsigned bits_max = 16;
  std::uint64_t max_evals = 1'000'000;
  std::uint64_t seed = 0;
  std::optional<std::vector<double>> initial_point;
  Neighborhood neighborhood{};

  void validate(std::size_t dims) const {
    if (bits_init < 1 || bits_init > bits_max)
      throw std::invalid_argument("RunConfig: require 1 <= bits_init <= bits_max (got " +
                                  std::to_string(bits_init) + ", " + std::to_string(bits_max) +
                                  ")");
    if (bits_max > Quantizer::kMaxBitsPerVar)
      throw std::invalid_argument("RunConfig: bits_max exceeds " +
                                  std::to_string(Quantizer::kMaxBitsPerVar));
    if (max_evals < 1) throw std::invalid_argument("RunConfig: max_evals must be >= 1");
    if (initial_point && initial_point->size() != dims)
      throw std::invalid_argument("RunConfig: initial point has " +
                                  std::to_string(initial_point->size()) + " coordinates, expected " +
                                  std::to_string(dims));
  }
};

/// The current parent and bookkeeping. parent_value always equals the
/// objective at decode_point(parent, quantizer).
struct SearchState {
  BitString parent;
  double parent_value;
  Quantizer quantizer;
  std::uint64_t iteration = 0;
  std::uint64_t evals = 0;
};

enum class TerminationReason { kBudget, kMaxResolution };

inline const char* to_string(TerminationReason r) {
  return r == TerminationReason::kBudget ? "budget" : "max-resolution";
}

struct Accepted {
  std::size_t child_index;
  double value;
  friend bool operator==(const Accepted&, const Accepted&) = default;
};
struct ResolutionIncreased {
  unsigned new_bits;
  friend bool operator==(const ResolutionIncreased&, const ResolutionIncreased&) = default;
};
struct Terminated {
  TerminationReason reason;
  friend bool operator==(const Terminated&, const Terminated&) = default;
};

using StepOutcome = std::variant<Accepted, ResolutionIncreased, Terminated>;

/// One trace row. Row 0 describes the initial parent; every later row is one
/// generate/evaluate/select iteration. best_value is the best seen so far and
/// wall_ns is measured from the start of the run.
struct TraceRecord {
  std::uint64_t iteration;
  unsigned bits_per_var;
  double best_value;
  bool accepted;
  std::uint64_t evals_total;
  std::int64_t wall_ns;
};

struct RunResult {
  std::vector<double> best_point;
  double best_value;
  std::vector<TraceRecord> trace;
  std::vector<StepOutcome> outcomes;
  std::uint64_t evals = 0;
  std::uint64_t iterations = 0;
  unsigned final_bits = 0;
  TerminationReason reason = TerminationReason::kMaxResolution;
  std::int64_t wall_ns = 0;
};

/// Selects the minimum child (smallest index on ties) and decides the outcome.
/// Ties with the parent are not improvements.
inline StepOutcome dgo_step(const SearchState& state, std::span<const ChildValue> child_values,
                            unsigned bits_max) {
  const std::size_t expected = 2 * state.parent.size() - 1;
  if (child_values.size() != expected)
    throw std::invalid_argument("dgo_step: expected " + std::to_string(expected) +
                                " child values, got " + std::to_string(child_values.size()));
  for (const auto& cv : child_values)
    if (cv.index >= expected) throw std::invalid_argument("dgo_step: child index out of range");
  const ChildValue best = reduce_min(child_values);
  if (best.value < state.parent_value) return Accepted{best.index, best.value};
  if (state.quantizer.bits_per_var() < bits_max)
    return ResolutionIncreased{state.quantizer.bits_per_var() + 1};
  return Terminated{TerminationReason::kMaxResolution};
}

/// Adds one bit per variable, re-expresses the parent on the finer grid and
/// re-evaluates it (one extra evaluation).
inline SearchState increase_resolution(const SearchState& state, const Objective& objective,
                                       unsigned bits_max) {
  const unsigned bits = state.quantizer.bits_per_var();
  if (bits >= bits_max)
    throw std::logic_error("increase_resolution: already at maximum resolution " +
                           std::to_string(bits_max));
  Quantizer finer = state.quantizer.with_bits(bits + 1);
  BitString parent = requantize(state.parent, state.quantizer, finer);
  const double value = sanitize_value(objective(decode_point(parent, finer)));
  return SearchState{std::move(parent), value, std::move(finer), state.iteration,
                     state.evals + 1};
}

/// Uniform point in the box from a seeded 64-bit Mersenne Twister. Uses the top
/// 53 bits directly so the sequence is identical across standard libraries.
inline std::vector<double> random_point(std::span<const Bounds> bounds, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<double> x(bounds.size());
  for (std::size_t j = 0; j < bounds.size(); ++j) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    x[j] = bounds[j].lo + u * (bounds[j].hi - bounds[j].lo);
  }
  return x;
}

/// Encoded starting parent for `config` (initial point if given, else random).
inline BitString initial_parent(const RunConfig& config, const Quantizer& q) {
  const auto x = config.initial_point ? *config.initial_point : random_point(q.bounds(), config.seed);
  return encode_point(x, q);
}

inline RunResult run(const RunConfig& config, const Objective& objective,
                     const EvalBackend& backend) {
  config.validate(objective.dims());
  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();
  const auto elapsed = [&] {
    return std::chrono::duration_cast<std::chrono::nanoseconds>(clock::now() - t0).count();
  };

  Quantizer q(objective.bounds(), config.bits_init);
  BitString parent = initial_parent(config, q);
  const double v0 = sanitize_value(objective(decode_point(parent, q)));
  SearchState state{std::move(parent), v0, std::move(q), 0, 1};

  RunResult result;
  result.best_value = state.parent_value;
  result.best_point = decode_point(state.parent, state.quantizer);
  result.trace.push_back({0, state.quantizer.bits_per_var(), result.best_value, false, 1, elapsed()});

  const auto note_parent = [&](const SearchState& s) {
    if (s.parent_value < result.best_value) {
      result.best_value = s.parent_value;
      result.best_point = decode_point(s.parent, s.quantizer);
    }
  };

  for (;;) {
    const std::uint64_t batch = 2 * state.parent.size() - 1;
    if (state.evals + batch > config.max_evals) {
      result.reason = TerminationReason::kBudget;
      result.outcomes.emplace_back(Terminated{TerminationReason::kBudget});
      break;
    }
    const ChildSet children =
        generate_children(state.parent, state.quantizer.bits_per_var(), config.neighborhood);
    const auto values = evaluate_batch(children, objective, state.quantizer, backend);
    state.evals += batch;
    ++state.iteration;
    const unsigned bits_now = state.quantizer.bits_per_var();

    StepOutcome outcome = dgo_step(state, values, config.bits_max);
    bool stop = false;
    bool accepted = false;
    if (const auto* acc = std::get_if<Accepted>(&outcome)) {
      state.parent = children[acc->child_index];
      state.parent_value = acc->value;
      accepted = true;
      note_parent(state);
    } else if (std::holds_alternative<ResolutionIncreased>(outcome)) {
      if (state.evals + 1 > config.max_evals) {
        outcome = Terminated{TerminationReason::kBudget};
        stop = true;
      } else {
        state = increase_resolution(state, objective, config.bits_max);
        note_parent(state);
      }
    } else {
      stop = true;
    }
    result.outcomes.push_back(outcome);
    result.trace.push_back(
        {state.iteration, bits_now, result.best_value, accepted, state.evals, elapsed()});
    if (stop) {
      result.reason = std::get<Terminated>(outcome).reason;
      break;
    }
  }

  result.evals = state.evals;
  result.iterations = state.iteration;
  result.final_bits = state.quantizer.bits_per_var();
  result.wall_ns = elapsed();
  return result;
}

}  // namespace dgo
