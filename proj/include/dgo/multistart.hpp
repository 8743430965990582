#pragma once

// Independent clusters started from their own points. Cluster c runs with
// seed + c; only the final minima are compared.

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "dgo/engine.hpp"

namespace dgo {

struct ClusterSummary {
  std::size_t cluster;
  std::uint64_t seed;
  double best_value;
  std::vector<double> best_point;
  std::uint64_t evals;
  std::uint64_t iterations;
  TerminationReason reason;
};

struct MultiStartResult {
  RunResult best;
  std::size_t best_cluster = 0;
  std::vector<ClusterSummary> clusters;
};

/// A supplied initial point seeds cluster 0 only; the remaining clusters start
/// from random points drawn with their own seeds.
inline MultiStartResult run_multistart(const RunConfig& config, const Objective& objective,
                                       std::size_t clusters, const EvalBackend& backend) {
  if (clusters == 0) throw std::invalid_argument("run_multistart: clusters must be positive");
  MultiStartResult out;
  out.clusters.reserve(clusters);
  for (std::size_t c = 0; c < clusters; ++c) {
    RunConfig cfg = config;
    cfg.seed = config.seed + c;
    if (c > 0) cfg.initial_point.reset();
    RunResult r = run(cfg, objective, backend);
    out.clusters.push_back(
        {c, cfg.seed, r.best_value, r.best_point, r.evals, r.iterations, r.reason});
    if (c == 0 || r.best_value < out.best.best_value) {
      out.best = std::move(r);
      out.best_cluster = c;
    }
  }
  return out;
}

/// Budgeted restarts: clusters with seeds seed, seed + 1, ... run one after
/// another, each limited to the evaluations left over by its predecessors,
/// until the remaining budget cannot pay for one more iteration. The combined
/// trace concatenates the clusters with cumulative evaluation counts and a
/// running best value.
inline MultiStartResult run_restarts(const RunConfig& config, const Objective& objective,
                                     const EvalBackend& backend) {
  config.validate(objective.dims());
  const std::uint64_t min_cost = 1 + (2 * objective.dims() * config.bits_init - 1);
  MultiStartResult out;
  RunResult& combined = out.best;
  std::uint64_t used = 0;
  for (std::size_t c = 0; c == 0 || config.max_evals - used >= min_cost; ++c) {
    RunConfig cfg = config;
    cfg.seed = config.seed + c;
    cfg.max_evals = config.max_evals - used;
    if (c > 0) cfg.initial_point.reset();
    RunResult r = run(cfg, objective, backend);
    out.clusters.push_back(
        {c, cfg.seed, r.best_value, r.best_point, r.evals, r.iterations, r.reason});
    if (c == 0 || r.best_value < combined.best_value) {
      combined.best_value = r.best_value;
      combined.best_point = r.best_point;
      combined.final_bits = r.final_bits;
      out.best_cluster = c;
    }
    for (auto rec : r.trace) {
      rec.evals_total += used;
      rec.iteration += combined.iterations;
      rec.wall_ns += combined.wall_ns;
      if (!combined.trace.empty()) rec.best_value = std::min(rec.best_value, combined.trace.back().best_value);
      combined.trace.push_back(rec);
    }
    combined.outcomes.insert(combined.outcomes.end(), r.outcomes.begin(), r.outcomes.end());
    combined.iterations += r.iterations;
    combined.wall_ns += r.wall_ns;
    combined.reason = r.reason;
    used += r.evals;
    if (used >= config.max_evals) break;
  }
  combined.evals = used;
  return out;
}

}  // namespace dgo
