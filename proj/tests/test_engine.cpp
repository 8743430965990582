#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "dgo/engine.hpp"
#include "dgo/objectives.hpp"
#include "dgo/report.hpp"

namespace dgo {
namespace {

SearchState state_at(BitString parent, double value, std::vector<Bounds> b, unsigned bits) {
  return SearchState{std::move(parent), value, Quantizer(std::move(b), bits), 0, 1};
}

std::vector<ChildValue> values_of(std::vector<double> v) {
  std::vector<ChildValue> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back({i, v[i]});
  return out;
}

std::string trace_text(const RunResult& r) {
  std::ostringstream os;
  write_trace_csv(os, r.trace, false);
  return os.str();
}

TEST(DgoStep, AcceptsStrictImprovement) {
  // L = 4: seven children.
  const auto s = state_at(BitString(4), 5.0, {{0, 1}}, 4);
  const auto out = dgo_step(s, values_of({6, 7, 3, 3, 9, 8, 5}), 8);
  EXPECT_EQ(out, StepOutcome(Accepted{2, 3.0}));
}

TEST(DgoStep, TieWithParentIsNotImprovement) {
  const auto s = state_at(BitString(4), 3.0, {{0, 1}}, 4);
  EXPECT_EQ(dgo_step(s, values_of({6, 7, 3, 3, 9, 8, 5}), 8),
            StepOutcome(ResolutionIncreased{5}));
  EXPECT_EQ(dgo_step(s, values_of({6, 7, 3, 3, 9, 8, 5}), 4),
            StepOutcome(Terminated{TerminationReason::kMaxResolution}));
}

TEST(DgoStep, WrongCardinalityOrIndexThrows) {
  const auto s = state_at(BitString(4), 3.0, {{0, 1}}, 4);
  EXPECT_THROW(dgo_step(s, values_of({1, 2, 3}), 8), std::invalid_argument);
  auto v = values_of({1, 2, 3, 4, 5, 6, 7});
  v[3].index = 7;
  EXPECT_THROW(dgo_step(s, v, 8), std::invalid_argument);
}

TEST(IncreaseResolution, AppendsZeroBitAndReevaluates) {
  const Objective f = make_quadratic(2, -1, 1);
  const Quantizer q(f.bounds(), 3);
  const auto s = SearchState{BitString::from_string("101011"), 0.0, q, 5, 40};
  const auto t = increase_resolution(s, f, 8);
  EXPECT_EQ(t.quantizer.bits_per_var(), 4u);
  EXPECT_EQ(t.parent.size(), 8u);
  EXPECT_EQ(t.evals, 41u);
  EXPECT_EQ(t.iteration, 5u);
  EXPECT_EQ(t.parent_value, f(decode_point(t.parent, t.quantizer)));
  // each coordinate moves by at most half a coarse step
  const auto x0 = decode_point(s.parent, q), x1 = decode_point(t.parent, t.quantizer);
  for (std::size_t j = 0; j < 2; ++j) EXPECT_LE(std::abs(x0[j] - x1[j]), q.grid_step(j) / 2 + 1e-12);
  EXPECT_THROW(increase_resolution(t, f, 4), std::logic_error);
}

TEST(Run, SquareOnUnitIntervalReachesGridMinimum) {
  // 4 bits on [-1, 1]: 16 grid points, the two nearest zero are +-1/15.
  const Objective f("sq", {{-1, 1}}, [](std::span<const double> x) { return x[0] * x[0]; });
  RunConfig cfg;
  cfg.bits_init = cfg.bits_max = 4;
  const Quantizer q(f.bounds(), 4);
  double grid_min = std::numeric_limits<double>::infinity();
  for (std::uint64_t k = 0; k <= q.max_index(); ++k) grid_min = std::min(grid_min, std::pow(q.value_of(0, k), 2));
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    cfg.seed = seed;
    const auto r = run(cfg, f, EvalBackend::sequential());
    EXPECT_EQ(r.best_value, grid_min) << "seed " << seed;
    EXPECT_EQ(r.reason, TerminationReason::kMaxResolution);
  }
}

TEST(Run, ConstantObjectiveRefinesToMaxAndStops) {
  const Objective f = make_constant(3, 1.0);
  RunConfig cfg;
  cfg.bits_init = 2;
  cfg.bits_max = 7;
  const auto r = run(cfg, f, EvalBackend::sequential());
  EXPECT_EQ(r.iterations, cfg.bits_max - cfg.bits_init + 1);
  EXPECT_EQ(r.final_bits, cfg.bits_max);
  EXPECT_EQ(r.reason, TerminationReason::kMaxResolution);
  std::uint64_t expected = 1;
  for (unsigned b = cfg.bits_init; b <= cfg.bits_max; ++b) {
    expected += 2 * 3 * b - 1;
    if (b < cfg.bits_max) expected += 1;
  }
  EXPECT_EQ(r.evals, expected);
  for (std::size_t i = 0; i + 1 < r.outcomes.size(); ++i)
    EXPECT_EQ(r.outcomes[i], StepOutcome(ResolutionIncreased{static_cast<unsigned>(cfg.bits_init + i + 1)}));
  EXPECT_EQ(r.outcomes.back(), StepOutcome(Terminated{TerminationReason::kMaxResolution}));
}

TEST(Run, MultimodalFromThreeReachesGlobalMinimum) {
  const Objective f = make_multimodal1d();
  RunConfig cfg;
  cfg.bits_init = 4;
  cfg.bits_max = 12;
  cfg.initial_point = std::vector<double>{3.0};
  const auto r = run(cfg, f, EvalBackend::sequential());
  // dense-grid reference for the global minimizer
  double best_x = 0, best_f = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 1'000'000; ++i) {
    const double x = -5.0 + 10.0 * i / 1e6;
    const double v = 1 - std::cos(3 * M_PI * x) + 0.1 * x * x;
    if (v < best_f) best_f = v, best_x = x;
  }
  EXPECT_NEAR(best_x, 0.0, 1e-12);
  EXPECT_LE(std::abs(r.best_point[0] - best_x), 10.0 / 4095);
}

class RunProperties : public ::testing::TestWithParam<int> {};

Objective suite_objective(int which) {
  switch (which) {
    case 0: return make_quadratic(3);
    case 1: return make_shekel();
    case 2: return make_multimodal1d();
    default: return make_xor();
  }
}

TEST_P(RunProperties, TraceMonotoneAndAccounted) {
  const Objective f = suite_objective(GetParam());
  RunConfig cfg;
  cfg.bits_max = 9;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    cfg.seed = seed;
    const auto r = run(cfg, f, EvalBackend::sequential());
    ASSERT_EQ(r.trace.size(), r.iterations + 1);
    EXPECT_EQ(r.trace.front().evals_total, 1u);
    EXPECT_EQ(r.trace.back().evals_total, r.evals);
    for (std::size_t i = 1; i < r.trace.size(); ++i) {
      ASSERT_LE(r.trace[i].best_value, r.trace[i - 1].best_value);
      ASSERT_GT(r.trace[i].evals_total, r.trace[i - 1].evals_total);
    }
    std::uint64_t evals = 1;
    for (const auto& rec : r.trace) {
      if (rec.iteration == 0) continue;
      evals += 2 * f.dims() * rec.bits_per_var - 1;
      if (!rec.accepted && rec.iteration != r.iterations) evals += 1;
      ASSERT_EQ(rec.evals_total, evals);
    }
    EXPECT_EQ(r.best_value, f(r.best_point));
  }
}

TEST_P(RunProperties, DeterministicAndBackendIndependent) {
  const Objective f = suite_objective(GetParam());
  RunConfig cfg;
  cfg.bits_max = 9;
  cfg.seed = 11;
  const auto a = run(cfg, f, EvalBackend::sequential());
  const auto b = run(cfg, f, EvalBackend::sequential());
  const auto c = run(cfg, f, EvalBackend::worker_pool(3));
  EXPECT_EQ(trace_text(a), trace_text(b));
  EXPECT_EQ(trace_text(a), trace_text(c));
  EXPECT_EQ(a.best_point, c.best_point);
  EXPECT_EQ(a.outcomes, c.outcomes);
}

TEST_P(RunProperties, BudgetIsNeverExceeded) {
  const Objective f = suite_objective(GetParam());
  RunConfig cfg;
  cfg.bits_max = 16;
  for (std::uint64_t budget : {1, 2, 10, 100, 777, 5000}) {
    cfg.max_evals = budget;
    const auto r = run(cfg, f, EvalBackend::sequential());
    ASSERT_LE(r.evals, budget);
    if (r.reason == TerminationReason::kBudget) {
      const auto& last = r.trace.back();
      // the next batch would not have fit
      ASSERT_GT(r.evals + 2 * f.dims() * last.bits_per_var, budget);
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Suite, RunProperties, ::testing::Values(0, 1, 2, 3));

TEST(Run, NaNValuesAreNeverSelected) {
  const Objective f("holes", {{-4, 4}, {-4, 4}}, [](std::span<const double> x) {
    if (x[0] < 0) return std::numeric_limits<double>::quiet_NaN();
    return x[0] * x[0] + x[1] * x[1];
  });
  RunConfig cfg;
  cfg.bits_max = 10;
  cfg.initial_point = std::vector<double>{3, 3};
  const auto r = run(cfg, f, EvalBackend::sequential());
  EXPECT_TRUE(std::isfinite(r.best_value));
  EXPECT_GE(r.best_point[0], 0.0);
  EXPECT_LT(r.best_value, 0.01);
}

TEST(Run, ConfigErrors) {
  const Objective f = make_quadratic(2);
  RunConfig cfg;
  cfg.bits_init = 9;
  cfg.bits_max = 8;
  EXPECT_THROW(run(cfg, f, EvalBackend::sequential()), std::invalid_argument);
  cfg = {};
  cfg.bits_init = 0;
  EXPECT_THROW(run(cfg, f, EvalBackend::sequential()), std::invalid_argument);
  cfg = {};
  cfg.bits_max = 53;
  EXPECT_THROW(run(cfg, f, EvalBackend::sequential()), std::invalid_argument);
  cfg = {};
  cfg.max_evals = 0;
  EXPECT_THROW(run(cfg, f, EvalBackend::sequential()), std::invalid_argument);
  cfg = {};
  cfg.initial_point = std::vector<double>{1.0};
  EXPECT_THROW(run(cfg, f, EvalBackend::sequential()), std::invalid_argument);
}

TEST(RandomPoint, InsideBoxAndSeeded) {
  const std::vector<Bounds> b{{-2, 3}, {10, 11}};
  EXPECT_EQ(random_point(b, 5), random_point(b, 5));
  EXPECT_NE(random_point(b, 5), random_point(b, 6));
  for (std::uint64_t s = 0; s < 1000; ++s) {
    const auto x = random_point(b, s);
    ASSERT_GE(x[0], -2);
    ASSERT_LT(x[0], 3);
    ASSERT_GE(x[1], 10);
    ASSERT_LT(x[1], 11);
  }
}

}  // namespace
}  // namespace dgo
