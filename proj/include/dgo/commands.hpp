#pragma once

// Command implementations behind the `dgo` executable. Each command takes a
// plain argument struct, writes its files, prints a human summary to `log`
// and returns the in-memory results. Configuration problems throw
// ConfigError, unwritable outputs throw IoError.

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dgo/bench.hpp"
#include "dgo/engine.hpp"
#include "dgo/multistart.hpp"
#include "dgo/objectives.hpp"
#include "dgo/report.hpp"

namespace dgo {

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Objective registry
// ---------------------------------------------------------------------------

struct ObjectiveSpec {
  std::string name;
  std::optional<std::size_t> dims{};
  std::vector<double> lo{};  // empty: default, one value: all dims, else per dim
  std::vector<double> hi{};
  std::vector<double> center{};  // quadratic only
  std::int64_t spin_ns = 0;
};

namespace detail {

inline std::vector<double> expand(const std::vector<double>& v, std::size_t dims, double fallback,
                                  const char* what) {
  if (v.empty()) return std::vector<double>(dims, fallback);
  if (v.size() == 1) return std::vector<double>(dims, v.front());
  if (v.size() != dims)
    throw ConfigError(std::string(what) + ": got " + std::to_string(v.size()) +
                      " values for " + std::to_string(dims) + " dimensions");
  return v;
}

inline std::size_t fixed_dims(const ObjectiveSpec& s, std::size_t required) {
  if (s.dims && *s.dims != required)
    throw ConfigError("objective '" + s.name + "' has exactly " + std::to_string(required) +
                      " dimensions, --dims " + std::to_string(*s.dims) + " given");
  return required;
}

}  // namespace detail

inline std::vector<std::string> objective_names() {
  return {"quadratic", "shekel", "multimodal1d", "xor", "constant"};
}

inline Objective make_objective(const ObjectiveSpec& s) {
  double lo_default = -5.0, hi_default = 5.0;
  std::size_t dims = 0;
  if (s.name == "quadratic" || s.name == "constant") {
    dims = s.dims.value_or(2);
    if (s.name == "constant") lo_default = -1.0, hi_default = 1.0;
  } else if (s.name == "shekel") {
    dims = detail::fixed_dims(s, 4);
    lo_default = 0.0, hi_default = 10.0;
  } else if (s.name == "multimodal1d") {
    dims = detail::fixed_dims(s, 1);
  } else if (s.name == "xor") {
    dims = detail::fixed_dims(s, kXorWeights);
    lo_default = -kXorWeightBox, hi_default = kXorWeightBox;
  } else {
    throw ConfigError("unknown objective '" + s.name + "'");
  }
  if (dims == 0) throw ConfigError("--dims must be positive");
  if (!s.center.empty() && s.name != "quadratic")
    throw ConfigError("--center only applies to the quadratic objective");
  const auto lo = detail::expand(s.lo, dims, lo_default, "--lo");
  const auto hi = detail::expand(s.hi, dims, hi_default, "--hi");
  std::vector<Bounds> bounds;
  for (std::size_t j = 0; j < dims; ++j) {
    if (!(std::isfinite(lo[j]) && std::isfinite(hi[j]) && lo[j] < hi[j]))
      throw ConfigError("bounds for dimension " + std::to_string(j) + " need finite lo < hi");
    bounds.push_back({lo[j], hi[j]});
  }

  std::optional<Objective> base;
  if (s.name == "quadratic") {
    base = make_quadratic(bounds, detail::expand(s.center, dims, 0.0, "--center"));
  } else if (s.name == "constant") {
    base = Objective("constant", bounds, [](std::span<const double>) { return 1.0; });
  } else if (s.name == "shekel") {
    base = Objective("shekel", bounds, [p = ShekelParams::default_4d()](std::span<const double> x) {
      return shekel(x, p);
    });
  } else if (s.name == "multimodal1d") {
    base = Objective("multimodal1d", bounds,
                     [](std::span<const double> x) { return multimodal1d(x[0]); });
  } else {
    base = Objective("xor", bounds, [](std::span<const double> w) { return xor_sse(w); });
  }
  if (s.spin_ns < 0) throw ConfigError("--spin-ns must be non-negative");
  return with_spin(*base, s.spin_ns);
}

inline Neighborhood parse_neighborhood(const std::string& masks, const std::string& gray) {
  Neighborhood nb;
  if (masks == "tree") nb.family = MaskFamily::kSegmentTree;
  else if (masks == "suffix") nb.family = MaskFamily::kSingleAndSuffix;
  else throw ConfigError("--masks must be tree or suffix");
  if (gray == "var") nb.gray = GrayScope::kPerVariable;
  else if (gray == "string") nb.gray = GrayScope::kWholeString;
  else throw ConfigError("--gray must be var or string");
  return nb;
}

inline EvalBackend make_backend(const std::string& spec) {
  try {
    return parse_backend(spec, env_workers());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

inline void check_format(const std::string& format) {
  if (format != "csv" && format != "json") throw ConfigError("--format must be csv or json");
}

template <typename Writer>
void write_file(const std::string& path, Writer&& writer) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  writer(out);
  out.flush();
  if (!out) throw IoError("failed writing '" + path + "'");
}

inline std::string format_point(std::span<const double> x) {
  std::string s = "(";
  for (std::size_t i = 0; i < x.size(); ++i) s += (i ? ", " : "") + format_real(x[i]);
  return s + ")";
}

// ---------------------------------------------------------------------------
// optimize
// ---------------------------------------------------------------------------

struct OptimizeArgs {
  ObjectiveSpec objective{"quadratic"};
  std::vector<double> x0;
  unsigned bits_init = 4;
  unsigned bits_max = 16;
  std::uint64_t seed = 0;
  std::string backend = "seq";
  std::size_t clusters = 1;
  std::uint64_t max_evals = 1'000'000;
  std::string trace_path;
  std::string format = "csv";
  bool no_walltime = false;
  std::string masks = "tree";
  std::string gray = "var";
};

inline MultiStartResult cmd_optimize(const OptimizeArgs& a, std::ostream& log) {
  check_format(a.format);
  const Objective f = make_objective(a.objective);
  RunConfig cfg;
  cfg.bits_init = a.bits_init;
  cfg.bits_max = a.bits_max;
  cfg.seed = a.seed;
  cfg.max_evals = a.max_evals;
  cfg.neighborhood = parse_neighborhood(a.masks, a.gray);
  if (!a.x0.empty()) cfg.initial_point = detail::expand(a.x0, f.dims(), 0.0, "--x0");
  if (a.clusters < 1) throw ConfigError("--clusters must be >= 1");
  try {
    cfg.validate(f.dims());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  const EvalBackend backend = make_backend(a.backend);

  MultiStartResult res = run_multistart(cfg, f, a.clusters, backend);
  const RunResult& r = res.best;
  if (!a.trace_path.empty()) {
    write_file(a.trace_path, [&](std::ostream& out) {
      if (a.format == "csv") write_trace_csv(out, r.trace, !a.no_walltime);
      else out << run_summary_json(r, !a.no_walltime).dump(2) << '\n';
    });
  }
  log << "objective   " << f.name() << " (" << f.dims() << " dims), backend "
      << backend.describe() << ", clusters " << a.clusters << '\n'
      << "best value  " << format_real(r.best_value) << '\n'
      << "best point  " << format_point(r.best_point) << '\n'
      << "evaluations " << r.evals << " in " << r.iterations << " iterations, final bits "
      << r.final_bits << ", stopped on " << to_string(r.reason) << '\n';
  if (a.clusters > 1) log << "best cluster " << res.best_cluster << '\n';
  return res;
}

// ---------------------------------------------------------------------------
// bench scaling / bench speedup
// ---------------------------------------------------------------------------

struct ScalingArgs {
  ScalingOptions options;
  std::string out_path;
  std::string format = "csv";
};

inline ScalingReport cmd_bench_scaling(const ScalingArgs& a, std::ostream& log) {
  check_format(a.format);
  ScalingReport rep;
  try {
    rep = bench_scaling(a.options);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (!a.out_path.empty()) {
    write_file(a.out_path, [&](std::ostream& out) {
      if (a.format == "csv") write_scaling_csv(out, rep);
      else out << scaling_json(rep).dump(2) << '\n';
    });
  }
  log << "dims  evals/iter  iterations  ns/iter\n";
  for (const auto& r : rep.rows)
    log << std::setw(4) << r.dims << std::setw(12) << r.evals_per_iteration << std::setw(12)
        << r.iterations << "  " << std::fixed << std::setprecision(0) << r.ns_per_iteration
        << std::defaultfloat << '\n';
  log << "log-log slope of time per iteration vs dims: " << std::setprecision(3) << rep.slope
      << std::setprecision(6) << '\n';
  return rep;
}

struct SpeedupArgs {
  SpeedupOptions options;
  std::string out_path;
  std::string format = "csv";
};

inline SpeedupReport cmd_bench_speedup(const SpeedupArgs& a, std::ostream& log) {
  check_format(a.format);
  if (a.options.spin_ns < 0) throw ConfigError("--spin-ns must be non-negative");
  SpeedupReport rep;
  try {
    rep = bench_speedup(a.options);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (!a.out_path.empty()) {
    write_file(a.out_path, [&](std::ostream& out) {
      if (a.format == "csv") write_speedup_csv(out, rep);
      else out << speedup_json(rep).dump(2) << '\n';
    });
  }
  log << "Computer/PEs        Execution time (ms)   Speedup\n";
  for (const auto& r : rep.rows) {
    char line[96];
    std::snprintf(line, sizeof line, "%-18s  %19.1f   %7.2f\n",
                  (r.backend == "seq" ? std::string("seq/1") : r.backend).c_str(), r.wall_ms,
                  r.speedup);
    log << line;
  }
  log << rep.children_per_batch << " children per batch, " << rep.evals_per_run
      << " evaluations per run, " << rep.meta.hardware << '\n';
  return rep;
}

// ---------------------------------------------------------------------------
// train xor
// ---------------------------------------------------------------------------

struct TrainXorArgs {
  std::string optimizer = "both";  // dgo | gd | both
  unsigned bits_init = 4;
  unsigned bits_max = 12;
  std::uint64_t max_evals = 1'000'000;
  double lr = 0.5;
  std::size_t steps = 20'000;
  std::uint64_t seed = 0;
  std::string backend = "seq";
  std::string dgo_trace;
  std::string gd_trace;
  std::string format = "csv";
  bool no_walltime = false;
};

struct TrainXorResult {
  std::vector<double> initial_weights;
  double initial_sse = 0;
  std::optional<MultiStartResult> dgo;
  std::optional<GdTrace> gd;
};

/// Both optimizers start from the same weights: the seeded random point as
/// DGO sees it on its initial grid.
inline TrainXorResult cmd_train_xor(const TrainXorArgs& a, std::ostream& log) {
  check_format(a.format);
  const bool want_dgo = a.optimizer == "dgo" || a.optimizer == "both";
  const bool want_gd = a.optimizer == "gd" || a.optimizer == "both";
  if (!want_dgo && !want_gd) throw ConfigError("--optimizer must be dgo, gd or both");
  if (!(a.lr >= 0.0) || !std::isfinite(a.lr)) throw ConfigError("--lr must be >= 0");

  const Objective f = make_xor();
  RunConfig cfg;
  cfg.bits_init = a.bits_init;
  cfg.bits_max = a.bits_max;
  cfg.max_evals = a.max_evals;
  cfg.seed = a.seed;
  try {
    cfg.validate(f.dims());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  const Quantizer q0(f.bounds(), cfg.bits_init);
  TrainXorResult res;
  res.initial_weights = decode_point(initial_parent(cfg, q0), q0);
  res.initial_sse = xor_sse(res.initial_weights);
  log << "initial SSE " << format_real(res.initial_sse) << " at weights "
      << format_point(res.initial_weights) << '\n';

  if (want_dgo) {
    const EvalBackend backend = make_backend(a.backend);
    res.dgo = run_restarts(cfg, f, backend);
    const RunResult& r = res.dgo->best;
    if (!a.dgo_trace.empty()) {
      write_file(a.dgo_trace, [&](std::ostream& out) {
        if (a.format == "csv") write_trace_csv(out, r.trace, !a.no_walltime);
        else out << run_summary_json(r, !a.no_walltime).dump(2) << '\n';
      });
    }
    log << "dgo  final SSE " << format_real(r.best_value) << " after " << r.evals
        << " evaluations (" << res.dgo->clusters.size() << " restarts), classifies all patterns: "
        << (xor_classifies(r.best_point) ? "yes" : "no") << '\n';
  }
  if (want_gd) {
    res.gd = gd_train(res.initial_weights, a.lr, a.steps);
    if (!a.gd_trace.empty()) {
      write_file(a.gd_trace, [&](std::ostream& out) {
        if (a.format == "csv") write_gd_trace_csv(out, *res.gd);
        else out << gd_trace_json(*res.gd).dump(2) << '\n';
      });
    }
    log << "gd   final SSE " << format_real(res.gd->steps.back().sse) << " after "
        << res.gd->steps.back().step << " steps" << (res.gd->diverged ? " (diverged)" : "")
        << ", classifies all patterns: "
        << (xor_classifies(res.gd->final_weights) ? "yes" : "no") << '\n';
  }
  return res;
}

}  // namespace dgo
