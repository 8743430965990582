#pragma once

// CSV and JSON serialization of traces and benchmark reports.
//
//   trace     iteration,bits_per_var,best_value,accepted,evals_total,wall_ns
//   gd trace  step,evals_total,sse
//   scaling   dims,bits_per_var,evals_per_iteration,iterations,ns_per_iteration
//             followed by a "# loglog_slope,<value>" line
//   speedup   backend,workers,wall_ms,speedup
//
// Reals are written with 17 significant digits so files round-trip exactly.
// With wall time suppressed the wall_ns column is written as 0.

#include <cstdio>
#include <ostream>
#include <string>

#include "json.hpp"

#include "dgo/bench.hpp"
#include "dgo/engine.hpp"
#include "dgo/objectives.hpp"

namespace dgo {

inline constexpr int kReportSchemaVersion = 1;
inline constexpr const char* kTraceHeader =
    "iteration,bits_per_var,best_value,accepted,evals_total,wall_ns";
inline constexpr const char* kGdTraceHeader = "step,evals_total,sse";
inline constexpr const char* kScalingHeader =
    "dims,bits_per_var,evals_per_iteration,iterations,ns_per_iteration";
inline constexpr const char* kSpeedupHeader = "backend,workers,wall_ms,speedup";

inline std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_trace_csv(std::ostream& out, const std::vector<TraceRecord>& trace,
                            bool include_walltime = true) {
  out << kTraceHeader << '\n';
  for (const auto& r : trace)
    out << r.iteration << ',' << r.bits_per_var << ',' << format_real(r.best_value) << ','
        << (r.accepted ? 1 : 0) << ',' << r.evals_total << ',' << (include_walltime ? r.wall_ns : 0)
        << '\n';
}

inline nlohmann::json trace_json(const std::vector<TraceRecord>& trace,
                                 bool include_walltime = true) {
  auto rows = nlohmann::json::array();
  for (const auto& r : trace) {
    nlohmann::json row{{"iteration", r.iteration},
                       {"bits_per_var", r.bits_per_var},
                       {"best_value", r.best_value},
                       {"accepted", r.accepted},
                       {"evals_total", r.evals_total}};
    row["wall_ns"] = include_walltime ? r.wall_ns : 0;
    rows.push_back(std::move(row));
  }
  return rows;
}

inline nlohmann::json run_summary_json(const RunResult& r, bool include_walltime = true) {
  return {{"schema_version", kReportSchemaVersion},
          {"best_value", r.best_value},
          {"best_point", r.best_point},
          {"evals", r.evals},
          {"iterations", r.iterations},
          {"final_bits", r.final_bits},
          {"termination", to_string(r.reason)},
          {"wall_ns", include_walltime ? r.wall_ns : 0},
          {"trace", trace_json(r.trace, include_walltime)}};
}

inline void write_gd_trace_csv(std::ostream& out, const GdTrace& trace) {
  out << kGdTraceHeader << '\n';
  for (const auto& s : trace.steps) out << s.step << ',' << s.step << ',' << format_real(s.sse) << '\n';
}

inline nlohmann::json gd_trace_json(const GdTrace& trace) {
  auto rows = nlohmann::json::array();
  for (const auto& s : trace.steps) rows.push_back({{"step", s.step}, {"sse", s.sse}});
  return {{"schema_version", kReportSchemaVersion},
          {"diverged", trace.diverged},
          {"final_weights", trace.final_weights},
          {"trace", rows}};
}

inline nlohmann::json metadata_json(const BenchMetadata& m) {
  return {{"hardware", m.hardware}, {"repetitions", m.repetitions}, {"timestamp", m.timestamp}};
}

inline void write_scaling_csv(std::ostream& out, const ScalingReport& rep) {
  out << kScalingHeader << '\n';
  for (const auto& r : rep.rows)
    out << r.dims << ',' << r.bits_per_var << ',' << r.evals_per_iteration << ',' << r.iterations
        << ',' << format_real(r.ns_per_iteration) << '\n';
  out << "# loglog_slope," << format_real(rep.slope) << '\n';
}

inline nlohmann::json scaling_json(const ScalingReport& rep) {
  auto rows = nlohmann::json::array();
  for (const auto& r : rep.rows)
    rows.push_back({{"dims", r.dims},
                    {"bits_per_var", r.bits_per_var},
                    {"evals_per_iteration", r.evals_per_iteration},
                    {"iterations", r.iterations},
                    {"ns_per_iteration", r.ns_per_iteration}});
  return {{"schema_version", kReportSchemaVersion},
          {"metadata", metadata_json(rep.meta)},
          {"rows", rows},
          {"loglog_slope", rep.slope}};
}

inline void write_speedup_csv(std::ostream& out, const SpeedupReport& rep) {
  out << kSpeedupHeader << '\n';
  for (const auto& r : rep.rows)
    out << r.backend << ',' << r.workers << ',' << format_real(r.wall_ms) << ','
        << format_real(r.speedup) << '\n';
}

inline nlohmann::json speedup_json(const SpeedupReport& rep) {
  auto rows = nlohmann::json::array();
  for (const auto& r : rep.rows)
    rows.push_back({{"backend", r.backend},
                    {"workers", r.workers},
                    {"wall_ms", r.wall_ms},
                    {"speedup", r.speedup}});
  return {{"schema_version", kReportSchemaVersion},
          {"metadata", metadata_json(rep.meta)},
          {"children_per_batch", rep.children_per_batch},
          {"evals_per_run", rep.evals_per_run},
          {"rows", rows}};
}

}  // namespace dgo
