// dgo: run optimizations and reproduce the trace / scaling / speedup reports.
//
//   dgo optimize --objective shekel --bits-max 12 --clusters 4 --trace t.csv
//   dgo bench scaling --dims-list 2,4,6,8,10,12 --bits 8 --out scaling.csv
//   dgo bench speedup --workers 1,2,4,8 --spin-ns 1000000 --out speedup.csv
//   dgo train xor --optimizer both --dgo-trace dgo.csv --gd-trace gd.csv

#include <iostream>

#include "CLI11.hpp"

#include "dgo/commands.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

void add_common_output(CLI::App* cmd, std::string& format, bool& no_walltime) {
  cmd->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_flag("--no-walltime", no_walltime, "Write 0 in wall-time columns for exact diffing");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributed global optimization: optimizer and benchmark harness"};
  app.require_subcommand(1);

  // optimize
  dgo::OptimizeArgs opt;
  std::size_t opt_dims = 0;
  auto* optimize = app.add_subcommand("optimize", "Run one optimization and write its trace");
  optimize->add_option("--objective", opt.objective.name, "quadratic|shekel|multimodal1d|xor|constant")
      ->required();
  optimize->add_option("--dims", opt_dims, "Number of variables");
  optimize->add_option("--lo", opt.objective.lo, "Lower bound (one value or one per dimension)");
  optimize->add_option("--hi", opt.objective.hi, "Upper bound (one value or one per dimension)");
  optimize->add_option("--center", opt.objective.center, "Quadratic minimizer");
  optimize->add_option("--x0", opt.x0, "Initial point (default: random from --seed)");
  optimize->add_option("--bits-init", opt.bits_init, "Initial bits per variable");
  optimize->add_option("--bits-max", opt.bits_max, "Maximum bits per variable");
  optimize->add_option("--seed", opt.seed, "Seed for the random initial point");
  optimize->add_option("--backend", opt.backend, "seq | pool | pool:W");
  optimize->add_option("--clusters", opt.clusters, "Independent multi-start clusters");
  optimize->add_option("--max-evals", opt.max_evals, "Evaluation budget");
  optimize->add_option("--trace", opt.trace_path, "Trace output path");
  optimize->add_option("--spin-ns", opt.objective.spin_ns, "Busy-work per evaluation (ns)");
  optimize->add_option("--masks", opt.masks, "Segment family")->check(CLI::IsMember({"tree", "suffix"}));
  optimize->add_option("--gray", opt.gray, "Gray transform scope")->check(CLI::IsMember({"var", "string"}));
  add_common_output(optimize, opt.format, opt.no_walltime);

  // bench
  auto* bench = app.add_subcommand("bench", "Benchmarks");
  bench->require_subcommand(1);

  dgo::ScalingArgs scaling;
  auto* bench_scaling = bench->add_subcommand("scaling", "Sequential time per iteration vs dimension");
  bench_scaling->add_option("--dims-list", scaling.options.dims, "Dimensions to measure")->delimiter(',');
  bench_scaling->add_option("--bits", scaling.options.bits, "Bits per variable");
  bench_scaling->add_option("--reps", scaling.options.repetitions, "Repetitions (median reported)");
  bench_scaling->add_option("--seed", scaling.options.seed, "Seed for the starting points");
  bench_scaling->add_option("--out", scaling.out_path, "Report output path");
  bench_scaling->add_option("--format", scaling.format, "Output format")->check(CLI::IsMember({"csv", "json"}));

  dgo::SpeedupArgs speedup;
  auto* bench_speedup = bench->add_subcommand("speedup", "Wall time and speedup vs worker count");
  bench_speedup->add_option("--workers", speedup.options.workers, "Worker counts (must include 1)")
      ->delimiter(',');
  bench_speedup->add_option("--spin-ns", speedup.options.spin_ns, "Busy-work per evaluation (ns)");
  bench_speedup->add_option("--dims", speedup.options.dims, "Quadratic dimensions");
  bench_speedup->add_option("--bits", speedup.options.bits, "Bits per variable");
  bench_speedup->add_option("--iterations", speedup.options.iterations, "Batches per run");
  bench_speedup->add_option("--reps", speedup.options.repetitions, "Repetitions (median reported)");
  bench_speedup->add_option("--out", speedup.out_path, "Report output path");
  bench_speedup->add_option("--format", speedup.format, "Output format")->check(CLI::IsMember({"csv", "json"}));

  // train
  auto* train = app.add_subcommand("train", "Neural network training comparisons");
  train->require_subcommand(1);
  dgo::TrainXorArgs xor_args;
  auto* train_xor = train->add_subcommand("xor", "Train the 8-weight XOR network with DGO and/or gradient descent");
  train_xor->add_option("--optimizer", xor_args.optimizer, "dgo | gd | both")
      ->check(CLI::IsMember({"dgo", "gd", "both"}));
  train_xor->add_option("--bits-init", xor_args.bits_init, "Initial bits per weight");
  train_xor->add_option("--bits-max", xor_args.bits_max, "Maximum bits per weight");
  train_xor->add_option("--max-evals", xor_args.max_evals, "DGO evaluation budget");
  train_xor->add_option("--lr", xor_args.lr, "Gradient-descent step size");
  train_xor->add_option("--steps", xor_args.steps, "Gradient-descent steps");
  train_xor->add_option("--seed", xor_args.seed, "Seed for the shared initial weights");
  train_xor->add_option("--backend", xor_args.backend, "seq | pool | pool:W");
  train_xor->add_option("--dgo-trace", xor_args.dgo_trace, "DGO trace output path");
  train_xor->add_option("--gd-trace", xor_args.gd_trace, "Gradient-descent trace output path");
  add_common_output(train_xor, xor_args.format, xor_args.no_walltime);

  CLI11_PARSE(app, argc, argv);

  try {
    if (optimize->parsed()) {
      if (optimize->count("--dims")) opt.objective.dims = opt_dims;
      dgo::cmd_optimize(opt, std::cout);
    } else if (bench_scaling->parsed()) {
      dgo::cmd_bench_scaling(scaling, std::cout);
    } else if (bench_speedup->parsed()) {
      dgo::cmd_bench_speedup(speedup, std::cout);
    } else if (train_xor->parsed()) {
      dgo::cmd_train_xor(xor_args, std::cout);
    }
  } catch (const dgo::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  }
  return 0;
}
