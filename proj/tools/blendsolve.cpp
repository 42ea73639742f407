#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "blendsolve/cli/commands.hpp"
#include "blendsolve/cli/config.hpp"

namespace fs = std::filesystem;
using namespace blendsolve;

int main(int argc, char** argv) {
  CLI::App app{"blendsolve: blended Eulerian/Lagrangian transport solvers"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::size_t threads = 1;
  std::string bench_id;

  auto add_common = [&](CLI::App* sub, bool needs_config) {
    if (needs_config) sub->add_option("--config", config_path, "INI configuration file")->required();
    sub->add_option("--out", out_dir, "output directory (default: $BLENDSOLVE_OUT or config)");
    sub->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
  };
  CLI::App* run = app.add_subcommand("run", "run one blended simulation");
  add_common(run, true);
  CLI::App* sweep = app.add_subcommand("sweep", "L1 errors over a (lambda, mu) lattice");
  add_common(sweep, true);
  CLI::App* estimate = app.add_subcommand("estimate", "Richardson estimate of (lambda, mu)");
  add_common(estimate, true);
  CLI::App* bench = app.add_subcommand("bench", "benchmark reports with pass/fail checks");
  add_common(bench, false);
  bench->add_option("id", bench_id, "benchmark id or 'all'")->required();

  CLI11_PARSE(app, argc, argv);

  const std::optional<fs::path> out_flag = out_dir.empty() ? std::nullopt : std::optional<fs::path>(out_dir);
  try {
    if (bench->parsed()) {
      return cli::cmd_bench(bench_id, cli::resolve_out_dir(out_flag, nullptr), threads, std::cout);
    }
    const cli::RunConfig config = cli::load_config_file(config_path);
    const fs::path out = cli::resolve_out_dir(out_flag, &config);
    if (run->parsed()) return cli::cmd_run(config, out, std::cout);
    if (sweep->parsed()) return cli::cmd_sweep(config, out, threads, std::cout);
    return cli::cmd_estimate(config, out, threads, std::cout);
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return 1;
  }
}
