#include "eseek/cli_app.hpp"

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "eseek/config.hpp"
#include "eseek/csv.hpp"
#include "eseek/svg.hpp"
#include "eseek/verify.hpp"

namespace eseek::cli {

namespace {

unsigned sweep_threads() {
  if (const char* env = std::getenv("ES_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

void print_metrics(const std::string& name, const RunMetrics& m) {
  std::printf("%s: steady_state_error=%.6g max_excursion=%.6g diverged=%s", name.c_str(),
              m.steady_state_error, m.max_excursion, m.diverged ? "true" : "false");
  if (m.convergence_time)
    std::printf(" convergence_time=%.6g", *m.convergence_time);
  std::printf("\n");
}

}  // namespace

int cmd_run(const std::string& config_path, const std::string& out_csv,
            const std::string& plot_svg) {
  try {
    const RunSpec spec = build_runspec(parse_config(read_text_file(config_path)));
    if (!spec.cost.warning().empty())
      std::fprintf(stderr, "warning: %s\n", spec.cost.warning().c_str());

    const Trajectory traj = simulate(spec.scheme, spec.sched, spec.cost, spec.eng, spec.x0);
    write_text_file(out_csv, trajectory_csv(traj));
    if (!plot_svg.empty())
      write_text_file(plot_svg, trajectory_svg(traj, spec.cost.minimizer(), spec.name));

    const RunMetrics m = metrics(traj, spec.cost.minimizer(), spec.band, spec.metrics_blowup);
    print_metrics(spec.name, m);
    if (traj.diverged) {
      std::fprintf(stderr, "run aborted: state left the blow-up radius at t=%.6g\n",
                   traj.end_time);
      return 2;
    }
    return 0;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}

int cmd_sweep(const std::string& config_path, const std::vector<std::string>& grid_tokens,
              const std::string& out_csv) {
  try {
    const ConfigDoc base = parse_config(read_text_file(config_path));
    const std::vector<GridAxis> axes = parse_grid(grid_tokens);

    // Cartesian product, first axis slowest (odometer order).
    std::size_t cells = 1;
    for (const auto& axis : axes) cells *= axis.values.size();

    std::vector<std::string> names;
    for (const auto& axis : axes) names.push_back(axis.key);

    std::vector<SimJob> jobs;
    std::vector<std::vector<std::string>> cell_params;
    jobs.reserve(cells);
    for (std::size_t cell = 0; cell < cells; ++cell) {
      ConfigDoc doc = base;
      std::vector<std::string> params;
      std::size_t rem = cell;
      std::size_t divisor = cells;
      for (const auto& axis : axes) {
        divisor /= axis.values.size();
        const std::string& value = axis.values[rem / divisor];
        rem %= divisor;
        doc = apply_override(std::move(doc), axis.key, value);
        params.push_back(value);
      }
      const RunSpec spec = build_runspec(doc);
      SimJob job;
      job.scheme = spec.scheme;
      job.sched = spec.sched;
      job.cost = spec.cost;
      job.eng = spec.eng;
      job.x0 = spec.x0;
      job.band = spec.band;
      job.metrics_blowup = spec.metrics_blowup;
      jobs.push_back(std::move(job));
      cell_params.push_back(std::move(params));
    }

    const std::vector<RunMetrics> results = run_jobs(jobs, sweep_threads());
    write_text_file(out_csv, sweep_csv(names, cell_params, results));
    std::printf("sweep: %zu cell(s) written to %s\n", results.size(), out_csv.c_str());
    return 0;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}

int cmd_verify(const std::string& suite) {
  try {
    const auto results = run_verify(suite);
    bool all_pass = true;
    for (const auto& s : results) {
      for (const auto& c : s.checks) {
        std::printf("[%s] %s / %s (%s)\n", c.pass ? "PASS" : "FAIL", s.name.c_str(),
                    c.name.c_str(), c.detail.c_str());
        all_pass = all_pass && c.pass;
      }
    }
    std::printf("%s\n", all_pass ? "all checks passed" : "CHECKS FAILED");
    return all_pass ? 0 : 1;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}

int main(int argc, char** argv) {
  CLI::App app{"Lie-bracket extremum seeking with intermittent cost measurements"};
  app.require_subcommand(1);

  std::string config_path, out_path, plot_path, suite = "all";
  std::vector<std::string> grid_tokens;

  auto* run = app.add_subcommand("run", "simulate one configuration and export CSV (and SVG)");
  run->add_option("config", config_path, "config file")->required();
  run->add_option("--out", out_path, "output CSV path")->required();
  run->add_option("--plot", plot_path, "optional SVG plot path");

  auto* sweep = app.add_subcommand("sweep", "run a parameter grid and export one CSV row per cell");
  sweep->add_option("config", config_path, "base config file")->required();
  sweep->add_option("--grid", grid_tokens, "axes as key=v1,v2,... (config schema keys)");
  sweep->add_option("--out", out_path, "output CSV path")->required();

  auto* verify = app.add_subcommand("verify", "run a built-in verification suite");
  verify->add_option("--suite", suite,
                     "dithers|gamma|assumption4|path-equivalence|gradient-scaling|"
                     "reference-oracle|all");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  if (run->parsed()) return cmd_run(config_path, out_path, plot_path);
  if (sweep->parsed()) return cmd_sweep(config_path, grid_tokens, out_path);
  if (verify->parsed()) return cmd_verify(suite);
  return 1;
}

}  // namespace eseek::cli
