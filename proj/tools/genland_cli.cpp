// genland: run one experiment and write its CSV/JSON outputs plus a manifest.
//
//   genland hn --out runs/hn
//   genland cdt-mono --set truncation=4 --set x_count=200
//   genland cdt-duo --config runs/duo/manifest.json --out runs/duo-again
//
// Exit codes: 0 ok, 2 config, 3 numerical contract, 4 I/O.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "genland/experiments/config.hpp"
#include "genland/experiments/runners.hpp"

namespace ge = genland::experiments;

namespace {

struct Flags {
  std::string config;
  std::string out;
  unsigned workers = 1;
  std::vector<std::string> sets;
  std::optional<long long> seed;
  bool show_config = false;
};

int run(const std::string& experiment, const Flags& f) {
  std::vector<std::string> overrides = f.sets;
  if (f.seed) overrides.push_back("seed=" + std::to_string(*f.seed));
  std::optional<std::filesystem::path> file;
  if (!f.config.empty()) file = f.config;
  const ge::RunConfig cfg = ge::load_config(experiment, file, overrides);
  if (f.show_config) {
    std::cout << cfg.to_text();
    return 0;
  }

  const ge::RunOptions opt{f.workers};
  const auto t0 = std::chrono::steady_clock::now();
  ge::RunResult result = ge::run_experiment(cfg, opt);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const std::filesystem::path dir = f.out.empty() ? std::filesystem::path("out") / experiment : std::filesystem::path(f.out);
  ge::write_outputs(result, cfg, dir, opt, wall);

  std::cout << experiment << ": " << result.report.table.size() << " rows -> " << dir.string() << " ("
            << wall << " s)\n";
  std::cout << result.summary.dump(2) << "\n";
  if (result.bound_violations > 0) {
    std::cerr << "norm-bound chain violated on " << result.bound_violations << " of " << result.bound_checks
              << " solves\n";
    return 3;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generalized localization landscape experiments"};
  app.require_subcommand(1);

  Flags flags;
  std::string chosen;
  for (const auto& name : ge::experiment_names()) {
    CLI::App* sub = app.add_subcommand(name, "run the " + name + " experiment");
    sub->add_option("--config", flags.config, "key = value file, or a manifest.json from an earlier run");
    sub->add_option("--out", flags.out, "output directory (default out/<experiment>)");
    sub->add_option("--workers", flags.workers, "worker threads for the sweep")->check(CLI::PositiveNumber);
    sub->add_option("--set", flags.sets, "override, key=value (repeatable)")->take_all();
    sub->add_option("--seed", flags.seed, "random seed (recorded in the manifest)");
    sub->add_flag("--show-config", flags.show_config, "print the resolved configuration and exit");
    sub->callback([&chosen, name] { chosen = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    return run(chosen, flags);
  } catch (const genland::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const genland::IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return 4;
  } catch (const genland::Error& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  }
}
