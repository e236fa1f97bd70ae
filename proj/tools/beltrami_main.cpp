// Copyright (c) the beltrami project contributors.
// SPDX-License-Identifier: Apache-2.0
//
// Batch front-end: solve | stats | convergence | fd-compare | fit-score.
// Exit codes: 0 success, 2 configuration error, 3 numerical failure.

#include <CLI11.hpp>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <optional>
#include <string>

#include "beltrami/commands.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  bool deterministic = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "run configuration (JSON)")->required();
  cmd->add_option("--out", args.out_dir, "output directory (default: config out_dir)");
  cmd->add_option("--seed", args.seed, "override the config random seed");
  cmd->add_flag("--deterministic", args.deterministic,
                "single-threaded assembly with fixed reduction order");
}

int run(const std::string& name, const CommonArgs& args) {
  using namespace beltrami::cli;
  RunConfig config = load_config_file(args.config_path);
  if (args.seed) config.seed = *args.seed;
  config.deterministic = config.deterministic || args.deterministic;
  const std::filesystem::path out(args.out_dir.empty() ? config.out_dir : args.out_dir);

  CommandResult result;
  if (name == "solve")
    result = cmd_solve(config, out);
  else if (name == "stats")
    result = cmd_stats(config, out);
  else if (name == "convergence")
    result = cmd_convergence(config, out);
  else if (name == "fd-compare")
    result = cmd_fd_compare(config, out);
  else if (name == "fit-score")
    result = cmd_fit_score(config, out);

  for (const auto& f : result.files) std::printf("wrote %s\n", f.string().c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Laplace-Beltrami eigenmodes on subdomains of a rectangle, the unit sphere, "
               "and a flat torus, by finite-potential relaxation and spectral projection"};
  app.require_subcommand(1);

  const char* names[] = {"solve", "stats", "convergence", "fd-compare", "fit-score"};
  const char* blurbs[] = {"spectrum and eigenmode grids",
                          "eigenvalue-spacing statistics and billiard classification",
                          "eigenvalue sweeps over V0 or N",
                          "expansion vs finite-difference baseline",
                          "domain-fit score over candidate host spaces"};
  CommonArgs args[5];
  for (int i = 0; i < 5; ++i) add_common(app.add_subcommand(names[i], blurbs[i]), args[i]);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);  // prints the usage message; 0 for --help
    return rc == 0 ? 0 : 2;
  }

  for (int i = 0; i < 5; ++i) {
    if (!app.get_subcommand(names[i])->parsed()) continue;
    try {
      return run(names[i], args[i]);
    } catch (const beltrami::ConfigError& e) {
      std::fprintf(stderr, "config error: %s\n", e.what());
      return 2;
    } catch (const std::invalid_argument& e) {
      std::fprintf(stderr, "config error: %s\n", e.what());
      return 2;
    } catch (const beltrami::NumericalError& e) {
      std::fprintf(stderr, "numerical failure: %s\n", e.what());
      return 3;
    } catch (const std::exception& e) {
      std::fprintf(stderr, "error: %s\n", e.what());
      return 1;
    }
  }
  return 0;
}
