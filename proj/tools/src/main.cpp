// SPDX-License-Identifier: Apache-2.0
// irssec: experiment runner for the two-IRS wiretap solvers.
#include <cstdlib>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "irssec/app/checks.hpp"
#include "irssec/app/config.hpp"
#include "irssec/app/run.hpp"

namespace {

using namespace irssec;

enum Exit { kOk = 0, kValidation = 1, kSolver = 2, kIo = 3 };

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("irssec");
  spdlog::set_default_logger(logger);
  const char* env = std::getenv("IRSSEC_LOG");
  spdlog::set_level(env ? spdlog::level::from_str(env) : spdlog::level::warn);
}

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string solver;
  std::optional<unsigned> threads;
};

app::ExperimentConfig load(const Flags& f, std::optional<app::Solver> forced) {
  app::ExperimentConfig cfg = f.config.empty() ? app::parse_config_text("{}") : app::parse_config(f.config);
  if (f.seed) cfg.scenario.seed = *f.seed;
  if (!f.out.empty()) cfg.output_dir = f.out;
  if (f.threads) cfg.game.threads = *f.threads;
  if (!f.solver.empty()) {
    const app::Solver s = app::parse_solver(f.solver);
    if (forced && s != *forced)
      throw app::ConfigError("--solver " + f.solver + " conflicts with the subcommand", "solver");
    cfg.solver = s;
  }
  if (forced) cfg.solver = *forced;
  cfg.validate();
  return cfg;
}

int run(const Flags& f, std::optional<app::Solver> forced) {
  const auto cfg = load(f, forced);
  const auto res = app::run_experiment(cfg);
  for (const auto& s : res.solvers) {
    if (s.ok)
      std::cout << s.name << ": C_s " << s.secrecy << " bps/Hz (Bob " << s.bob << ", Eve " << s.eve << ")\n";
    else
      std::cout << s.name << ": failed: " << s.error << "\n";
  }
  std::cout << "summary: " << (cfg.output_dir / "summary.json").string() << "\n";
  return res.all_failed() ? kSolver : kOk;
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();
  CLI::App cli{"Max-min secrecy rate with a legitimate and an illegitimate IRS"};
  cli.require_subcommand(1);
  Flags f;
  auto add_common = [&f](CLI::App* sub, bool with_solver) {
    sub->add_option("--config", f.config, "JSON experiment config")->check(CLI::ExistingFile);
    sub->add_option("--seed", f.seed, "Scenario seed (overrides the config)");
    sub->add_option("--out", f.out, "Output directory (overrides the config)");
    sub->add_option("--threads", f.threads, "Workers for payoff enumeration (0 = all cores)");
    if (with_solver) sub->add_option("--solver", f.solver, "ao, gda, game or all");
  };

  auto* gen = cli.add_subcommand("gen-scenario", "Generate channels and write scenario.json");
  add_common(gen, false);
  auto* run_ao = cli.add_subcommand("run-ao", "Alternating optimization");
  auto* run_gda = cli.add_subcommand("run-gda", "Gradient descent-ascent");
  auto* run_game = cli.add_subcommand("run-game", "Zero-sum game over discrete phases");
  auto* run_all = cli.add_subcommand("run-all", "Run the solvers selected in the config (default all)");
  for (auto* s : {run_ao, run_gda, run_game, run_all}) add_common(s, true);
  auto* verify = cli.add_subcommand("verify", "Run the invariant checks on a seed");
  add_common(verify, false);
  bool quick = false;
  verify->add_flag("--quick", quick, "Reduced sample counts and no full-size game");

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = cli.exit(e);
    return code == 0 ? kOk : kValidation;
  }

  try {
    if (gen->parsed()) {
      const auto cfg = load(f, std::nullopt);
      std::cout << app::write_scenario(cfg).string() << "\n";
      return kOk;
    }
    if (run_ao->parsed()) return run(f, app::Solver::kAo);
    if (run_gda->parsed()) return run(f, app::Solver::kGda);
    if (run_game->parsed()) return run(f, app::Solver::kGame);
    if (run_all->parsed()) return run(f, std::nullopt);
    if (verify->parsed()) {
      app::CheckOptions opt;
      opt.seed = f.seed.value_or(1);
      opt.quick = quick;
      if (f.threads) opt.threads = *f.threads;
      bool ok = true;
      for (const auto& r : app::run_checks(opt)) {
        std::cout << app::format_check(r) << "\n" << std::flush;
        ok = ok && (r.pass || r.soft);
      }
      return ok ? kOk : kSolver;
    }
  } catch (const app::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kValidation;
  } catch (const app::IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kSolver;
  }
  return kValidation;
}
