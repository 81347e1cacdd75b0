// SPDX-License-Identifier: Apache-2.0
#include "irssec/app/run.hpp"

#include <charconv>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <spdlog/spdlog.h>

#include "irssec/ao/ao.hpp"
#include "irssec/chansim/scenario.hpp"
#include "irssec/game/game.hpp"
#include "irssec/gda/gda.hpp"

#ifndef IRSSEC_VERSION
#define IRSSEC_VERSION "0.0.0"
#endif

namespace irssec::app {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << content;
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

double elapsed_ms(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

json complex_json(const optkit::CVector& v) {
  json re = json::array(), im = json::array();
  for (const auto& z : v) {
    re.push_back(z.real());
    im.push_back(z.imag());
  }
  return {{"re", re}, {"im", im}};
}

json complex_json(const optkit::CMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) rows.push_back(complex_json(optkit::CVector(m.row(i).transpose())));
  return rows;
}

std::optional<game::StrategySpace> eve_space(const ExperimentConfig& cfg) {
  if (!cfg.domain_E.is_discrete() || cfg.scenario.N_E < 1) return std::nullopt;
  try {
    return game::enumerate_strategies(cfg.scenario.N_E, cfg.domain_E.levels(), cfg.game.strategy_cap);
  } catch (const SizeError&) {
    return std::nullopt;
  }
}

void fill_from_trace(SolverOutcome& o, const Trace& t) {
  if (t.empty()) return;
  o.secrecy = t.back().secrecy;
  o.bob = t.back().bob;
  o.eve = t.back().eve;
}

struct Context {
  const ExperimentConfig& cfg;
  model::ChannelSet ch;
  model::RadioParams rp;
  std::optional<game::StrategySpace> eve;
  std::optional<optkit::CVector> ao_w;  // final AO beamformer, for game.beamformer = from_ao
};

Trace finish_trace(Trace t, bool timing) {
  if (!timing)
    for (auto& r : t) r.wall_ms = 0.0;
  return t;
}

void run_ao_solver(Context& ctx, SolverOutcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = ao::run_ao(ctx.ch, ctx.rp, ctx.cfg.domain_B, ctx.cfg.domain_E, ctx.cfg.ao, ctx.cfg.scenario.seed);
  o.wall_ms = elapsed_ms(t0);
  ctx.ao_w = r.beamformer.w;
  const Trace t = finish_trace(r.trace, ctx.cfg.timing);
  emit_trace(t, ctx.cfg.output_dir / "ao_trace.csv");
  o.files.push_back("ao_trace.csv");
  fill_from_trace(o, t);
  o.iterations = r.iterations;
  o.converged = r.converged;
  if (ctx.eve) o.worst_case = game::worst_case_over_eve(ctx.ch, ctx.rp, r.phases.theta_B, *ctx.eve, r.beamformer.w).secrecy;
}

void run_gda_solver(Context& ctx, SolverOutcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = gda::run_gda(ctx.ch, ctx.rp, ctx.cfg.domain_B, ctx.cfg.domain_E, ctx.cfg.gda, ctx.cfg.scenario.seed,
                              ctx.cfg.gda_init_randomization_count);
  o.wall_ms = elapsed_ms(t0);
  const Trace t = finish_trace(r.trace, ctx.cfg.timing);
  emit_trace(t, ctx.cfg.output_dir / "gda_trace.csv");
  o.files.push_back("gda_trace.csv");
  fill_from_trace(o, t);
  o.iterations = r.iterations;
  o.converged = r.converged;
  if (ctx.eve) o.worst_case = game::worst_case_over_eve(ctx.ch, ctx.rp, r.phases.theta_B, *ctx.eve, r.beamformer.w).secrecy;
}

void run_game_solver(Context& ctx, SolverOutcome& o) {
  const auto& cfg = ctx.cfg;
  const auto t0 = std::chrono::steady_clock::now();
  game::PayoffOptions opt;
  opt.threads = cfg.game.threads;
  if (cfg.game.beamformer == GameBeamformer::kFromAo) {
    if (!ctx.ao_w) ctx.ao_w = ao::run_ao(ctx.ch, ctx.rp, cfg.domain_B, cfg.domain_E, cfg.ao, cfg.scenario.seed).beamformer.w;
    opt.fixed_w = ctx.ao_w;
  }
  const auto bob = game::enumerate_strategies(cfg.scenario.N_B, cfg.domain_B.levels(), cfg.game.strategy_cap);
  const auto eve = game::enumerate_strategies(cfg.scenario.N_E, cfg.domain_E.levels(), cfg.game.strategy_cap);
  const auto a = game::payoff_matrix(ctx.ch, ctx.rp, bob, eve, opt);
  const auto sol = game::solve_zero_sum(a);
  const auto ne = game::verify_ne(a, sol.x, sol.y, sol.value, 1e-8);
  const auto pb = game::pure_bounds(a);

  // Expected receiver rates under the mixed profile, over the support pairs.
  model::SecrecyRates expect;
  for (auto i : sol.support_x)
    for (auto j : sol.support_y) {
      const optkit::CVector w = opt.fixed_w ? *opt.fixed_w : ao::optimal_beamformer(ctx.ch, bob[i], eve[j], ctx.rp).w;
      const auto r = model::secrecy_rate(ctx.ch, w, bob[i], eve[j], ctx.rp);
      const double p = sol.x(static_cast<Eigen::Index>(i)) * sol.y(static_cast<Eigen::Index>(j));
      expect.bob += p * r.bob;
      expect.eve += p * r.eve;
    }
  o.wall_ms = elapsed_ms(t0);

  const Trace t{{0, StepLabel::kGame, sol.value, expect.bob, expect.eve, cfg.timing ? o.wall_ms : 0.0}};
  emit_trace(t, cfg.output_dir / "game_trace.csv");
  write_file(cfg.output_dir / "game_payoff.csv", game::payoff_csv(a));
  write_file(cfg.output_dir / "game_solution.json", game::solution_json(sol) + "\n");
  o.files = {"game_trace.csv", "game_payoff.csv", "game_solution.json"};
  fill_from_trace(o, t);
  o.worst_case = (a.a.transpose() * sol.x).minCoeff();
  o.iterations = 1;
  o.converged = true;
  o.extra = {
      {"value_row", sol.value_row},
      {"value_col", sol.value_col},
      {"pure_maxmin", pb.maxmin},
      {"pure_minmax", pb.minmax},
      {"ne_pass", ne.pass},
      {"ne_worst_violation", ne.worst()},
      {"support_size_bob", sol.support_x.size()},
      {"support_size_eve", sol.support_y.size()},
      {"payoff_rows", a.rows()},
      {"payoff_cols", a.cols()},
      {"beamformer", cfg.game.beamformer == GameBeamformer::kPerPair ? "per_pair" : "from_ao"},
  };
  if (!ne.pass) throw ConvergenceError("game: equilibrium check failed, worst violation " + std::to_string(ne.worst()));
}

}  // namespace

std::string artifact_version() { return IRSSEC_VERSION; }

void emit_trace(const Trace& trace, const fs::path& path) { write_file(path, trace_csv(trace)); }

std::string trace_csv(const Trace& trace) {
  std::ostringstream os;
  os << std::setprecision(17) << kTraceHeader << '\n';
  for (const auto& r : trace)
    os << r.iteration << ',' << to_string(r.step) << ',' << r.secrecy << ',' << r.bob << ',' << r.eve << ','
       << r.wall_ms << '\n';
  return os.str();
}

Trace parse_trace(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kTraceHeader) throw ContractViolation("parse_trace: missing or wrong header");
  Trace t;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const auto bad = [&] { return ContractViolation("parse_trace: malformed line " + std::to_string(line_no)); };
    std::vector<std::string> f;
    std::stringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');) f.push_back(cell);
    if (f.size() != 6) throw bad();
    TraceRecord r;
    const auto step = parse_step_label(f[1]);
    if (!step) throw bad();
    r.step = *step;
    auto num = [&](const std::string& s, auto& out) {
      const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
      if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) throw bad();
    };
    num(f[0], r.iteration);
    num(f[2], r.secrecy);
    num(f[3], r.bob);
    num(f[4], r.eve);
    num(f[5], r.wall_ms);
    t.push_back(r);
  }
  return t;
}

bool RunResult::all_failed() const {
  for (const auto& s : solvers)
    if (s.ok) return false;
  return true;
}

nlohmann::json RunResult::summary() const {
  json solvers_json = json::object();
  for (const auto& s : solvers) {
    json j = s.extra;
    j["status"] = s.ok ? "ok" : "failed";
    j["error"] = s.ok ? json(nullptr) : json(s.error);
    j["files"] = s.files;
    j["wall_ms"] = s.wall_ms;
    if (s.ok) {
      j["secrecy_rate_bps_hz"] = s.secrecy;
      j["deliverable_secrecy_bps_hz"] = std::max(s.secrecy, 0.0);
      j["bob_rate_bps_hz"] = s.bob;
      j["eve_rate_bps_hz"] = s.eve;
      j["worst_case_secrecy_bps_hz"] = s.worst_case ? json(*s.worst_case) : json(nullptr);
      j["iterations"] = s.iterations;
      j["converged"] = s.converged;
    } else {
      for (const char* k : {"secrecy_rate_bps_hz", "deliverable_secrecy_bps_hz", "bob_rate_bps_hz", "eve_rate_bps_hz",
                            "worst_case_secrecy_bps_hz", "iterations", "converged"})
        j[k] = nullptr;
    }
    solvers_json[s.name] = j;
  }
  return {{"artifact_version", app::artifact_version()}, {"seed", seed}, {"config", config}, {"solvers", solvers_json}};
}

fs::path write_scenario(const ExperimentConfig& cfg) {
  std::error_code ec;
  fs::create_directories(cfg.output_dir, ec);
  if (ec) throw IoError("cannot create output directory " + cfg.output_dir.string() + ": " + ec.message());
  const auto ch = chansim::generate_channels(cfg.scenario);
  const json j = {
      {"artifact_version", artifact_version()},
      {"config", to_json(cfg)},
      {"channels",
       {{"M", ch.M},
        {"N_B", ch.N_B},
        {"N_E", ch.N_E},
        {"h_AB", complex_json(ch.h_AB)},
        {"h_AIB", complex_json(ch.h_AIB)},
        {"h_IBB", complex_json(ch.h_IBB)},
        {"h_IBE", complex_json(ch.h_IBE)},
        {"h_AE", complex_json(ch.h_AE)},
        {"h_AIE", complex_json(ch.h_AIE)},
        {"h_IEE", complex_json(ch.h_IEE)},
        {"h_IEB", complex_json(ch.h_IEB)}}},
  };
  const fs::path path = cfg.output_dir / "scenario.json";
  write_file(path, j.dump(2) + "\n");
  return path;
}

RunResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  std::error_code ec;
  fs::create_directories(cfg.output_dir, ec);
  if (ec) throw IoError("cannot create output directory " + cfg.output_dir.string() + ": " + ec.message());

  Context ctx{cfg, chansim::generate_channels(cfg.scenario), cfg.radio.params(), eve_space(cfg), std::nullopt};
  RunResult res;
  res.artifact_version = artifact_version();
  res.seed = cfg.scenario.seed;
  res.config = to_json(cfg);
  res.output_dir = cfg.output_dir;

  std::vector<std::pair<std::string, void (*)(Context&, SolverOutcome&)>> plan;
  if (cfg.solver == Solver::kAo || cfg.solver == Solver::kAll) plan.emplace_back("ao", run_ao_solver);
  if (cfg.solver == Solver::kGda || cfg.solver == Solver::kAll) plan.emplace_back("gda", run_gda_solver);
  if (cfg.solver == Solver::kGame || cfg.solver == Solver::kAll) plan.emplace_back("game", run_game_solver);

  for (const auto& [name, fn] : plan) {
    SolverOutcome o;
    o.name = name;
    spdlog::info("{}: starting (seed {})", name, cfg.scenario.seed);
    try {
      fn(ctx, o);
      o.ok = true;
      spdlog::info("{}: C_s = {:.6f} bps/Hz after {} iterations", name, o.secrecy, o.iterations);
    } catch (const IoError&) {
      throw;
    } catch (const std::exception& e) {
      o.ok = false;
      o.error = e.what();
      spdlog::error("{}: {}", name, e.what());
    }
    if (!cfg.timing) o.wall_ms = 0.0;
    res.solvers.push_back(std::move(o));
  }

  write_file(cfg.output_dir / "summary.json", res.summary().dump(2) + "\n");
  return res;
}

}  // namespace irssec::app
