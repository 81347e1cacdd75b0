// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "irssec/app/config.hpp"
#include "irssec/app/run.hpp"

namespace {

namespace fs = std::filesystem;
using namespace irssec;
using app::ConfigError;
using app::parse_config_text;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("irssec_app_" + name);
  fs::remove_all(p);
  return p;
}

ConfigError config_error(const std::string& text) {
  try {
    parse_config_text(text);
  } catch (const ConfigError& e) {
    return e;
  }
  ADD_FAILURE() << "no ConfigError for: " << text;
  return ConfigError("", "");
}

TEST(Config, EmptyDocumentGivesReferenceDefaults) {
  for (const char* text : {"", "{}", "  \n"}) {
    const auto c = parse_config_text(text);
    EXPECT_EQ(c.scenario.M, 3);
    EXPECT_EQ(c.scenario.N_B, 4);
    EXPECT_EQ(c.scenario.N_E, 4);
    EXPECT_EQ(c.scenario.direct_exponent, 4.0);
    EXPECT_EQ(c.scenario.reflected_exponent, 2.0);
    EXPECT_EQ(c.radio.P_dbm, 46.0);
    EXPECT_EQ(c.radio.bandwidth_hz, 5e6);
    EXPECT_EQ(c.radio.noise_density_dbm_hz, -174.0);
    ASSERT_TRUE(c.domain_B.is_discrete());
    ASSERT_TRUE(c.domain_E.is_discrete());
    EXPECT_EQ(c.domain_B.levels(), 5);
    EXPECT_EQ(c.domain_E.levels(), 5);
    EXPECT_EQ(c.ao.randomization_count, 10000);
    EXPECT_EQ(c.gda_init_randomization_count, 10000);
    EXPECT_EQ(c.solver, app::Solver::kAll);
  }
}

TEST(Config, RadioParamsFromDbm) {
  const auto rp = parse_config_text("{}").radio.params();
  // 46 dBm = 39.81 W; -174 dBm/Hz over 5 MHz = 10^-20.4 * 5e6 W
  EXPECT_NEAR(rp.P_watt, 39.810717055349734, 1e-12);
  EXPECT_NEAR(rp.sigma2_B / (std::pow(10.0, -20.4) * 5e6), 1.0, 1e-12);
  EXPECT_EQ(rp.sigma2_B, rp.sigma2_E);
}

TEST(Config, LevelsBelowTwoRejected) {
  const auto e = config_error(R"({"domains": {"L_B": 1}})");
  EXPECT_EQ(e.field(), "domains.L_B");
}

TEST(Config, NegativeBandwidthRejected) {
  const auto e = config_error(R"({"radio": {"bandwidth_hz": -1}})");
  EXPECT_EQ(e.field(), "radio.bandwidth_hz");
  EXPECT_NE(std::string(e.what()).find("radio.bandwidth_hz"), std::string::npos);
}

TEST(Config, UnknownKeyReportsPathAndLine) {
  const auto e = config_error("{\n  \"ao\": {\n    \"max_iter\": 3\n  }\n}");
  EXPECT_EQ(e.field(), "ao.max_iter");
  EXPECT_EQ(e.line(), 3);
  EXPECT_NE(std::string(e.what()).find("unknown key"), std::string::npos);
}

TEST(Config, ParseErrorReportsLine) {
  const auto e = config_error("{\n  \"seed\": 3,\n  \"solver\": \n}");
  EXPECT_EQ(e.line(), 4);
}

TEST(Config, WrongTypeRejected) {
  EXPECT_EQ(config_error(R"({"scenario": {"M": "three"}})").field(), "scenario.M");
  EXPECT_EQ(config_error(R"({"ao": {"incumbent_protection": 1}})").field(), "ao.incumbent_protection");
}

TEST(Config, GameNeedsDiscreteDomains) {
  EXPECT_THROW(parse_config_text(R"({"domains": {"L_B": "continuous"}})").validate(), ConfigError);
  const auto c = parse_config_text(R"({"solver": "ao", "domains": {"L_B": "continuous"}})");
  EXPECT_NO_THROW(c.validate());
  EXPECT_FALSE(c.domain_B.is_discrete());
}

TEST(Config, JsonEchoRoundTrips) {
  const auto c = parse_config_text(
      R"({"seed": 9, "solver": "gda", "scenario": {"N_B": 2}, "domains": {"L_E": "continuous"},
          "gda": {"projection": "linearized", "step_size": 0.5}, "game": {"beamformer": "from_ao"}})");
  const auto j = app::to_json(c);
  EXPECT_EQ(app::to_json(parse_config_text(j.dump())), j);
  EXPECT_EQ(j["seed"], 9);
  EXPECT_EQ(j["domains"]["L_E"], "continuous");
}

TEST(Config, SolverNames) {
  for (auto s : {app::Solver::kAo, app::Solver::kGda, app::Solver::kGame, app::Solver::kAll})
    EXPECT_EQ(app::parse_solver(app::to_string(s)), s);
  EXPECT_THROW(app::parse_solver("sdr"), ConfigError);
}

Trace three_steps() {
  return {{0, StepLabel::kInit, -0.1, 1.0 / 3.0, 0.4333333333333333, 0.0},
          {1, StepLabel::kThetaB, 2.5e-17, 7.0, 7.0, 1.25},
          {1, StepLabel::kW, 1e300, 1e300, 0.0, 2.0}};
}

TEST(TraceCsv, EmptyTraceIsHeaderOnly) {
  const fs::path dir = scratch("trace_empty");
  fs::create_directories(dir);
  app::emit_trace({}, dir / "t.csv");
  EXPECT_EQ(slurp(dir / "t.csv"), std::string(app::kTraceHeader) + "\n");
  EXPECT_EQ(std::string(app::kTraceHeader),
            "iteration,step_label,secrecy_rate_bps_hz,bob_rate_bps_hz,eve_rate_bps_hz,wall_ms");
}

TEST(TraceCsv, ThreeStepsFourLines) {
  const std::string text = app::trace_csv(three_steps());
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 4);
  EXPECT_EQ(text.find('\r'), std::string::npos);
  EXPECT_EQ(text.back(), '\n');
}

TEST(TraceCsv, RoundTripIsExact) {
  const Trace t = three_steps();
  const Trace back = app::parse_trace(app::trace_csv(t));
  ASSERT_EQ(back.size(), t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    EXPECT_EQ(back[i].iteration, t[i].iteration);
    EXPECT_EQ(back[i].step, t[i].step);
    EXPECT_EQ(back[i].secrecy, t[i].secrecy);
    EXPECT_EQ(back[i].bob, t[i].bob);
    EXPECT_EQ(back[i].eve, t[i].eve);
    EXPECT_EQ(back[i].wall_ms, t[i].wall_ms);
  }
}

TEST(TraceCsv, MalformedInputRejected) {
  EXPECT_THROW(app::parse_trace("iteration,step\n"), ContractViolation);
  EXPECT_THROW(app::parse_trace(std::string(app::kTraceHeader) + "\n1,theta_X,0,0,0,0\n"), ContractViolation);
}

TEST(TraceCsv, UnwritablePathNamed) {
  const fs::path bad = scratch("trace_bad") / "missing" / "t.csv";
  try {
    app::emit_trace({}, bad);
    FAIL() << "expected IoError";
  } catch (const app::IoError& e) {
    EXPECT_NE(std::string(e.what()).find(bad.string()), std::string::npos);
  }
}

app::ExperimentConfig micro_config(const fs::path& out) {
  auto c = parse_config_text(R"({"scenario": {"M": 1, "N_B": 1, "N_E": 1}, "domains": {"L_B": 2, "L_E": 2},
                                 "ao": {"randomization_count": 200}, "gda": {"init_randomization_count": 200}})");
  c.output_dir = out;
  return c;
}

TEST(RunExperiment, AllSolversOnMicroInstance) {
  const fs::path out = scratch("run_micro");
  const auto res = app::run_experiment(micro_config(out));
  ASSERT_EQ(res.solvers.size(), 3u);
  EXPECT_FALSE(res.all_failed());
  for (const char* f : {"ao_trace.csv", "gda_trace.csv", "game_trace.csv", "summary.json"})
    EXPECT_TRUE(fs::exists(out / f)) << f;
  for (const auto& s : res.solvers) {
    EXPECT_TRUE(s.ok) << s.name << ": " << s.error;
    for (const auto& f : s.files) EXPECT_TRUE(fs::exists(out / f)) << f;
    // the last trace row is the reported final
    const Trace t = app::parse_trace(slurp(out / (s.name + "_trace.csv")));
    ASSERT_FALSE(t.empty());
    EXPECT_EQ(t.back().secrecy, s.secrecy);
  }
  const auto summary = nlohmann::json::parse(slurp(out / "summary.json"));
  EXPECT_EQ(summary["seed"], 1);
  EXPECT_EQ(summary["artifact_version"], app::artifact_version());
  for (const auto& [name, s] : summary["solvers"].items()) {
    const double cs = s["secrecy_rate_bps_hz"];
    EXPECT_EQ(s["deliverable_secrecy_bps_hz"].get<double>(), std::max(cs, 0.0)) << name;
    EXPECT_EQ(s["wall_ms"], 0.0);
  }
}

TEST(RunExperiment, RepeatRunIsByteIdentical) {
  const fs::path a = scratch("run_rep_a"), b = scratch("run_rep_b");
  app::run_experiment(micro_config(a));
  app::run_experiment(micro_config(b));
  for (const char* f : {"ao_trace.csv", "gda_trace.csv", "game_trace.csv", "game_payoff.csv", "game_solution.json",
                        "summary.json"}) {
    const std::string x = slurp(a / f);
    EXPECT_FALSE(x.empty()) << f;
    EXPECT_EQ(x, slurp(b / f)) << f;
  }
}

TEST(RunExperiment, SingleSolverWritesOnlyItsFiles) {
  const fs::path out = scratch("run_single");
  auto c = micro_config(out);
  c.solver = app::Solver::kAo;
  const auto res = app::run_experiment(c);
  ASSERT_EQ(res.solvers.size(), 1u);
  EXPECT_TRUE(fs::exists(out / "ao_trace.csv"));
  EXPECT_FALSE(fs::exists(out / "gda_trace.csv"));
  EXPECT_FALSE(fs::exists(out / "game_trace.csv"));
}

TEST(RunExperiment, FixedSeedFixesScenario) {
  const fs::path out = scratch("scenario");
  auto c = micro_config(out);
  c.scenario.seed = 5;
  const auto j = nlohmann::json::parse(slurp(app::write_scenario(c)));
  EXPECT_EQ(slurp(app::write_scenario(c)), j.dump(2) + "\n");
}

}  // namespace
