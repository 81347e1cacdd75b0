// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include <random>

#include "irssec/ao/ao.hpp"
#include "irssec/chansim/scenario.hpp"
#include "irssec/game/game.hpp"
#include "irssec/gda/gda.hpp"
#include "irssec/model/channel.hpp"
#include "irssec/optkit/linalg.hpp"

namespace {

using namespace irssec;
using optkit::CMatrix;
using optkit::CVector;
using optkit::HermMatrix;

model::RadioParams reference_radio() {
  return {model::dbm_to_watt(46.0), model::noise_power(-174.0, 5e6), model::noise_power(-174.0, 5e6)};
}

model::ChannelSet scenario(int n) {
  chansim::ScenarioSpec s;
  s.N_B = n;
  s.N_E = n;
  return chansim::generate_channels(s);
}

HermMatrix random_psd(Eigen::Index m, std::mt19937_64& g) {
  std::normal_distribution<double> d;
  CMatrix x(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j) x(i, j) = {d(g), d(g)};
  return HermMatrix::symmetrized(x * x.adjoint() + CMatrix::Identity(m, m));
}

void BM_GeneralizedEig(benchmark::State& state) {
  std::mt19937_64 g(7);
  const auto m = state.range(0);
  const HermMatrix a = random_psd(m, g), b = random_psd(m, g);
  for (auto _ : state) benchmark::DoNotOptimize(optkit::max_generalized_eigvec(a, b));
}
BENCHMARK(BM_GeneralizedEig)->Arg(3)->Arg(8)->Arg(32);

void BM_ThetaBStep(benchmark::State& state) {
  const auto ch = scenario(static_cast<int>(state.range(0)));
  const auto rp = reference_radio();
  const CVector te = CVector::Ones(ch.N_E), tb = CVector::Ones(ch.N_B);
  const CVector w = ao::optimal_beamformer(ch, tb, te, rp).w;
  const auto lifts = ao::lift_bob_side(ch, w, te, rp);
  ao::RandomizationOptions ro;
  ro.count = static_cast<int>(state.range(1));
  for (auto _ : state) {
    chansim::Rng rng(1);
    benchmark::DoNotOptimize(ao::solve_theta_b(lifts, model::PhaseDomain::discrete(5), rng, tb, ro));
  }
}
BENCHMARK(BM_ThetaBStep)->Args({4, 1000})->Args({4, 10000})->Args({16, 1000})->Unit(benchmark::kMillisecond);

void BM_PayoffMatrix(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto ch = scenario(n);
  const auto rp = reference_radio();
  const auto space = game::enumerate_strategies(n, 5);
  game::PayoffOptions po;
  po.threads = static_cast<unsigned>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(game::payoff_matrix(ch, rp, space, space, po));
  state.counters["entries"] = static_cast<double>(space.size() * space.size());
}
BENCHMARK(BM_PayoffMatrix)->Args({2, 1})->Args({3, 1})->Args({3, 0})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PayoffMatrix)->Args({4, 0})->Iterations(1)->Unit(benchmark::kSecond);

void BM_ZeroSumLp(benchmark::State& state) {
  const auto n = state.range(0);
  std::mt19937_64 g(11);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  game::PayoffMatrix a{optkit::RMatrix(n, n)};
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) a.a(i, j) = u(g);
  for (auto _ : state) benchmark::DoNotOptimize(game::solve_zero_sum(a));
}
BENCHMARK(BM_ZeroSumLp)->Arg(25)->Arg(125)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ZeroSumLp)->Arg(625)->Iterations(1)->Unit(benchmark::kSecond);

void BM_AoRun(benchmark::State& state) {
  const auto ch = scenario(4);
  const auto rp = reference_radio();
  ao::AOConfig cfg;
  cfg.max_iters = static_cast<int>(state.range(0));
  cfg.randomization_count = 1000;
  const auto d = model::PhaseDomain::discrete(5);
  for (auto _ : state) benchmark::DoNotOptimize(ao::run_ao(ch, rp, d, d, cfg, 1));
}
BENCHMARK(BM_AoRun)->Arg(5)->Unit(benchmark::kMillisecond);

void BM_GdaRun(benchmark::State& state) {
  const auto ch = scenario(4);
  const auto rp = reference_radio();
  gda::GDAConfig cfg;
  cfg.max_iters = static_cast<int>(state.range(0));
  const auto d = model::PhaseDomain::discrete(5);
  for (auto _ : state) benchmark::DoNotOptimize(gda::run_gda(ch, rp, d, d, cfg, 1, 1000));
}
BENCHMARK(BM_GdaRun)->Arg(5)->Arg(20)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
