// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "irssec/ao/ao.hpp"
#include "irssec/chansim/scenario.hpp"
#include "irssec/errors.hpp"
#include "irssec/gda/gda.hpp"
#include "irssec/model/lift.hpp"
#include "support.hpp"

namespace irssec::gda {
namespace {

using model::ChannelSet;
using model::RadioParams;
using optkit::Complex;
using testing::Draw;

const RadioParams kUnitRadio{1.0, 1.0, 1.0};

RadioParams reference_radio() {
  const double s2 = model::noise_power(-174.0, 5e6);
  return {model::dbm_to_watt(46.0), s2, s2};
}

double snr_b(const ChannelSet& ch, const CVector& w, const CVector& tb, const CVector& te, double s2) {
  return model::received_gain(model::effective_channel_bob(ch, tb, te), w) / s2;
}
double snr_e(const ChannelSet& ch, const CVector& w, const CVector& tb, const CVector& te, double s2) {
  return model::received_gain(model::effective_channel_eve(ch, tb, te), w) / s2;
}

HermMatrix rank_one(const CVector& theta_E, double lambda) {
  return HermMatrix::outer(model::homogenize(theta_E)) * lambda;
}

// T_E residuals, each relative to max(|rhs|, ||a||_F ||X||_F + |c lambda|) for
// the row Re tr(a X) + c lambda = rhs: CCT equality, diagonal ties, PSD, lambda >= 0.
void expect_in_te(const Lifted2& l2, const HermMatrix& x, double lambda, double tol) {
  const double cct_scale =
      std::max(1.0, l2.Hbar_B2.frobenius_norm() * x.frobenius_norm() + (l2.hbar_B2 + 1.0) * lambda);
  EXPECT_LE(std::abs(cct_value(l2, x, lambda) - 1.0), tol * cct_scale);
  for (Eigen::Index k = 0; k < x.dim(); ++k)
    EXPECT_LE(std::abs(x(k, k).real() - lambda), tol * (x.frobenius_norm() + lambda)) << k;
  EXPECT_GE(optkit::min_eigenvalue(x), -tol * std::max(1e-300, x.frobenius_norm()));
  EXPECT_GE(lambda, 0.0);
}

TEST(LiftEveSide, NoEveSurfaceChannels) {
  Draw d(1);
  ChannelSet ch = d.channels(3, 2, 2);
  ch.h_AIE.setZero();
  ch.h_IEE.setZero();
  ch.h_IEB.setZero();
  const CVector w = d.cvec(3), tb = d.unit_vec(2);
  const Lifted2 l = lift_eve_side(ch, w, tb, kUnitRadio);
  EXPECT_EQ(l.Hbar_E2.frobenius_norm(), 0.0);
  const HermMatrix x = d.psd(3, 2);
  EXPECT_DOUBLE_EQ(f_value(l, x, 0.7), 0.7 * (l.hbar_E2 + 1.0));
}

TEST(LiftEveSide, ScalarSymbolicExpansion) {
  Draw d(2);
  const ChannelSet ch = d.channels(2, 1, 1);
  const CVector w = d.cvec(2), tb = d.unit_vec(1);
  const double s2e = 0.25, s2b = 2.0;
  // Eve: |e + a t|^2 / s2 with a = h_IEE h_AIE w and e = (h_AE + h_IBE t_B h_AIB) w
  const Complex a = ch.h_IEE(0) * (ch.h_AIE.row(0) * w)(0);
  const Complex e = (ch.h_AE.transpose() * w)(0) + ch.h_IBE(0) * tb(0) * (ch.h_AIB.row(0) * w)(0);
  const Complex ab = ch.h_IEB(0) * (ch.h_AIE.row(0) * w)(0);
  const Complex eb = (ch.h_AB.transpose() * w)(0) + ch.h_IBB(0) * tb(0) * (ch.h_AIB.row(0) * w)(0);
  const Lifted2 l = lift_eve_side(ch, w, tb, {1.0, s2b, s2e});
  EXPECT_NEAR(std::abs(l.Hbar_E2(0, 0) - std::norm(a) / s2e), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(l.Hbar_E2(0, 1) - std::conj(a) * e / s2e), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(l.Hbar_E2(1, 0) - std::conj(e) * a / s2e), 0.0, 1e-12);
  EXPECT_EQ(l.Hbar_E2(1, 1), Complex(0.0, 0.0));
  EXPECT_NEAR(l.hbar_E2, std::norm(e) / s2e, 1e-12);
  EXPECT_NEAR(std::abs(l.Hbar_B2(0, 1) - std::conj(ab) * eb / s2b), 0.0, 1e-12);
  EXPECT_EQ(l.Hbar_B2(1, 1), Complex(0.0, 0.0));
  EXPECT_NEAR(l.hbar_B2, std::norm(eb) / s2b, 1e-12);
  EXPECT_NEAR((l.Q.mat() - w * w.adjoint()).norm(), 0.0, 1e-15);
}

TEST(LiftEveSide, IdentityOn200Instances) {
  Draw d(3);
  for (int inst = 0; inst < 200; ++inst) {
    const int m = 1 + inst % 4, nb = 1 + inst % 5, ne = 1 + (inst / 5) % 6;
    const ChannelSet ch = d.channels(m, nb, ne);
    const CVector w = d.cvec(m), tb = d.unit_vec(nb), te = d.unit_vec(ne);
    const RadioParams rp{1.0, d.uniform(0.1, 2.0), d.uniform(0.1, 2.0)};
    const double lambda = d.uniform(0.01, 3.0);
    const Lifted2 l = lift_eve_side(ch, w, tb, rp);
    const HermMatrix x = rank_one(te, lambda);
    const double want_e = lambda * (snr_e(ch, w, tb, te, rp.sigma2_E) + 1.0);
    const double want_b = lambda * (snr_b(ch, w, tb, te, rp.sigma2_B) + 1.0);
    EXPECT_LE(std::abs(f_value(l, x, lambda) - want_e), 1e-9 * want_e) << inst;
    EXPECT_LE(std::abs(cct_value(l, x, lambda) - want_b), 1e-9 * want_b) << inst;
    EXPECT_EQ(l.Hbar_E2(ne, ne), Complex(0.0, 0.0));
    EXPECT_EQ(l.Hbar_B2(ne, ne), Complex(0.0, 0.0));
  }
}

TEST(FValue, TrivialValues) {
  Draw d(4);
  const ChannelSet ch = d.channels(2, 2, 3);
  const Lifted2 l = lift_eve_side(ch, d.cvec(2), d.unit_vec(2), kUnitRadio);
  EXPECT_EQ(f_value(l, HermMatrix::zero(4), 0.0), 0.0);
  EXPECT_DOUBLE_EQ(f_value(l, HermMatrix::zero(4), 1.0), l.hbar_E2 + 1.0);
  EXPECT_THROW(f_value(l, HermMatrix::zero(3), 1.0), ContractViolation);
}

TEST(GradThetaB, TrivialZeros) {
  Draw d(5);
  ChannelSet ch = d.channels(2, 3, 2);
  const CVector w = d.cvec(2), tb = d.unit_vec(3), te = d.unit_vec(2);
  for (auto v : {GradientVariant::kConsistent, GradientVariant::kPrinted})
    EXPECT_EQ(grad_theta_b(ch, w, te, 0.0, kUnitRadio, tb, v).norm(), 0.0);
  ch.h_AIB.setZero();
  ch.h_IBE.setZero();
  for (auto v : {GradientVariant::kConsistent, GradientVariant::kPrinted})
    EXPECT_EQ(grad_theta_b(ch, w, te, 0.8, kUnitRadio, tb, v).norm(), 0.0);
  EXPECT_THROW(grad_theta_b(ch, w, te, -1.0, kUnitRadio, tb), ContractViolation);
}

// f(theta_B + t D) - f(theta_B - t D) = 4 t Re(grad^H D) for the quadratic f.
double directional_fd(const ChannelSet& ch, const CVector& w, const CVector& tb, const HermMatrix& x, double lambda,
                      const RadioParams& rp, const CVector& dir, double t) {
  const double up = f_value(lift_eve_side(ch, w, tb + t * dir, rp), x, lambda);
  const double dn = f_value(lift_eve_side(ch, w, tb - t * dir, rp), x, lambda);
  return (up - dn) / (2.0 * t);
}

TEST(GradThetaB, FiniteDifferenceOn50Instances) {
  Draw d(6);
  const double t = 1e-6;
  for (int inst = 0; inst < 50; ++inst) {
    const int m = 1 + inst % 4, nb = 1 + inst % 6, ne = 1 + inst % 3;
    const ChannelSet ch = d.channels(m, nb, ne);
    const CVector w = d.cvec(m), tb = d.unit_vec(nb), te = d.unit_vec(ne);
    const RadioParams rp{1.0, d.uniform(0.2, 2.0), d.uniform(0.2, 2.0)};
    const double lambda = d.uniform(0.05, 2.0);
    const CVector g = grad_theta_b(ch, w, te, lambda, rp, tb).diagonal();
    for (int k = 0; k < 20; ++k) {
      const CVector dir = d.cvec(nb);
      const double fd = directional_fd(ch, w, tb, rank_one(te, lambda), lambda, rp, dir, t);
      const double an = 2.0 * (g.adjoint() * dir)(0).real();
      EXPECT_LE(std::abs(fd - an), 1e-4 * std::abs(an)) << inst << " " << k;
    }
  }
}

TEST(GradThetaB, GeneralPsdMatchesFiniteDifference) {
  Draw d(7);
  for (int inst = 0; inst < 20; ++inst) {
    const ChannelSet ch = d.channels(3, 4, 3);
    const CVector w = d.cvec(3), tb = d.unit_vec(4);
    const HermMatrix x = d.psd(4, 3);
    const double lambda = d.uniform(0.1, 1.0);
    const CVector g = grad_theta_b(ch, w, x, lambda, kUnitRadio, tb);
    for (int k = 0; k < 5; ++k) {
      const CVector dir = d.cvec(4);
      const double fd = directional_fd(ch, w, tb, x, lambda, kUnitRadio, dir, 1e-6);
      const double an = 2.0 * (g.adjoint() * dir)(0).real();
      EXPECT_LE(std::abs(fd - an), 1e-4 * std::abs(an));
    }
  }
}

TEST(GradThetaB, PrintedVariantFailsFiniteDifference) {
  Draw d(8);
  int failures = 0;
  for (int inst = 0; inst < 10; ++inst) {
    const ChannelSet ch = d.channels(2, 3, 2);
    const CVector w = d.cvec(2), tb = d.unit_vec(3), te = d.unit_vec(2);
    const CVector g = grad_theta_b(ch, w, te, 0.7, kUnitRadio, tb, GradientVariant::kPrinted).diagonal();
    const CVector dir = d.cvec(3);
    const double fd = directional_fd(ch, w, tb, rank_one(te, 0.7), 0.7, kUnitRadio, dir, 1e-6);
    const double an = 2.0 * (g.adjoint() * dir)(0).real();
    if (std::abs(fd - an) > 1e-4 * std::abs(fd)) ++failures;
  }
  EXPECT_GE(failures, 9);
}

GDAState random_state(Draw& d, const ChannelSet& ch, const RadioParams& rp) {
  const CVector tb = d.unit_vec(ch.N_B), te = d.unit_vec(ch.N_E);
  const CVector w = ao::optimal_beamformer(ch, tb, te, rp).w;
  return initial_state(ch, rp, tb, te, w);
}

TEST(DescendThetaB, ZeroGradientIsFixedPoint) {
  Draw d(9);
  const ChannelSet ch = d.channels(2, 3, 2);
  GDAState s = random_state(d, ch, kUnitRadio);
  s.lambda2 = 0.0;
  s.theta_tilde_E = HermMatrix::zero(3);
  const auto r = descend_theta_b(ch, kUnitRadio, s, GDAConfig{});
  EXPECT_EQ((r.theta_B - s.theta_B).norm(), 0.0);
}

TEST(DescendThetaB, SingleElementHandComputation) {
  Draw d(10);
  GDAConfig cfg;
  cfg.backtracking = false;
  int checked = 0;
  for (int inst = 0; inst < 40; ++inst) {
    const ChannelSet ch = d.channels(1, 1, 1);
    const GDAState s = random_state(d, ch, kUnitRadio);
    cfg.step_size = d.uniform(0.01, 0.5);
    const Complex g = grad_theta_b(ch, s.w, s.theta_tilde_E, s.lambda2, kUnitRadio, s.theta_B)(0);
    const Complex z = s.theta_B(0) - cfg.step_size * g;
    const Complex expect = z / std::abs(z);
    const auto r = descend_theta_b(ch, kUnitRadio, s, cfg);
    if (std::abs(expect - s.theta_B(0)) <= cfg.step_size * std::abs(g)) {
      EXPECT_NEAR(std::abs(r.theta_B(0) - expect), 0.0, 1e-12);
      ++checked;
    } else {
      // Same rotation direction, chord capped at the step length.
      EXPECT_NEAR(std::abs(r.theta_B(0) - s.theta_B(0)), cfg.step_size * std::abs(g), 1e-12);
      EXPECT_GT(std::arg(r.theta_B(0) / s.theta_B(0)) * std::arg(expect / s.theta_B(0)), 0.0);
    }
  }
  EXPECT_GT(checked, 10);
}

TEST(DescendThetaB, StepContinuity) {
  Draw d(11);
  for (auto mode : {ProjectionMode::kElementwise, ProjectionMode::kLinearized}) {
    for (int inst = 0; inst < 30; ++inst) {
      const ChannelSet ch = d.channels(2, 4, 3);
      const GDAState s = random_state(d, ch, kUnitRadio);
      GDAConfig cfg;
      cfg.projection = mode;
      cfg.step_size = d.uniform(1e-3, 1.0);
      const auto r = descend_theta_b(ch, kUnitRadio, s, cfg);
      EXPECT_LE((r.theta_B - s.theta_B).norm(), cfg.step_size * r.gradient.norm() * (1.0 + 1e-6));
      for (Eigen::Index m = 0; m < 4; ++m) EXPECT_NEAR(std::abs(r.theta_B(m)), 1.0, 1e-12);
    }
  }
  // Shrinking alpha shrinks the move linearly.
  const ChannelSet ch = d.channels(2, 4, 3);
  const GDAState s = random_state(d, ch, kUnitRadio);
  GDAConfig cfg;
  cfg.backtracking = false;
  double prev_ratio = -1.0;
  for (double a : {1e-4, 1e-5, 1e-6}) {
    cfg.step_size = a;
    const double moved = (descend_theta_b(ch, kUnitRadio, s, cfg).theta_B - s.theta_B).norm();
    if (prev_ratio > 0.0) EXPECT_NEAR(moved / a, prev_ratio, 1e-3 * prev_ratio);
    prev_ratio = moved / a;
  }
}

TEST(DescendThetaB, BacktrackingNeverIncreasesF) {
  Draw d(12);
  for (int inst = 0; inst < 30; ++inst) {
    const ChannelSet ch = d.channels(2, 3, 2);
    const GDAState s = random_state(d, ch, kUnitRadio);
    GDAConfig cfg;
    cfg.step_size = 5.0;
    const auto r = descend_theta_b(ch, kUnitRadio, s, cfg);
    const double before = f_value(lift_eve_side(ch, s.w, s.theta_B, kUnitRadio), s.theta_tilde_E, s.lambda2);
    const double after = f_value(lift_eve_side(ch, s.w, r.theta_B, kUnitRadio), s.theta_tilde_E, s.lambda2);
    EXPECT_LE(after, before * (1.0 + 1e-12));
  }
}

TEST(DescendThetaB, LinearizedMovesTowardCct) {
  Draw d(13);
  int closer = 0;
  for (int inst = 0; inst < 20; ++inst) {
    const ChannelSet ch = d.channels(2, 3, 2);
    const GDAState s = random_state(d, ch, kUnitRadio);
    GDAConfig cfg;
    cfg.step_size = 0.05;
    cfg.backtracking = false;
    const auto elem = descend_theta_b(ch, kUnitRadio, s, cfg);
    cfg.projection = ProjectionMode::kLinearized;
    const auto lin = descend_theta_b(ch, kUnitRadio, s, cfg);
    auto miss = [&](const CVector& tb) {
      return std::abs(cct_value(lift_eve_side(ch, s.w, tb, kUnitRadio), s.theta_tilde_E, s.lambda2) - 1.0);
    };
    if (miss(lin.theta_B) <= miss(elem.theta_B) + 1e-12) ++closer;
  }
  EXPECT_GE(closer, 15);
}

TEST(AscendThetaE, FeasibleStateWithZeroStepIsUnchanged) {
  Draw d(14);
  const ChannelSet ch = d.channels(2, 2, 3);
  const GDAState s = random_state(d, ch, kUnitRadio);
  const Lifted2 l = lift_eve_side(ch, s.w, s.theta_B, kUnitRadio);
  GDAConfig cfg;
  cfg.step_size = 0.0;
  const auto r = ascend_theta_e(l, s, cfg);
  EXPECT_LE((r.theta_tilde_E - s.theta_tilde_E).frobenius_norm(), 1e-8);
  EXPECT_NEAR(r.lambda2, s.lambda2, 1e-8);
}

TEST(AscendThetaE, PreProjectionLambdaStep) {
  Draw d(15);
  const ChannelSet ch = d.channels(2, 2, 3);
  const GDAState s = random_state(d, ch, kUnitRadio);
  const Lifted2 l = lift_eve_side(ch, s.w, s.theta_B, kUnitRadio);
  GDAConfig cfg;
  cfg.step_size = 0.3;
  const auto r = ascend_theta_e(l, s, cfg);
  const auto p = project_onto_te(l, s.theta_tilde_E, s.lambda2 + 0.3 * (l.hbar_E2 + 1.0), cfg.dykstra);
  EXPECT_NEAR((r.theta_tilde_E - p.x).frobenius_norm(), 0.0, 1e-14);
  EXPECT_NEAR(r.lambda2, p.aux, 1e-14);
  EXPECT_GT(0.3 * (l.hbar_E2 + 1.0), 0.0);
}

TEST(AscendThetaE, OutputInTe) {
  Draw d(16);
  for (int inst = 0; inst < 30; ++inst) {
    const ChannelSet ch = d.channels(1 + inst % 3, 2, 1 + inst % 4);
    GDAState s = random_state(d, ch, kUnitRadio);
    // Perturb the state off T_E while keeping it valid.
    s.theta_tilde_E = s.theta_tilde_E + d.psd(ch.N_E + 1, 1) * 0.1;
    s.lambda2 *= d.uniform(0.5, 2.0);
    const Lifted2 l = lift_eve_side(ch, s.w, s.theta_B, kUnitRadio);
    GDAConfig cfg;
    cfg.step_size = d.uniform(1e-3, 1.0);
    const auto r = ascend_theta_e(l, s, cfg);
    expect_in_te(l, r.theta_tilde_E, r.lambda2, 1e-6);
  }
}

TEST(ExtractThetaE, RankOneRecovery) {
  Draw d(17);
  const CVector te = d.unit_vec(5);
  const auto got = extract_theta_e(rank_one(te, 0.3), 0.3, PhaseDomain::continuous());
  EXPECT_LE((got - te).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(ExtractThetaE, NoisyRankOne) {
  Draw d(18);
  for (int inst = 0; inst < 20; ++inst) {
    const CVector te = d.unit_vec(4);
    HermMatrix x = rank_one(te, 1.0) + d.psd(5, 5) * (1e-6 / 5.0);
    const auto got = extract_theta_e(x, 1.0, PhaseDomain::continuous());
    EXPECT_LE((got - te).cwiseAbs().maxCoeff(), 1e-3);
  }
}

TEST(ExtractThetaE, BinaryLevelsAndDegenerateScale) {
  Draw d(19);
  const auto got = extract_theta_e(rank_one(d.unit_vec(6), 2.0), 2.0, PhaseDomain::discrete(2));
  for (Eigen::Index k = 0; k < got.size(); ++k)
    EXPECT_TRUE(got(k) == Complex(1.0, 0.0) || std::abs(got(k) + 1.0) < 1e-15) << got(k);
  EXPECT_THROW(extract_theta_e(HermMatrix::zero(3), 1e-13, PhaseDomain::continuous()), DomainError);
}

TEST(RunGda, SingleIterationBookkeeping) {
  Draw d(20);
  const ChannelSet ch = d.channels(2, 2, 2);
  GDAConfig cfg;
  cfg.max_iters = 1;
  const auto r = run_gda(ch, kUnitRadio, PhaseDomain::continuous(), PhaseDomain::continuous(), cfg, 1, 100);
  ASSERT_EQ(r.trace.size(), 4u);
  EXPECT_EQ(r.trace[0].step, StepLabel::kInit);
  EXPECT_EQ(r.trace[1].step, StepLabel::kThetaB);
  EXPECT_EQ(r.trace[2].step, StepLabel::kW);
  EXPECT_EQ(r.trace[3].step, StepLabel::kThetaE);
}

TEST(RunGda, NoEveSurfaceChannelsLeavesThetaEStepFlat) {
  Draw d(21);
  ChannelSet ch = d.channels(2, 3, 2);
  ch.h_AIE.setZero();
  ch.h_IEE.setZero();
  ch.h_IEB.setZero();
  GDAConfig cfg;
  cfg.max_iters = 5;
  cfg.tolerance = 1e-14;
  const auto r = run_gda(ch, kUnitRadio, PhaseDomain::continuous(), PhaseDomain::continuous(), cfg, 2, 100);
  for (std::size_t k = 1; k < r.trace.size(); ++k)
    if (r.trace[k].step == StepLabel::kThetaE) EXPECT_NEAR(r.trace[k].secrecy, r.trace[k - 1].secrecy, 1e-9);
}

TEST(RunGda, MicroInstanceBelowExhaustiveMaxMin) {
  Draw d(22);
  const PhaseDomain l2 = PhaseDomain::discrete(2);
  for (int inst = 0; inst < 10; ++inst) {
    const ChannelSet ch = d.channels(1, 1, 1);
    const auto r = run_gda(ch, kUnitRadio, l2, l2, GDAConfig{}, inst, 200);
    double maxmin = -1e300;
    for (double b : {1.0, -1.0}) {
      double inner = 1e300;
      for (double e : {1.0, -1.0}) {
        const CVector tb = CVector::Constant(1, b), te = CVector::Constant(1, e);
        const auto bf = ao::optimal_beamformer(ch, tb, te, kUnitRadio);
        inner = std::min(inner, model::secrecy_rate(ch, bf.w, tb, te, kUnitRadio).secrecy);
      }
      maxmin = std::max(maxmin, inner);
    }
    double worst = 1e300;
    for (double e : {1.0, -1.0})
      worst = std::min(worst, model::secrecy_rate(ch, r.beamformer.w, r.phases.theta_B, CVector::Constant(1, e),
                                                  kUnitRadio).secrecy);
    EXPECT_LE(worst, maxmin + 1e-9);
  }
}

TEST(RunGda, StatesStayInTeAtReferenceScale) {
  chansim::ScenarioSpec spec;
  spec.seed = 4;
  const auto ch = chansim::generate_channels(spec);
  const RadioParams rp = reference_radio();
  GDAConfig cfg;
  cfg.tolerance = 1e-14;
  for (int iters = 1; iters <= 4; ++iters) {
    cfg.max_iters = iters;
    const auto r = run_gda(ch, rp, PhaseDomain::continuous(), PhaseDomain::continuous(), cfg, 4, 1000);
    const Lifted2 l = lift_eve_side(ch, r.state.w, r.state.theta_B, rp);
    expect_in_te(l, r.state.theta_tilde_E, r.state.lambda2, 1e-6);
    EXPECT_NO_THROW(r.state.validate());
    EXPECT_NO_THROW(r.phases.validate());
  }
}

TEST(RunGda, DeterministicPerSeed) {
  chansim::ScenarioSpec spec;
  spec.seed = 5;
  const auto ch = chansim::generate_channels(spec);
  GDAConfig cfg;
  cfg.max_iters = 6;
  const PhaseDomain l4 = PhaseDomain::discrete(4);
  const auto a = run_gda(ch, reference_radio(), l4, l4, cfg, 9, 500);
  const auto b = run_gda(ch, reference_radio(), l4, l4, cfg, 9, 500);
  ASSERT_EQ(a.trace.size(), b.trace.size());
  for (std::size_t k = 0; k < a.trace.size(); ++k) EXPECT_EQ(a.trace[k].secrecy, b.trace[k].secrecy);
  EXPECT_EQ((a.beamformer.w - b.beamformer.w).norm(), 0.0);
}

TEST(GDAConfig, Validation) {
  GDAConfig c;
  c.step_size = 0.0;
  EXPECT_THROW(c.validate(), ContractViolation);
  c = GDAConfig{};
  c.max_iters = 0;
  EXPECT_THROW(c.validate(), ContractViolation);
  c = GDAConfig{};
  c.tolerance = 0.0;
  EXPECT_THROW(c.validate(), ContractViolation);
}

}  // namespace
}  // namespace irssec::gda
