// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <numbers>

#include "irssec/errors.hpp"
#include "irssec/model/channel.hpp"
#include "irssec/model/lift.hpp"
#include "support.hpp"

namespace irssec::model {
namespace {

using std::numbers::pi;
using testing::Draw;

ChannelSet scalar_ones() {
  ChannelSet ch = ChannelSet::zeros(1, 1, 1);
  for (auto* v : {&ch.h_AB, &ch.h_IBB, &ch.h_IBE, &ch.h_AE, &ch.h_IEE, &ch.h_IEB}) v->setOnes();
  ch.h_AIB.setOnes();
  ch.h_AIE.setOnes();
  return ch;
}

TEST(Units, DbmToWatt) {
  EXPECT_DOUBLE_EQ(dbm_to_watt(30.0), 1.0);
  EXPECT_NEAR(dbm_to_watt(0.0), 1e-3, 1e-18);
  EXPECT_NEAR(dbm_to_watt(46.0), std::pow(10.0, 1.6), 1e-12);
  EXPECT_NEAR(dbm_to_watt(46.0), 39.8107, 1e-4);
}

TEST(Units, NoisePower) {
  EXPECT_NEAR(noise_power(-174.0, 1.0), std::pow(10.0, -20.4), 1e-32);
  EXPECT_NEAR(noise_power(-174.0, 5e6), 1.9905e-14, 1e-18);
  EXPECT_NEAR(noise_power(0.0, 1000.0), 1.0, 1e-12);
  EXPECT_THROW(noise_power(-174.0, 0.0), DomainError);
  EXPECT_THROW(noise_power(-174.0, -1.0), DomainError);
}

TEST(EffectiveChannel, DirectPathOnly) {
  Draw d(1);
  ChannelSet ch = ChannelSet::zeros(3, 2, 2);
  ch.h_AB = d.cvec(3);
  ch.h_AE = d.cvec(3);
  const auto pc = PhaseConfig::ones(2, 2);
  EXPECT_EQ(effective_channel_bob(ch, pc), ch.h_AB);
  EXPECT_EQ(effective_channel_eve(ch, pc), ch.h_AE);
}

TEST(EffectiveChannel, ScalarHandSums) {
  const ChannelSet ch = scalar_ones();
  PhaseConfig pc = PhaseConfig::ones(1, 1);
  EXPECT_NEAR(std::abs(effective_channel_bob(ch, pc)(0) - 3.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(effective_channel_eve(ch, pc)(0) - 3.0), 0.0, 1e-15);
  pc.theta_B(0) = std::polar(1.0, pi);
  EXPECT_NEAR(std::abs(effective_channel_bob(ch, pc)(0) - 1.0), 0.0, 1e-15);
}

TEST(EffectiveChannel, MatchesTermByTermEvaluation) {
  Draw d(2);
  for (int t = 0; t < 20; ++t) {
    const ChannelSet ch = d.channels(3, 4, 2);
    const CVector tb = d.unit_vec(4), te = d.unit_vec(2);
    CVector hb = ch.h_AB, he = ch.h_AE;
    for (int m = 0; m < 3; ++m) {
      for (int n = 0; n < 4; ++n) {
        hb(m) += ch.h_IBB(n) * tb(n) * ch.h_AIB(n, m);
        he(m) += ch.h_IBE(n) * tb(n) * ch.h_AIB(n, m);
      }
      for (int n = 0; n < 2; ++n) {
        hb(m) += ch.h_IEB(n) * te(n) * ch.h_AIE(n, m);
        he(m) += ch.h_IEE(n) * te(n) * ch.h_AIE(n, m);
      }
    }
    EXPECT_LE((effective_channel_bob(ch, tb, te) - hb).norm(), 1e-12);
    EXPECT_LE((effective_channel_eve(ch, tb, te) - he).norm(), 1e-12);
  }
}

TEST(EffectiveChannel, AffineInEachEntry) {
  Draw d(3);
  const ChannelSet ch = d.channels(2, 3, 3);
  const CVector tb = d.cvec(3), te = d.cvec(3);
  for (int m = 0; m < 3; ++m) {
    CVector zeroed = tb;
    zeroed(m) = 0.0;
    const CVector base = effective_channel_bob(ch, zeroed, te);
    CVector one = zeroed;
    one(m) = 1.0;
    const CVector slope = effective_channel_bob(ch, one, te) - base;
    for (double t : {-2.0, 0.5, 3.0}) {
      CVector scaled = zeroed;
      scaled(m) = t;
      EXPECT_LE((effective_channel_bob(ch, scaled, te) - base - t * slope).norm(), 1e-12);
    }
  }
}

TEST(EffectiveChannel, DimensionMismatch) {
  const ChannelSet ch = scalar_ones();
  EXPECT_THROW(effective_channel_bob(ch, CVector::Ones(2), CVector::Ones(1)), ContractViolation);
  ChannelSet bad = ch;
  bad.h_IBB = CVector::Ones(2);
  EXPECT_THROW(bad.validate(), ContractViolation);
}

TEST(SecrecyRate, PowersOfTwo) {
  ChannelSet ch = ChannelSet::zeros(1, 0, 0);
  const RadioParams rp{1.0, 1.0, 1.0};
  const CVector w = CVector::Ones(1);
  const auto zero = secrecy_rate(ch, w, CVector(0), CVector(0), rp);
  EXPECT_EQ(zero.secrecy, 0.0);
  EXPECT_EQ(zero.bob, 0.0);
  EXPECT_EQ(zero.eve, 0.0);

  ch.h_AB(0) = std::sqrt(3.0);
  ch.h_AE(0) = 1.0;
  EXPECT_NEAR(secrecy_rate(ch, w, CVector(0), CVector(0), rp).secrecy, 1.0, 1e-15);

  ch.h_AB(0) = 0.0;
  ch.h_AE(0) = std::sqrt(3.0);
  EXPECT_NEAR(secrecy_rate(ch, w, CVector(0), CVector(0), rp).secrecy, -2.0, 1e-15);
}

TEST(SecrecyRate, CommonPhaseRotationInvariance) {
  Draw d(4);
  const ChannelSet ch = d.channels(3, 4, 4);
  const RadioParams rp{1.0, 0.3, 0.7};
  const CVector w = d.cvec(3), tb = d.unit_vec(4), te = d.unit_vec(4);
  const double base = secrecy_rate(ch, w, tb, te, rp).secrecy;
  for (double phi : {0.3, 1.7, -2.9}) EXPECT_NEAR(secrecy_rate(ch, w * std::polar(1.0, phi), tb, te, rp).secrecy, base, 1e-12);
}

TEST(QuantizePhase, SpecExamples) {
  EXPECT_EQ(quantize_phase(std::polar(1.0, 0.1), 4), phase_level(0, 4));
  EXPECT_EQ(nearest_level(std::polar(1.0, pi / 4), 4), 0);
  EXPECT_EQ(nearest_level(std::polar(1.0, 3.0), 2), 1);
  EXPECT_NEAR(std::abs(quantize_phase(std::polar(1.0, 3.0), 2) + 1.0), 0.0, 1e-15);
  EXPECT_THROW(quantize_phase(Complex(2.0, 0.0), 4), ContractViolation);
  EXPECT_THROW(quantize_phase(Complex(1.0, 0.0), 1), ContractViolation);
}

TEST(QuantizePhase, ExhaustiveMinimizerAndExactMembership) {
  Draw d(5);
  for (int levels = 2; levels <= 8; ++levels) {
    for (int t = 0; t < 500; ++t) {
      const Complex z = d.unit();
      const Complex q = quantize_phase(z, levels);
      bool member = false;
      for (int k = 0; k < levels; ++k) {
        member = member || q == phase_level(k, levels);
        ASSERT_LE(std::abs(z - q), std::abs(z - phase_level(k, levels)) + 1e-12);
      }
      ASSERT_TRUE(member);
    }
  }
}

TEST(PhaseConfig, Validation) {
  PhaseConfig pc = PhaseConfig::ones(2, 2, PhaseDomain::discrete(4), PhaseDomain::discrete(4));
  EXPECT_NO_THROW(pc.validate());
  pc.theta_B(1) = std::polar(1.0, 0.3);
  EXPECT_THROW(pc.validate(), ContractViolation);
  pc.domain_B = PhaseDomain::continuous();
  EXPECT_NO_THROW(pc.validate());
  pc.theta_E(0) = 1.1;
  EXPECT_THROW(pc.validate(), ContractViolation);
  EXPECT_THROW(PhaseDomain::discrete(1), ContractViolation);
}

TEST(Lift, IdentityAgainstDirectEvaluation) {
  Draw d(6);
  for (int t = 0; t < 50; ++t) {
    const ChannelSet ch = d.channels(3, 4, 3);
    const CVector w = d.cvec(3), tb = d.unit_vec(4), te = d.unit_vec(3);
    const double s2 = d.uniform(0.1, 2.0);
    const double snr_b = received_gain(effective_channel_bob(ch, tb, te), w) / s2;
    const double snr_e = received_gain(effective_channel_eve(ch, tb, te), w) / s2;
    const auto lb = lift(cascade(ch, w, Receiver::kBob, Surface::kBobIrs, te), s2);
    const auto le = lift(cascade(ch, w, Receiver::kEve, Surface::kEveIrs, tb), s2);
    EXPECT_LE(testing::rel_err(lb.evaluate(homogenize(tb)), snr_b), 1e-9);
    EXPECT_LE(testing::rel_err(le.evaluate(homogenize(te)), snr_e), 1e-9);
    EXPECT_EQ(lb.mat(4, 4), Complex(0.0, 0.0));
  }
}

}  // namespace
}  // namespace irssec::model
