// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <Eigen/SVD>

#include "irssec/chansim/scenario.hpp"
#include "irssec/errors.hpp"

namespace irssec::chansim {
namespace {

using optkit::CMatrix;
using optkit::Complex;

TEST(PathLoss, SpecExamples) {
  EXPECT_DOUBLE_EQ(path_loss(1.0, 4.0, 0.0), 1.0);
  EXPECT_NEAR(path_loss(10.0, 2.0, 0.0), 0.1, 1e-16);
  const double a = path_loss(50.0, 4.0, -30.0);
  EXPECT_NEAR(a * a, 1.6e-10, 1e-24);
  EXPECT_THROW(path_loss(0.0, 2.0, 0.0), DomainError);
  EXPECT_THROW(path_loss(-3.0, 2.0, 0.0), DomainError);
}

TEST(Rng, StreamsAreReproducibleAndDistinct) {
  Rng a = Rng::stream(7, 1), b = Rng::stream(7, 1), c = Rng::stream(7, 2), d = Rng::stream(7, 1, 1);
  const auto x = a.next_u64();
  EXPECT_EQ(x, b.next_u64());
  EXPECT_NE(x, c.next_u64());
  EXPECT_NE(x, d.next_u64());
  Rng u(3);
  for (int i = 0; i < 10000; ++i) {
    const double v = u.uniform();
    ASSERT_GT(v, 0.0);
    ASSERT_LE(v, 1.0);
  }
}

TEST(Rng, ComplexNormalMoments) {
  Rng r(99);
  const int n = 200000;
  double re2 = 0.0, im2 = 0.0, cross = 0.0;
  Complex mean = 0.0;
  for (int i = 0; i < n; ++i) {
    const Complex z = r.complex_normal();
    mean += z;
    re2 += z.real() * z.real();
    im2 += z.imag() * z.imag();
    cross += z.real() * z.imag();
  }
  EXPECT_NEAR(std::abs(mean) / n, 0.0, 0.01);
  EXPECT_NEAR(re2 / n, 0.5, 0.01);
  EXPECT_NEAR(im2 / n, 0.5, 0.01);
  EXPECT_NEAR(cross / n, 0.0, 0.01);
}

TEST(CorrelatedMimo, UncorrelatedLimitCovariance) {
  Rng rng(5);
  const int draws = 100000;
  Eigen::Matrix4cd cov = Eigen::Matrix4cd::Zero();
  for (int t = 0; t < draws; ++t) {
    const CMatrix h = correlated_mimo(2, 2, 0.0, rng);
    const Eigen::Vector4cd v = Eigen::Map<const Eigen::Vector4cd>(h.data());
    cov += v * v.adjoint();
  }
  cov /= draws;
  EXPECT_LE((cov - Eigen::Matrix4cd::Identity()).cwiseAbs().maxCoeff(), 0.03);
}

TEST(CorrelatedMimo, ReceiveCorrelationMoment) {
  Rng rng(6);
  const int draws = 100000;
  Complex acc = 0.0;
  for (int t = 0; t < draws; ++t) {
    const CMatrix h = correlated_mimo(2, 2, 0.7, rng);
    acc += h(0, 0) * std::conj(h(1, 0));
  }
  EXPECT_NEAR(std::abs(acc / double(draws) - 0.7), 0.0, 0.03 * 0.7);
}

TEST(CorrelatedMimo, DeterministicAndRangeChecked) {
  Rng a(11), b(11);
  EXPECT_EQ(correlated_mimo(3, 2, 0.5, a), correlated_mimo(3, 2, 0.5, b));
  EXPECT_THROW(correlated_mimo(2, 2, 1.0, a), DomainError);
  EXPECT_THROW(correlated_mimo(2, 2, -0.1, a), DomainError);
}

bool same(const model::ChannelSet& x, const model::ChannelSet& y) {
  return x.h_AB == y.h_AB && x.h_AIB == y.h_AIB && x.h_IBB == y.h_IBB && x.h_IBE == y.h_IBE && x.h_AE == y.h_AE &&
         x.h_AIE == y.h_AIE && x.h_IEE == y.h_IEE && x.h_IEB == y.h_IEB;
}

TEST(GenerateChannels, DeterministicPerSeed) {
  ScenarioSpec s;
  s.seed = 1234;
  EXPECT_TRUE(same(generate_channels(s), generate_channels(s)));
  ScenarioSpec t = s;
  t.seed = 1235;
  EXPECT_FALSE(same(generate_channels(s), generate_channels(t)));
}

TEST(GenerateChannels, EmptyBobSurface) {
  ScenarioSpec s;
  s.N_B = 0;
  const auto ch = generate_channels(s);
  EXPECT_EQ(ch.h_AIB.rows(), 0);
  EXPECT_EQ(ch.h_IBB.size(), 0);
  const optkit::CVector te = optkit::CVector::Ones(s.N_E);
  const optkit::CVector expect = ch.h_AB + ch.h_AIE.transpose() * ch.h_IEB;
  EXPECT_LE((model::effective_channel_bob(ch, optkit::CVector(0), te) - expect).norm(), 1e-20);
}

TEST(GenerateChannels, FullRankOnEveryDraw) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    ScenarioSpec s;
    s.seed = seed;
    s.correlation_rho = 0.95;
    const auto ch = generate_channels(s);
    for (const CMatrix* h : {&ch.h_AIB, &ch.h_AIE}) {
      const Eigen::JacobiSVD<CMatrix> svd(*h);
      const auto& sv = svd.singularValues();
      ASSERT_GT(sv(sv.size() - 1), 1e-9 * sv(0));
    }
  }
}

TEST(GenerateChannels, DoublingDistancesQuartersReflectedPower) {
  ScenarioSpec s;
  s.seed = 77;
  ScenarioSpec d = s;
  for (Point2* p : {&d.geometry.alice, &d.geometry.bob, &d.geometry.eve, &d.geometry.irs_bob, &d.geometry.irs_eve}) {
    p->x *= 2.0;
    p->y *= 2.0;
  }
  const auto a = generate_channels(s), b = generate_channels(d);
  auto ratio = [](const CMatrix& x, const CMatrix& y) { return y.squaredNorm() / x.squaredNorm(); };
  EXPECT_NEAR(ratio(a.h_AIB, b.h_AIB), 0.25, 1e-14);
  EXPECT_NEAR(ratio(a.h_IBB, b.h_IBB), 0.25, 1e-14);
  EXPECT_NEAR(ratio(a.h_IEE, b.h_IEE), 0.25, 1e-14);
  EXPECT_NEAR(ratio(a.h_AIE, b.h_AIE), 0.25, 1e-14);
  EXPECT_NEAR(ratio(a.h_AB, b.h_AB), 1.0 / 16.0, 1e-14);
}

TEST(GenerateChannels, AverageLinkPowerMatchesPathLoss) {
  ScenarioSpec s;
  s.correlation_rho = 0.0;
  const Geometry& g = s.geometry;
  const int seeds = 10000;
  double p_ab = 0, p_aib = 0, p_ibb = 0, p_iee = 0;
  for (int k = 0; k < seeds; ++k) {
    s.seed = static_cast<std::uint64_t>(k);
    const auto ch = generate_channels(s);
    p_ab += ch.h_AB.squaredNorm() / s.M;
    p_aib += ch.h_AIB.squaredNorm() / (s.M * s.N_B);
    p_ibb += ch.h_IBB.squaredNorm() / s.N_B;
    p_iee += ch.h_IEE.squaredNorm() / s.N_E;
  }
  auto pl2 = [&](Point2 a, Point2 b, double e) { return std::pow(path_loss(distance(a, b), e, -30.0), 2); };
  EXPECT_NEAR(p_ab / seeds / pl2(g.alice, g.bob, 4.0), 1.0, 0.05);
  EXPECT_NEAR(p_aib / seeds / pl2(g.alice, g.irs_bob, 2.0), 1.0, 0.05);
  EXPECT_NEAR(p_ibb / seeds / pl2(g.irs_bob, g.bob, 2.0), 1.0, 0.05);
  EXPECT_NEAR(p_iee / seeds / pl2(g.irs_eve, g.eve, 2.0), 1.0, 0.05);
}

TEST(ScenarioSpec, Validation) {
  ScenarioSpec s;
  s.correlation_rho = 1.0;
  EXPECT_THROW(s.validate(), ContractViolation);
  s = ScenarioSpec{};
  s.geometry.eve = s.geometry.bob;
  EXPECT_THROW(s.validate(), ContractViolation);
  s = ScenarioSpec{};
  s.direct_exponent = -1.0;
  EXPECT_THROW(s.validate(), ContractViolation);
}

}  // namespace
}  // namespace irssec::chansim
