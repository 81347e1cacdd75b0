// SPDX-License-Identifier: Apache-2.0
// Test-side helpers. Random draws use std::mt19937_64 so the oracles do not
// share a generator with the library under test.
#pragma once

#include <cmath>
#include <complex>
#include <random>

#include "irssec/model/channel.hpp"
#include "irssec/optkit/linalg.hpp"

namespace irssec::testing {

using optkit::CMatrix;
using optkit::Complex;
using optkit::CVector;
using optkit::HermMatrix;

class Draw {
 public:
  explicit Draw(std::uint64_t seed) : gen_(seed) {}

  double uniform(double lo = 0.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(gen_); }
  Complex cn() { return {normal() * std::sqrt(0.5), normal() * std::sqrt(0.5)}; }
  Complex unit() { return std::polar(1.0, uniform(0.0, 2.0 * M_PI)); }

  CVector cvec(Eigen::Index n) {
    CVector v(n);
    for (auto& x : v) x = cn();
    return v;
  }
  CVector unit_vec(Eigen::Index n) {
    CVector v(n);
    for (auto& x : v) x = unit();
    return v;
  }
  CMatrix cmat(Eigen::Index r, Eigen::Index c) {
    CMatrix m(r, c);
    for (Eigen::Index i = 0; i < r; ++i)
      for (Eigen::Index j = 0; j < c; ++j) m(i, j) = cn();
    return m;
  }
  HermMatrix herm(Eigen::Index n) {
    const CMatrix g = cmat(n, n);
    return HermMatrix::symmetrized(g + g.adjoint());
  }
  HermMatrix psd(Eigen::Index n, Eigen::Index rank) {
    const CMatrix g = cmat(n, rank);
    return HermMatrix::symmetrized(g * g.adjoint());
  }

  /// Random channel set with entries scaled so SNRs are O(1..100) at unit noise.
  model::ChannelSet channels(int m, int n_b, int n_e, double scale = 1.0) {
    model::ChannelSet ch;
    ch.M = m;
    ch.N_B = n_b;
    ch.N_E = n_e;
    ch.h_AB = scale * cvec(m);
    ch.h_AIB = scale * cmat(n_b, m);
    ch.h_IBB = scale * cvec(n_b);
    ch.h_IBE = scale * cvec(n_b);
    ch.h_AE = scale * cvec(m);
    ch.h_AIE = scale * cmat(n_e, m);
    ch.h_IEE = scale * cvec(n_e);
    ch.h_IEB = scale * cvec(n_e);
    return ch;
  }

  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b))); }

}  // namespace irssec::testing
