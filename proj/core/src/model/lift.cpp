// SPDX-License-Identifier: Apache-2.0
#include "irssec/model/lift.hpp"

#include "irssec/errors.hpp"

namespace irssec::model {

Complex Cascade::evaluate(const CVector& theta) const {
  if (theta.size() != coeff.size()) throw ContractViolation("Cascade: phase vector length mismatch");
  return base + (coeff.transpose() * theta)(0);
}

Cascade cascade(const ChannelSet& ch, const CVector& w, Receiver rx, Surface surface, const CVector& other) {
  if (w.size() != ch.M) throw ContractViolation("cascade: beamformer length does not match M");
  const bool bob_irs = surface == Surface::kBobIrs;
  if (other.size() != (bob_irs ? ch.N_E : ch.N_B))
    throw ContractViolation("cascade: fixed phase vector length does not match the other surface");

  const CVector theta_B = bob_irs ? CVector::Zero(ch.N_B) : other;
  const CVector theta_E = bob_irs ? other : CVector::Zero(ch.N_E);
  const CVector h0 = rx == Receiver::kBob ? effective_channel_bob(ch, theta_B, theta_E)
                                          : effective_channel_eve(ch, theta_B, theta_E);

  const CMatrix& to_irs = bob_irs ? ch.h_AIB : ch.h_AIE;
  const CVector& from_irs = bob_irs ? (rx == Receiver::kBob ? ch.h_IBB : ch.h_IBE)
                                    : (rx == Receiver::kBob ? ch.h_IEB : ch.h_IEE);
  Cascade c;
  c.base = (h0.transpose() * w)(0);
  c.coeff = from_irs.cwiseProduct(to_irs * w);
  return c;
}

double LiftedQuadratic::evaluate(const CVector& theta_bar) const {
  if (theta_bar.size() != mat.dim()) throw ContractViolation("LiftedQuadratic: dimension mismatch");
  return (theta_bar.adjoint() * mat.mat() * theta_bar)(0).real() + scalar;
}

LiftedQuadratic lift(const Cascade& c, double sigma2) {
  if (!(sigma2 > 0.0)) throw ContractViolation("lift: noise variance must be positive");
  const Eigen::Index n = c.coeff.size();
  // |b + a^T t|^2 = t^H conj(a) a^T t + 2 Re(t^H conj(a) b) + |b|^2
  const CVector a_conj = c.coeff.conjugate();
  CMatrix m = CMatrix::Zero(n + 1, n + 1);
  m.topLeftCorner(n, n) = a_conj * c.coeff.transpose();
  m.topRightCorner(n, 1) = a_conj * c.base;
  m.bottomLeftCorner(1, n) = (a_conj * c.base).adjoint();
  m /= sigma2;
  return {HermMatrix::symmetrized(m), std::norm(c.base) / sigma2};
}

CVector homogenize(const CVector& theta) {
  CVector tb(theta.size() + 1);
  tb.head(theta.size()) = theta;
  tb(theta.size()) = Complex(1.0, 0.0);
  return tb;
}

}  // namespace irssec::model
