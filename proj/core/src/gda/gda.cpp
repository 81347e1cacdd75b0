// SPDX-License-Identifier: Apache-2.0
#include "irssec/gda/gda.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "irssec/ao/ao.hpp"
#include "irssec/chansim/rng.hpp"
#include "irssec/errors.hpp"
#include "irssec/model/lift.hpp"

namespace irssec::gda {
namespace {

using model::Complex;
using model::Receiver;
using model::Surface;

// Same stream as AO so that both methods start from the same phases.
constexpr std::uint64_t kInitStream = 0xA0;

HermMatrix unit_diag(Eigen::Index n, Eigen::Index k) {
  CMatrix m = CMatrix::Zero(n, n);
  m(k, k) = 1.0;
  return HermMatrix(m);
}

void check_theta_tilde(const HermMatrix& x, Eigen::Index n, const char* where) {
  if (x.dim() != n) {
    std::ostringstream os;
    os << where << ": Thetatilde_E is " << x.dim() << "x" << x.dim() << ", expected " << n << "x" << n;
    throw ContractViolation(os.str());
  }
}

// d/d conj(theta_B) of tr(Hbar(theta_B) X) + lambda (hbar(theta_B) + 1) for one
// receiver, where Hbar, hbar lift that receiver over Eve's IRS. Only the last
// column t of X enters: the receiver's base s0(theta_B) = e0 + g^T theta_B
// appears in Hbar through conj(a) s0 and in hbar through |s0|^2.
CVector cct_like_gradient(const model::ChannelSet& ch, const CVector& w, const HermMatrix& x, double lambda,
                          const CVector& theta_B, Receiver rx, double sigma2) {
  const CVector zero_E = CVector::Zero(ch.N_E);
  const model::Cascade over_eve = model::cascade(ch, w, rx, Surface::kEveIrs, theta_B);
  const CVector g = model::cascade(ch, w, rx, Surface::kBobIrs, zero_E).coeff;
  const Eigen::Index n = ch.N_E;
  const CVector t = x.mat().col(n).head(n);
  const Complex inner = (over_eve.coeff.transpose() * t)(0) + lambda * over_eve.base;
  return g.conjugate() * (inner / sigma2);
}

// Keeps |theta'_m - theta_m| <= |delta_m| by shortening the rotation when the
// renormalized entry lands farther away than the unprojected step.
Complex capped_move(Complex from, Complex to, double max_chord) {
  const double chord = std::abs(to - from);
  if (chord <= max_chord) return to;
  const double full = std::arg(to / from);
  const double limit = 2.0 * std::asin(std::min(1.0, max_chord / 2.0));
  return from * std::polar(1.0, std::copysign(limit, full));
}

CVector project_step(const CVector& theta, const CVector& target) {
  CVector out(theta.size());
  for (Eigen::Index m = 0; m < theta.size(); ++m) {
    const double mag = std::abs(target(m));
    if (mag == 0.0) {
      out(m) = theta(m);
      continue;
    }
    out(m) = capped_move(theta(m), target(m) / mag, std::abs(target(m) - theta(m)));
  }
  return out;
}

}  // namespace

Lifted2 lift_eve_side(const model::ChannelSet& ch, const CVector& w, const CVector& theta_B,
                      const model::RadioParams& rp) {
  ch.validate();
  rp.validate();
  if (theta_B.size() != ch.N_B) throw ContractViolation("lift_eve_side: theta_B length does not match N_B");
  const auto bob = model::lift(model::cascade(ch, w, Receiver::kBob, Surface::kEveIrs, theta_B), rp.sigma2_B);
  const auto eve = model::lift(model::cascade(ch, w, Receiver::kEve, Surface::kEveIrs, theta_B), rp.sigma2_E);
  return {bob.mat, eve.mat, bob.scalar, eve.scalar, HermMatrix::outer(w)};
}

double f_value(const Lifted2& l2, const HermMatrix& theta_tilde_E, double lambda2) {
  check_theta_tilde(theta_tilde_E, l2.Hbar_E2.dim(), "f_value");
  return l2.Hbar_E2.inner(theta_tilde_E) + lambda2 * (l2.hbar_E2 + 1.0);
}

double cct_value(const Lifted2& l2, const HermMatrix& theta_tilde_E, double lambda2) {
  check_theta_tilde(theta_tilde_E, l2.Hbar_B2.dim(), "cct_value");
  return l2.Hbar_B2.inner(theta_tilde_E) + lambda2 * (l2.hbar_B2 + 1.0);
}

CMatrix grad_theta_b(const model::ChannelSet& ch, const CVector& w, const CVector& theta_E, double lambda2,
                     const model::RadioParams& rp, const CVector& theta_B, GradientVariant variant) {
  if (lambda2 < 0.0) throw ContractViolation("grad_theta_b: lambda2 must be nonnegative");
  if (theta_E.size() != ch.N_E || theta_B.size() != ch.N_B)
    throw ContractViolation("grad_theta_b: phase vector length mismatch");
  if (variant == GradientVariant::kConsistent) {
    const CVector tb = model::homogenize(theta_E);
    const HermMatrix x = HermMatrix::outer(tb) * lambda2;
    return grad_theta_b(ch, w, x, lambda2, rp, theta_B).asDiagonal();
  }
  // lambda2 (conj(h_AIB) A^H theta_E conj(h_IBE) + conj(h_IBE)^T e Q^T h_AIB^H / sigma2_E)
  // with A = diag(conj(h_IEE)) conj(h_AIE) conj(w) w^T and e the row h_AE + h_IBE Theta_B h_AIB.
  const CMatrix a = ch.h_IEE.conjugate().asDiagonal() * ch.h_AIE.conjugate() * w.conjugate() * w.transpose();
  const CVector e = ch.h_AE + ch.h_AIB.transpose() * ch.h_IBE.cwiseProduct(theta_B);
  const CMatrix q = w * w.adjoint();
  const CMatrix first = (ch.h_AIB.conjugate() * a.adjoint() * theta_E) * ch.h_IBE.adjoint();
  const CMatrix second = ch.h_IBE.conjugate() * (e.transpose() * q.transpose() * ch.h_AIB.adjoint());
  return lambda2 * (first + second / rp.sigma2_E);
}

CVector grad_theta_b(const model::ChannelSet& ch, const CVector& w, const HermMatrix& theta_tilde_E,
                     double lambda2, const model::RadioParams& rp, const CVector& theta_B) {
  if (lambda2 < 0.0) throw ContractViolation("grad_theta_b: lambda2 must be nonnegative");
  check_theta_tilde(theta_tilde_E, ch.N_E + 1, "grad_theta_b");
  return cct_like_gradient(ch, w, theta_tilde_E, lambda2, theta_B, Receiver::kEve, rp.sigma2_E);
}

void GDAConfig::validate() const {
  if (!(step_size > 0.0) || !std::isfinite(step_size)) throw ContractViolation("GDAConfig: step size must be > 0");
  if (max_iters < 1) throw ContractViolation("GDAConfig: max_iters must be >= 1");
  if (!(tolerance > 0.0)) throw ContractViolation("GDAConfig: tolerance must be > 0");
  if (max_halvings < 0) throw ContractViolation("GDAConfig: max_halvings must be >= 0");
}

void GDAState::validate() const {
  for (Eigen::Index m = 0; m < theta_B.size(); ++m)
    if (std::abs(std::abs(theta_B(m)) - 1.0) > 1e-9) throw ContractViolation("GDAState: theta_B is not unit-modulus");
  if (theta_tilde_E.dim() > 0 && optkit::min_eigenvalue(theta_tilde_E) < -1e-8)
    throw ContractViolation("GDAState: Thetatilde_E is not PSD");
  if (lambda2 < 0.0) throw ContractViolation("GDAState: lambda2 is negative");
}

DescentResult descend_theta_b(const model::ChannelSet& ch, const model::RadioParams& rp, const GDAState& state,
                              const GDAConfig& config) {
  config.validate();
  state.validate();
  DescentResult out;
  if (config.gradient == GradientVariant::kConsistent) {
    out.gradient = grad_theta_b(ch, state.w, state.theta_tilde_E, state.lambda2, rp, state.theta_B);
  } else {
    const CVector theta_E = extract_theta_e(state.theta_tilde_E, state.lambda2, PhaseDomain::continuous());
    out.gradient = grad_theta_b(ch, state.w, theta_E, state.lambda2, rp, state.theta_B, config.gradient).diagonal();
  }
  const double gnorm = out.gradient.norm();
  if (gnorm == 0.0) {
    out.theta_B = state.theta_B;
    return out;
  }

  const Lifted2 here = lift_eve_side(ch, state.w, state.theta_B, rp);
  const double f0 = f_value(here, state.theta_tilde_E, state.lambda2);

  // Bob's CCT function of theta_B and its conjugate gradient, for the linearized mode.
  double g0 = 0.0;
  CVector big_g;
  if (config.projection == ProjectionMode::kLinearized) {
    g0 = cct_value(here, state.theta_tilde_E, state.lambda2);
    big_g = cct_like_gradient(ch, state.w, state.theta_tilde_E, state.lambda2, state.theta_B, Receiver::kBob,
                              rp.sigma2_B);
  }

  double step = config.step_size;
  for (int h = 0;; ++h) {
    CVector target = state.theta_B - step * out.gradient;
    if (config.projection == ProjectionMode::kLinearized && big_g.squaredNorm() > 0.0) {
      // Nearest point of the hyperplane g(theta^r) + 2 Re(G^H (theta - theta^r)) = 1.
      const double lin = g0 + 2.0 * (big_g.adjoint() * (target - state.theta_B))(0).real();
      target -= (lin - 1.0) / (2.0 * big_g.squaredNorm()) * big_g;
    }
    CVector cand = project_step(state.theta_B, target);
    // The hyperplane shift may move farther than the gradient step allows.
    const double bound = step * gnorm;
    const double moved = (cand - state.theta_B).norm();
    if (moved > bound) {
      const double shrink = bound / moved;
      for (Eigen::Index m = 0; m < cand.size(); ++m)
        cand(m) = capped_move(state.theta_B(m), cand(m), shrink * std::abs(cand(m) - state.theta_B(m)));
    }
    if (!config.backtracking ||
        f_value(lift_eve_side(ch, state.w, cand, rp), state.theta_tilde_E, state.lambda2) <= f0) {
      out.theta_B = cand;
      out.step = step;
      return out;
    }
    if (h >= config.max_halvings) {
      out.theta_B = state.theta_B;
      return out;
    }
    step *= 0.5;
  }
}

optkit::ProjectionResult project_onto_te(const Lifted2& l2, const HermMatrix& x0, double lambda0,
                                         const optkit::ProjectionOptions& opt) {
  const Eigen::Index n = l2.Hbar_B2.dim();
  check_theta_tilde(x0, n, "project_onto_te");
  std::vector<optkit::LinearRow> eq;
  eq.reserve(static_cast<std::size_t>(n) + 1);
  eq.push_back({l2.Hbar_B2, l2.hbar_B2 + 1.0, 1.0});
  for (Eigen::Index k = 0; k < n; ++k) eq.push_back({unit_diag(n, k), -1.0, 0.0});
  const std::vector<optkit::LinearRow> half{{HermMatrix::zero(n), -1.0, 0.0}};
  optkit::ProjectionOptions o = opt;
  if (!o.restore) {
    // Rescale X to unit diagonal (a congruence, so PSD is kept), then pick the
    // lambda that meets the CCT equality and scale back.
    o.restore = [&l2](HermMatrix& x, double& lambda) {
      const Eigen::VectorXd d = x.mat().diagonal().real();
      if (d.minCoeff() <= 0.0) return;
      const Eigen::VectorXd s = d.cwiseSqrt().cwiseInverse();
      const auto c = HermMatrix::symmetrized(s.asDiagonal() * x.mat() * s.asDiagonal());
      const double denom = l2.Hbar_B2.inner(c) + l2.hbar_B2 + 1.0;
      if (!(denom > 0.0)) return;
      lambda = 1.0 / denom;
      x = c * lambda;
    };
  }
  return optkit::project_affine_psd(x0, lambda0, eq, half, o);
}

AscentResult ascend_theta_e(const Lifted2& l2, const GDAState& state, const GDAConfig& config) {
  state.validate();
  if (!(config.step_size >= 0.0)) throw ContractViolation("ascend_theta_e: step size must be >= 0");
  AscentResult out;
  out.step = config.step_size;
  const double lambda_pre = state.lambda2 + config.step_size * (l2.hbar_E2 + 1.0);
  out.projection = project_onto_te(l2, state.theta_tilde_E, lambda_pre, config.dykstra);
  out.theta_tilde_E = out.projection.x;
  out.lambda2 = std::max(0.0, out.projection.aux);
  return out;
}

CVector extract_theta_e(const HermMatrix& theta_tilde_E, double lambda2, PhaseDomain domain) {
  if (!(lambda2 > 1e-12)) throw DomainError("extract_theta_e: lambda2 is too small to rescale Thetatilde_E");
  const Eigen::Index n = theta_tilde_E.dim();
  if (n < 1) throw ContractViolation("extract_theta_e: empty matrix");
  const auto eig = optkit::hermitian_eig(theta_tilde_E * (1.0 / lambda2));
  const CVector v = eig.vectors.col(n - 1);
  const Complex last = v(n - 1);
  if (std::abs(last) == 0.0) return model::project_to_domain(v.head(n - 1), domain);
  return model::project_to_domain(v.head(n - 1) / last, domain);
}

GDAState initial_state(const model::ChannelSet& ch, const model::RadioParams& rp, const CVector& theta_B,
                       const CVector& theta_E, const CVector& w) {
  GDAState s;
  s.theta_B = theta_B;
  s.w = w;
  const double snr_b = model::received_gain(model::effective_channel_bob(ch, theta_B, theta_E), w) / rp.sigma2_B;
  s.lambda2 = 1.0 / (snr_b + 1.0);
  s.theta_tilde_E = HermMatrix::outer(model::homogenize(theta_E)) * s.lambda2;
  return s;
}

GDAResult run_gda(const model::ChannelSet& ch, const model::RadioParams& rp, PhaseDomain domain_B,
                  PhaseDomain domain_E, const GDAConfig& config, std::uint64_t seed, int init_randomization_count) {
  config.validate();
  ch.validate();
  rp.validate();
  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed_ms = [&] {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  };
  chansim::Rng rng = chansim::Rng::stream(seed, kInitStream);

  GDAResult res;
  model::PhaseConfig& pc = res.phases;
  pc.domain_B = domain_B;
  pc.domain_E = domain_E;
  const ao::InitialPhases init = ao::init_phases(ch, domain_B, domain_E, rng, init_randomization_count);
  pc.theta_B = init.theta_B;
  pc.theta_E = init.theta_E;
  res.beamformer = ao::optimal_beamformer(ch, pc.theta_B, pc.theta_E, rp);
  res.state = initial_state(ch, rp, pc.theta_B, pc.theta_E, res.beamformer.w);

  auto record = [&](int it, StepLabel step) {
    const auto r = model::secrecy_rate(ch, res.beamformer, pc, rp);
    res.trace.push_back(TraceRecord::from_rates(it, step, r, elapsed_ms()));
    return r.secrecy;
  };
  double prev = record(0, StepLabel::kInit);

  GDAState& s = res.state;
  for (int it = 1; it <= config.max_iters; ++it) {
    s.iteration = it;
    s.theta_B = descend_theta_b(ch, rp, s, config).theta_B;
    pc.theta_B = model::project_to_domain(s.theta_B, domain_B);
    record(it, StepLabel::kThetaB);

    res.beamformer = ao::optimal_beamformer(ch, pc.theta_B, pc.theta_E, rp);
    s.w = res.beamformer.w;
    record(it, StepLabel::kW);

    const AscentResult up = ascend_theta_e(lift_eve_side(ch, s.w, s.theta_B, rp), s, config);
    s.theta_tilde_E = up.theta_tilde_E;
    s.lambda2 = up.lambda2;
    pc.theta_E = extract_theta_e(s.theta_tilde_E, s.lambda2, domain_E);
    const double cs = record(it, StepLabel::kThetaE);
    res.iterations = it;
    if (std::abs(cs - prev) <= config.tolerance) {
      res.converged = true;
      break;
    }
    prev = cs;
  }
  return res;
}

}  // namespace irssec::gda
