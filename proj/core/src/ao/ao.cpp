// SPDX-License-Identifier: Apache-2.0
#include "irssec/ao/ao.hpp"

#include <chrono>
#include <cmath>

#include "irssec/errors.hpp"
#include "irssec/optkit/sdp.hpp"

namespace irssec::ao {
namespace {

using model::Receiver;
using model::Surface;
using optkit::CMatrix;
using optkit::Complex;
using optkit::RVector;

constexpr std::uint64_t kAoStream = 0xA0;

HermMatrix unit_diag(Eigen::Index n, Eigen::Index k) {
  RVector e = RVector::Zero(n);
  e(k) = 1.0;
  return HermMatrix::diagonal(e);
}

LiftedForms to_forms(const model::LiftedQuadratic& q, Receiver side) { return {q.mat, q.scalar, side}; }

double ratio(const LiftedForms& num, const LiftedForms& den, const CVector& theta_bar) {
  return (num.snr(theta_bar) + 1.0) / (den.snr(theta_bar) + 1.0);
}

/// Draws candidates from CN(0, cov) and maps each to a feasible phase vector:
/// divide by the last coordinate, then project entrywise onto the domain.
class Randomizer {
 public:
  Randomizer(const HermMatrix& cov, PhaseDomain domain) : domain_(domain) {
    const auto eig = optkit::hermitian_eig(cov);
    root_ = eig.vectors * eig.values.cwiseMax(0.0).cwiseSqrt().asDiagonal();
    principal_ = eig.vectors.col(eig.values.size() - 1);
  }

  CVector principal() const { return to_phases(principal_); }

  CVector draw(chansim::Rng& rng) const {
    CVector z(root_.cols());
    for (auto& v : z) v = rng.complex_normal();
    return to_phases(root_ * z);
  }

 private:
  CVector to_phases(const CVector& xi) const {
    const Eigen::Index n = xi.size() - 1;
    const Complex last = xi(n);
    const CVector head = std::abs(last) > 0.0 ? CVector(xi.head(n) / last) : CVector(xi.head(n));
    return model::project_to_domain(head, domain_);
  }

  PhaseDomain domain_;
  CMatrix root_;
  CVector principal_;
};

struct Pick {
  CVector theta;
  double score;
};

template <class Score>
Pick best_candidate(const Randomizer& r, chansim::Rng& rng, int count, Score&& score) {
  Pick best{r.principal(), 0.0};
  best.score = score(best.theta);
  for (int k = 0; k < count; ++k) {
    CVector c = r.draw(rng);
    const double s = score(c);
    if (s > best.score) best = {std::move(c), s};
  }
  return best;
}

// Lifted form plus the constant 1 spread over the diagonal as I/n.
CMatrix homogeneous_form(const LiftedForms& f, Eigen::Index n) {
  CMatrix m = f.Hbar.mat() + CMatrix::Identity(n, n) / static_cast<double>(n);
  m(n - 1, n - 1) += f.hbar;
  return m;
}

CVector unit_vector(Eigen::Index n, Eigen::Index k) {
  CVector e = CVector::Zero(n);
  e(k) = 1.0;
  return e;
}

}  // namespace

double LiftedForms::snr(const CVector& theta_bar) const {
  if (theta_bar.size() != Hbar.dim()) throw ContractViolation("LiftedForms: dimension mismatch");
  return (theta_bar.adjoint() * Hbar.mat() * theta_bar)(0).real() + hbar;
}

LiftPair lift_bob_side(const model::ChannelSet& ch, const CVector& w, const CVector& theta_E,
                       const model::RadioParams& rp) {
  return {to_forms(model::lift(model::cascade(ch, w, Receiver::kBob, Surface::kBobIrs, theta_E), rp.sigma2_B),
                   Receiver::kBob),
          to_forms(model::lift(model::cascade(ch, w, Receiver::kEve, Surface::kBobIrs, theta_E), rp.sigma2_E),
                   Receiver::kEve)};
}

LiftPair lift_over_eve_irs(const model::ChannelSet& ch, const CVector& w, const CVector& theta_B,
                           const model::RadioParams& rp) {
  return {to_forms(model::lift(model::cascade(ch, w, Receiver::kBob, Surface::kEveIrs, theta_B), rp.sigma2_B),
                   Receiver::kBob),
          to_forms(model::lift(model::cascade(ch, w, Receiver::kEve, Surface::kEveIrs, theta_B), rp.sigma2_E),
                   Receiver::kEve)};
}

PhaseStepResult maximize_ratio(const LiftedForms& num, const LiftedForms& den, PhaseDomain domain,
                               chansim::Rng& rng, const CVector& incumbent, const RandomizationOptions& opt) {
  const Eigen::Index n = num.Hbar.dim();
  if (den.Hbar.dim() != n || incumbent.size() != n - 1)
    throw ContractViolation("maximize_ratio: lifted forms and incumbent disagree in dimension");
  if (opt.count < 1) throw ContractViolation("maximize_ratio: randomization count must be >= 1");

  PhaseStepResult out;
  out.incumbent_objective = ratio(num, den, model::homogenize(incumbent));
  if (n == 1) {
    out.theta = incumbent;
    out.objective = out.sdp_bound = out.incumbent_objective;
    out.relaxed = HermMatrix::identity(1);
    out.kept_incumbent = true;
    return out;
  }

  // On the feasible set diag = 1, so the constant 1 equals tr(Theta)/n and both
  // forms become homogeneous: A = full(num) + I/n, B = full(den) + I/n with B > 0.
  // Charnes-Cooper form in Y = B^{1/2} X B^{1/2}: maximize tr(B^{-1/2} A B^{-1/2} Y)
  // s.t. tr(Y) = 1 and equal diagonals of X = B^{-1/2} Y B^{-1/2}.
  const CMatrix a_full = homogeneous_form(num, n);
  const CMatrix b_full = homogeneous_form(den, n);
  const auto eig = optkit::hermitian_eig(HermMatrix::symmetrized(b_full));
  const CMatrix b_isqrt = eig.vectors * eig.values.cwiseSqrt().cwiseInverse().asDiagonal() * eig.vectors.adjoint();
  optkit::SdpProblem p;
  p.objective = HermMatrix::symmetrized(b_isqrt * a_full * b_isqrt);
  p.constraints.push_back({HermMatrix::identity(n), 0.0, 1.0});
  const CVector last = b_isqrt.col(n - 1);
  for (Eigen::Index k = 0; k + 1 < n; ++k) {
    const CVector u = b_isqrt.col(k);
    p.constraints.push_back({HermMatrix::symmetrized(u * u.adjoint() - last * last.adjoint()), 0.0, 0.0});
  }
  const auto sol = optkit::solve_sdp(p);
  out.sdp_bound = sol.value;
  const CMatrix x = b_isqrt * sol.x.mat() * b_isqrt;
  out.relaxed = HermMatrix::symmetrized(x / x.diagonal().real().mean());

  const Randomizer r(out.relaxed, domain);
  const Pick best = best_candidate(r, rng, opt.count, [&](const CVector& t) {
    return ratio(num, den, model::homogenize(t));
  });
  if (opt.incumbent_protection && !(best.score > out.incumbent_objective)) {
    out.theta = incumbent;
    out.objective = out.incumbent_objective;
    out.kept_incumbent = true;
  } else {
    out.theta = best.theta;
    out.objective = best.score;
  }
  return out;
}

PhaseStepResult solve_theta_b(const LiftPair& lifts, PhaseDomain domain, chansim::Rng& rng,
                              const CVector& incumbent, const RandomizationOptions& opt) {
  return maximize_ratio(lifts.bob, lifts.eve, domain, rng, incumbent, opt);
}

PhaseStepResult solve_theta_e(const model::ChannelSet& ch, const CVector& w, const CVector& theta_B,
                              const model::RadioParams& rp, PhaseDomain domain, chansim::Rng& rng,
                              const CVector& incumbent, const RandomizationOptions& opt) {
  const LiftPair lifts = lift_over_eve_irs(ch, w, theta_B, rp);
  return maximize_ratio(lifts.eve, lifts.bob, domain, rng, incumbent, opt);
}

model::Beamformer optimal_beamformer(const model::ChannelSet& ch, const CVector& theta_B, const CVector& theta_E,
                                     const model::RadioParams& rp) {
  rp.validate();
  const CVector hb = model::effective_channel_bob(ch, theta_B, theta_E);
  const CVector he = model::effective_channel_eve(ch, theta_B, theta_E);
  const Eigen::Index m = hb.size();
  const CMatrix eye_p = CMatrix::Identity(m, m) / rp.P_watt;
  const HermMatrix a = HermMatrix::symmetrized(hb.conjugate() * hb.transpose() / rp.sigma2_B + eye_p);
  const HermMatrix b = HermMatrix::symmetrized(he.conjugate() * he.transpose() / rp.sigma2_E + eye_p);
  const auto g = optkit::max_generalized_eigvec(a, b);
  return {std::sqrt(rp.P_watt) * g.vector, rp.P_watt};
}

double beamformer_objective(const model::ChannelSet& ch, const CVector& theta_B, const CVector& theta_E,
                            const model::RadioParams& rp, const CVector& w) {
  const double sb = model::received_gain(model::effective_channel_bob(ch, theta_B, theta_E), w) / rp.sigma2_B;
  const double se = model::received_gain(model::effective_channel_eve(ch, theta_B, theta_E), w) / rp.sigma2_E;
  return (sb + 1.0) / (se + 1.0);
}

CVector maximize_channel_norm(const model::ChannelSet& ch, Receiver rx, PhaseDomain domain, chansim::Rng& rng,
                              int randomization_count) {
  const Surface surface = rx == Receiver::kBob ? Surface::kBobIrs : Surface::kEveIrs;
  const Eigen::Index n = rx == Receiver::kBob ? ch.N_B : ch.N_E;
  const Eigen::Index other = rx == Receiver::kBob ? ch.N_E : ch.N_B;
  if (n == 0) return CVector(0);

  // ||h||^2 = sum over antennas of |b_m + a_m^T theta|^2; the other surface is ignored.
  CMatrix r = CMatrix::Zero(n + 1, n + 1);
  double constant = 0.0;
  for (Eigen::Index m = 0; m < ch.M; ++m) {
    const auto q = model::lift(model::cascade(ch, unit_vector(ch.M, m), rx, surface, CVector::Zero(other)), 1.0);
    r += q.mat.mat();
    constant += q.scalar;
  }
  const double scale = std::max(r.cwiseAbs().maxCoeff(), constant);
  const CVector ones = CVector::Ones(n);
  if (!(scale > 0.0)) return ones;
  const HermMatrix rn = HermMatrix::symmetrized(r / scale);

  optkit::SdpProblem p;
  p.objective = rn;
  for (Eigen::Index k = 0; k <= n; ++k) p.constraints.push_back({unit_diag(n + 1, k), 0.0, 1.0});
  const auto sol = optkit::solve_sdp(p);

  auto score = [&](const CVector& t) {
    const CVector tb = model::homogenize(t);
    return (tb.adjoint() * rn.mat() * tb)(0).real();
  };
  const Randomizer rand(sol.x, domain);
  const Pick best = best_candidate(rand, rng, randomization_count, score);
  return best.score > score(ones) ? best.theta : ones;
}

InitialPhases init_phases(const model::ChannelSet& ch, PhaseDomain domain_B, PhaseDomain domain_E,
                          chansim::Rng& rng, int randomization_count) {
  ch.validate();
  InitialPhases out;
  out.theta_B = maximize_channel_norm(ch, Receiver::kBob, domain_B, rng, randomization_count);
  out.theta_E = maximize_channel_norm(ch, Receiver::kEve, domain_E, rng, randomization_count);
  return out;
}

void AOConfig::validate() const {
  if (max_iters < 1) throw ContractViolation("AOConfig: max_iters must be >= 1");
  if (!(tolerance > 0.0)) throw ContractViolation("AOConfig: tolerance must be positive");
  if (randomization_count < 1) throw ContractViolation("AOConfig: randomization_count must be >= 1");
}

AOResult run_ao(const model::ChannelSet& ch, const model::RadioParams& rp, PhaseDomain domain_B,
                PhaseDomain domain_E, const AOConfig& config, std::uint64_t seed) {
  config.validate();
  ch.validate();
  rp.validate();
  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed_ms = [&] {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  };
  chansim::Rng rng = chansim::Rng::stream(seed, kAoStream);
  const RandomizationOptions ropt{config.randomization_count, config.incumbent_protection};

  AOResult res;
  model::PhaseConfig& pc = res.phases;
  pc.domain_B = domain_B;
  pc.domain_E = domain_E;
  const InitialPhases init = init_phases(ch, domain_B, domain_E, rng, config.randomization_count);
  pc.theta_B = init.theta_B;
  pc.theta_E = init.theta_E;
  res.beamformer = optimal_beamformer(ch, pc.theta_B, pc.theta_E, rp);
  pc.theta_E = solve_theta_e(ch, res.beamformer.w, pc.theta_B, rp, domain_E, rng, pc.theta_E, ropt).theta;

  auto record = [&](int it, StepLabel step) {
    const auto r = model::secrecy_rate(ch, res.beamformer, pc, rp);
    res.trace.push_back(TraceRecord::from_rates(it, step, r, elapsed_ms()));
    return r.secrecy;
  };
  double prev = record(0, StepLabel::kInit);

  for (int it = 1; it <= config.max_iters; ++it) {
    const LiftPair lifts = lift_bob_side(ch, res.beamformer.w, pc.theta_E, rp);
    pc.theta_B = solve_theta_b(lifts, domain_B, rng, pc.theta_B, ropt).theta;
    record(it, StepLabel::kThetaB);

    const model::Beamformer cand = optimal_beamformer(ch, pc.theta_B, pc.theta_E, rp);
    if (!config.incumbent_protection ||
        beamformer_objective(ch, pc.theta_B, pc.theta_E, rp, cand.w) >
            beamformer_objective(ch, pc.theta_B, pc.theta_E, rp, res.beamformer.w))
      res.beamformer = cand;
    record(it, StepLabel::kW);

    pc.theta_E = solve_theta_e(ch, res.beamformer.w, pc.theta_B, rp, domain_E, rng, pc.theta_E, ropt).theta;
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

}  // namespace irssec::ao
