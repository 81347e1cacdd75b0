// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

#include "irssec/chansim/rng.hpp"
#include "irssec/model/channel.hpp"
#include "irssec/model/lift.hpp"
#include "irssec/optkit/linalg.hpp"
#include "irssec/trace.hpp"

namespace irssec::ao {

using model::PhaseDomain;
using optkit::CVector;
using optkit::HermMatrix;

/// One receiver's SNR as a quadratic form over tb = [theta; 1]:
///   SNR = tb^H Hbar tb + hbar.
struct LiftedForms {
  HermMatrix Hbar;
  double hbar = 0.0;
  model::Receiver side = model::Receiver::kBob;

  double snr(const CVector& theta_bar) const;
};

/// Both receivers lifted over the same surface's phases.
struct LiftPair {
  LiftedForms bob;
  LiftedForms eve;

  Eigen::Index dim() const { return bob.Hbar.dim(); }
};

/// Lift over theta_B with w and theta_E held fixed.
LiftPair lift_bob_side(const model::ChannelSet& ch, const CVector& w, const CVector& theta_E,
                       const model::RadioParams& rp);

/// Lift over theta_E with w and theta_B held fixed.
LiftPair lift_over_eve_irs(const model::ChannelSet& ch, const CVector& w, const CVector& theta_B,
                           const model::RadioParams& rp);

struct RandomizationOptions {
  int count = 10000;
  bool incumbent_protection = true;
};

struct PhaseStepResult {
  CVector theta;
  /// Maximized ratio at `theta`: (SNR_B+1)/(SNR_E+1) for the theta_B step and
  /// its reciprocal for the theta_E step.
  double objective = 0.0;
  double incumbent_objective = 0.0;
  /// Relaxation optimum (dual bound of the SDP); >= objective.
  double sdp_bound = 0.0;
  HermMatrix relaxed;  // recovered Thetabar = Thetatilde / lambda
  bool kept_incumbent = false;
};

/// Maximizes (num SNR + 1)/(den SNR + 1) over unit-modulus phases through
/// the Charnes-Cooper SDP and Gaussian randomization. Candidates are scored
/// by the ratio itself; with incumbent protection a candidate replaces the
/// incumbent only on strict improvement.
PhaseStepResult maximize_ratio(const LiftedForms& num, const LiftedForms& den, PhaseDomain domain,
                               chansim::Rng& rng, const CVector& incumbent, const RandomizationOptions& opt);

/// Theta_B step: maximize Bob's over Eve's (SNR + 1).
PhaseStepResult solve_theta_b(const LiftPair& lifts, PhaseDomain domain, chansim::Rng& rng,
                              const CVector& incumbent, const RandomizationOptions& opt = {});

/// Theta_E step: minimize the same ratio over Eve's surface.
PhaseStepResult solve_theta_e(const model::ChannelSet& ch, const CVector& w, const CVector& theta_B,
                              const model::RadioParams& rp, PhaseDomain domain, chansim::Rng& rng,
                              const CVector& incumbent, const RandomizationOptions& opt = {});

/// Generalized-eigenvector beamformer sqrt(P) u_max of the pencil
/// (Htilde_B + I/P, Htilde_E + I/P).
model::Beamformer optimal_beamformer(const model::ChannelSet& ch, const CVector& theta_B, const CVector& theta_E,
                                     const model::RadioParams& rp);

/// (w^H Htilde_B w + 1) / (w^H Htilde_E w + 1)
double beamformer_objective(const model::ChannelSet& ch, const CVector& theta_B, const CVector& theta_E,
                            const model::RadioParams& rp, const CVector& w);

struct InitialPhases {
  CVector theta_B;
  CVector theta_E;
};

/// Phases maximizing the norm of each receiver's own-surface effective
/// channel, ||h_AB + h_IBB Theta_B h_AIB||^2 for Bob and its mirror for Eve,
/// via SDR with Gaussian randomization.
InitialPhases init_phases(const model::ChannelSet& ch, PhaseDomain domain_B, PhaseDomain domain_E,
                          chansim::Rng& rng, int randomization_count = 10000);

/// Norm-maximizing phases for one receiver and one surface.
CVector maximize_channel_norm(const model::ChannelSet& ch, model::Receiver rx, PhaseDomain domain, chansim::Rng& rng,
                              int randomization_count);

struct AOConfig {
  int max_iters = 20;
  double tolerance = 1e-4;
  int randomization_count = 10000;
  bool incumbent_protection = true;

  void validate() const;
};

struct AOResult {
  model::Beamformer beamformer;
  model::PhaseConfig phases;
  Trace trace;
  int iterations = 0;
  bool converged = false;
};

/// Alternating optimization: initialization (norm-maximizing phases, optimal
/// beamformer, one theta_E update) followed by theta_B -> w -> theta_E
/// rounds. C_s is recorded after every step; the loop stops when the
/// post-theta_E value moves by at most `tolerance` or after `max_iters`.
/// The seed selects the randomization stream.
AOResult run_ao(const model::ChannelSet& ch, const model::RadioParams& rp, PhaseDomain domain_B,
                PhaseDomain domain_E, const AOConfig& config, std::uint64_t seed);

}  // namespace irssec::ao
