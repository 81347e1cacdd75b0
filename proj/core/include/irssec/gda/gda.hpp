// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

#include "irssec/model/channel.hpp"
#include "irssec/optkit/linalg.hpp"
#include "irssec/optkit/projection.hpp"
#include "irssec/trace.hpp"

namespace irssec::gda {

using model::PhaseDomain;
using optkit::CMatrix;
using optkit::CVector;
using optkit::HermMatrix;

/// Both receivers' SNRs lifted over tb_E = [theta_E; 1] with theta_B and w
/// fixed. For Thetatilde_E = lambda tb_E tb_E^H,
///   tr(Hbar_E2 Thetatilde_E) + lambda (hbar_E2 + 1) = lambda (SNR_E + 1)
/// and the same for Bob with the B2 pair.
struct Lifted2 {
  HermMatrix Hbar_B2;
  HermMatrix Hbar_E2;
  double hbar_B2 = 0.0;
  double hbar_E2 = 0.0;
  HermMatrix Q;  // w w^H
};

Lifted2 lift_eve_side(const model::ChannelSet& ch, const CVector& w, const CVector& theta_B,
                      const model::RadioParams& rp);

/// f = tr(Hbar_E2 Thetatilde_E) + lambda2 (hbar_E2 + 1)
double f_value(const Lifted2& l2, const HermMatrix& theta_tilde_E, double lambda2);

/// Bob-side counterpart of f: the left-hand side of the CCT equality.
double cct_value(const Lifted2& l2, const HermMatrix& theta_tilde_E, double lambda2);

enum class GradientVariant {
  kConsistent,  // Wirtinger derivative of f; passes the finite-difference check
  kPrinted,     // closed form exactly as printed, with conj(theta_E) and Q^T
};

/// d f / d conj(theta_B) with Thetatilde_E = lambda2 tb_E tb_E^H. Returned as
/// an N_B x N_B matrix whose diagonal carries the gradient; the consistent
/// variant is diagonal, the printed one is a full outer product.
CMatrix grad_theta_b(const model::ChannelSet& ch, const CVector& w, const CVector& theta_E, double lambda2,
                     const model::RadioParams& rp, const CVector& theta_B,
                     GradientVariant variant = GradientVariant::kConsistent);

/// d f / d conj(theta_B) for a general PSD Thetatilde_E (only its last column
/// enters). Reduces to grad_theta_b when Thetatilde_E is rank one.
CVector grad_theta_b(const model::ChannelSet& ch, const CVector& w, const HermMatrix& theta_tilde_E,
                     double lambda2, const model::RadioParams& rp, const CVector& theta_B);

enum class ProjectionMode {
  kElementwise,  // renormalize each entry to unit modulus
  kLinearized,     // hyperplane projection on the linearized CCT equality, then renormalize
};

struct GDAConfig {
  double step_size = 1e-2;
  int max_iters = 20;
  double tolerance = 1e-4;
  ProjectionMode projection = ProjectionMode::kElementwise;
  GradientVariant gradient = GradientVariant::kConsistent;
  /// Halve the step while f moves the wrong way (up on descent, down on ascent).
  bool backtracking = true;
  int max_halvings = 30;
  optkit::ProjectionOptions dykstra;

  void validate() const;
};

struct GDAState {
  CVector theta_B;
  HermMatrix theta_tilde_E;
  double lambda2 = 0.0;
  CVector w;
  int iteration = 0;

  /// |theta_B| = 1 within 1e-9, Thetatilde_E PSD within -1e-8, lambda2 >= 0.
  void validate() const;
};

struct DescentResult {
  CVector theta_B;
  CVector gradient;  // diagonal of the gradient used
  double step = 0.0;  // step actually taken after backtracking
};

/// Step 1: theta_B <- P(theta_B - alpha grad). Entries whose pre-projection
/// value is exactly zero keep their previous phase. The step is halved until
/// ||theta_B' - theta_B|| <= step ||grad|| (1 + 1e-6), and with backtracking
/// also until f does not increase.
DescentResult descend_theta_b(const model::ChannelSet& ch, const model::RadioParams& rp, const GDAState& state,
                              const GDAConfig& config);

struct AscentResult {
  HermMatrix theta_tilde_E;
  double lambda2 = 0.0;
  double step = 0.0;
  optkit::ProjectionResult projection;
};

/// Step 3: lambda2 <- lambda2 + alpha (hbar_E2 + 1) (the Thetatilde_E part of
/// the gradient vanishes under the conjugate-derivative convention), then
/// Dykstra projection onto T_E: the CCT equality, diagonal ties to lambda2,
/// Thetatilde_E PSD and lambda2 >= 0.
AscentResult ascend_theta_e(const Lifted2& l2, const GDAState& state, const GDAConfig& config);

/// Projection of (x0, lambda0) onto T_E for the given lift.
optkit::ProjectionResult project_onto_te(const Lifted2& l2, const HermMatrix& x0, double lambda0,
                                         const optkit::ProjectionOptions& opt = {});

/// Rank-one readout: top eigenvector of Thetatilde_E / lambda2 scaled to a
/// unit last entry, then projected onto the domain. Throws DomainError when
/// lambda2 <= 1e-12.
CVector extract_theta_e(const HermMatrix& theta_tilde_E, double lambda2, PhaseDomain domain);

/// lambda2 = 1 / (SNR_B + 1) and Thetatilde_E = lambda2 tb_E tb_E^H at the given point.
GDAState initial_state(const model::ChannelSet& ch, const model::RadioParams& rp, const CVector& theta_B,
                       const CVector& theta_E, const CVector& w);

struct GDAResult {
  model::Beamformer beamformer;
  model::PhaseConfig phases;  // readout phases in their domains
  GDAState state;
  Trace trace;
  int iterations = 0;
  bool converged = false;
};

/// Gradient descent-ascent. Initialization reuses the AO norm-maximizing
/// phases and the optimal beamformer; each round runs descend_theta_b, the
/// beamformer update and ascend_theta_e, recording C_s at the readout phases
/// after every step. Discrete domains are applied at readout only.
GDAResult run_gda(const model::ChannelSet& ch, const model::RadioParams& rp, PhaseDomain domain_B,
                  PhaseDomain domain_E, const GDAConfig& config, std::uint64_t seed,
                  int init_randomization_count = 10000);

}  // namespace irssec::gda
