// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "irssec/optkit/linalg.hpp"

namespace irssec::model {

using optkit::CMatrix;
using optkit::Complex;
using optkit::CVector;

/// The eight links of the two-IRS wiretap channel. Row channels (1 x K in
/// the usual notation) are stored as length-K vectors.
struct ChannelSet {
  int M = 0;    // Alice antennas
  int N_B = 0;  // elements of Bob's (legitimate) IRS
  int N_E = 0;  // elements of Eve's (illegitimate) IRS

  CVector h_AB;   // Alice -> Bob, M
  CMatrix h_AIB;  // Alice -> Bob's IRS, N_B x M
  CVector h_IBB;  // Bob's IRS -> Bob, N_B
  CVector h_IBE;  // Bob's IRS -> Eve, N_B
  CVector h_AE;   // Alice -> Eve, M
  CMatrix h_AIE;  // Alice -> Eve's IRS, N_E x M
  CVector h_IEE;  // Eve's IRS -> Eve, N_E
  CVector h_IEB;  // Eve's IRS -> Bob, N_E

  /// All-zero channels of the given dimensions.
  static ChannelSet zeros(int m, int n_b, int n_e);

  /// Throws ContractViolation on inconsistent dimensions or non-finite entries.
  void validate() const;
};

/// Phase domain of one IRS: continuous unit circle, or L >= 2 uniform levels.
class PhaseDomain {
 public:
  static PhaseDomain continuous() { return PhaseDomain(0); }
  static PhaseDomain discrete(int levels);

  bool is_discrete() const noexcept { return levels_ > 0; }
  int levels() const noexcept { return levels_; }

  bool operator==(const PhaseDomain&) const = default;

 private:
  explicit PhaseDomain(int levels) : levels_(levels) {}
  int levels_;
};

struct PhaseConfig {
  CVector theta_B;
  CVector theta_E;
  PhaseDomain domain_B = PhaseDomain::continuous();
  PhaseDomain domain_E = PhaseDomain::continuous();

  /// All-ones phases (level index 0) in the given domains.
  static PhaseConfig ones(int n_b, int n_e, PhaseDomain db = PhaseDomain::continuous(),
                          PhaseDomain de = PhaseDomain::continuous());

  /// Unit modulus within 1e-9; membership in the level set when discrete.
  void validate() const;
};

struct Beamformer {
  CVector w;
  double power = 0.0;  // budget P in watts

  void validate() const;
};

struct RadioParams {
  double P_watt = 0.0;
  double sigma2_B = 0.0;
  double sigma2_E = 0.0;

  void validate() const;
};

struct SecrecyRates {
  double secrecy = 0.0;  // bob - eve, not clamped at zero
  double bob = 0.0;
  double eve = 0.0;
};

double dbm_to_watt(double dbm);

/// Noise power of a flat band with the given density (dBm/Hz).
/// Throws DomainError for bandwidth <= 0.
double noise_power(double density_dbm_hz, double bandwidth_hz);

/// h_AB + h_IBB diag(theta_B) h_AIB + h_IEB diag(theta_E) h_AIE, for
/// arbitrary complex coefficient vectors (no modulus requirement).
CVector effective_channel_bob(const ChannelSet& ch, const CVector& theta_B, const CVector& theta_E);
CVector effective_channel_bob(const ChannelSet& ch, const PhaseConfig& pc);

/// h_AE + h_IEE diag(theta_E) h_AIE + h_IBE diag(theta_B) h_AIB.
CVector effective_channel_eve(const ChannelSet& ch, const CVector& theta_B, const CVector& theta_E);
CVector effective_channel_eve(const ChannelSet& ch, const PhaseConfig& pc);

/// |h w|^2 for a row channel h stored as a vector.
double received_gain(const CVector& h, const CVector& w);

SecrecyRates secrecy_rate(const ChannelSet& ch, const CVector& w, const CVector& theta_B, const CVector& theta_E,
                          const RadioParams& rp);
SecrecyRates secrecy_rate(const ChannelSet& ch, const Beamformer& bf, const PhaseConfig& pc, const RadioParams& rp);

/// e^{j 2 pi k / L}
Complex phase_level(int k, int levels);

/// Index k in [0, L) of the level nearest to theta in Euclidean distance;
/// ties go to the smallest k. theta must have unit modulus within 1e-6.
int nearest_level(Complex theta, int levels);
Complex quantize_phase(Complex theta, int levels);

/// Entrywise projection onto the domain: unit-modulus normalization for
/// continuous, nearest level for discrete. Zero entries map to 1.
CVector project_to_domain(const CVector& v, PhaseDomain domain);

}  // namespace irssec::model
