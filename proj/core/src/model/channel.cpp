// SPDX-License-Identifier: Apache-2.0
#include "irssec/model/channel.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "irssec/errors.hpp"

namespace irssec::model {
namespace {

void check_len(const CVector& v, int n, const char* name) {
  if (v.size() != n) {
    std::ostringstream os;
    os << "ChannelSet: " << name << " has length " << v.size() << ", expected " << n;
    throw ContractViolation(os.str());
  }
  if (!v.allFinite()) throw ContractViolation(std::string("ChannelSet: non-finite entry in ") + name);
}

void check_dims(const CMatrix& m, int r, int c, const char* name) {
  if (m.rows() != r || m.cols() != c) {
    std::ostringstream os;
    os << "ChannelSet: " << name << " is " << m.rows() << "x" << m.cols() << ", expected " << r << "x" << c;
    throw ContractViolation(os.str());
  }
  if (!m.allFinite()) throw ContractViolation(std::string("ChannelSet: non-finite entry in ") + name);
}

// sum_n coeff_n * row_n(h) * theta_n, i.e. g diag(theta) H for a row g.
CVector reflected(const CVector& g, const CVector& theta, const CMatrix& h) {
  return h.transpose() * g.cwiseProduct(theta);
}

void check_theta(const ChannelSet& ch, const CVector& theta_B, const CVector& theta_E) {
  if (theta_B.size() != ch.N_B || theta_E.size() != ch.N_E)
    throw ContractViolation("effective channel: phase vector length does not match the IRS size");
}

}  // namespace

ChannelSet ChannelSet::zeros(int m, int n_b, int n_e) {
  ChannelSet ch;
  ch.M = m;
  ch.N_B = n_b;
  ch.N_E = n_e;
  ch.h_AB = CVector::Zero(m);
  ch.h_AIB = CMatrix::Zero(n_b, m);
  ch.h_IBB = CVector::Zero(n_b);
  ch.h_IBE = CVector::Zero(n_b);
  ch.h_AE = CVector::Zero(m);
  ch.h_AIE = CMatrix::Zero(n_e, m);
  ch.h_IEE = CVector::Zero(n_e);
  ch.h_IEB = CVector::Zero(n_e);
  return ch;
}

void ChannelSet::validate() const {
  if (M <= 0 || N_B < 0 || N_E < 0) throw ContractViolation("ChannelSet: M must be positive and N_B, N_E >= 0");
  check_len(h_AB, M, "h_AB");
  check_dims(h_AIB, N_B, M, "h_AIB");
  check_len(h_IBB, N_B, "h_IBB");
  check_len(h_IBE, N_B, "h_IBE");
  check_len(h_AE, M, "h_AE");
  check_dims(h_AIE, N_E, M, "h_AIE");
  check_len(h_IEE, N_E, "h_IEE");
  check_len(h_IEB, N_E, "h_IEB");
}

PhaseDomain PhaseDomain::discrete(int levels) {
  if (levels < 2) throw ContractViolation("PhaseDomain: discrete domain needs at least 2 levels");
  return PhaseDomain(levels);
}

PhaseConfig PhaseConfig::ones(int n_b, int n_e, PhaseDomain db, PhaseDomain de) {
  return {CVector::Ones(n_b), CVector::Ones(n_e), db, de};
}

void PhaseConfig::validate() const {
  auto check = [](const CVector& t, PhaseDomain d, const char* name) {
    for (Eigen::Index i = 0; i < t.size(); ++i) {
      if (std::abs(std::abs(t(i)) - 1.0) > 1e-9) {
        std::ostringstream os;
        os << "PhaseConfig: " << name << "[" << i << "] has modulus " << std::abs(t(i));
        throw ContractViolation(os.str());
      }
      if (d.is_discrete() && std::abs(t(i) - phase_level(nearest_level(t(i), d.levels()), d.levels())) > 1e-9) {
        std::ostringstream os;
        os << "PhaseConfig: " << name << "[" << i << "] is not one of the " << d.levels() << " levels";
        throw ContractViolation(os.str());
      }
    }
  };
  check(theta_B, domain_B, "theta_B");
  check(theta_E, domain_E, "theta_E");
}

void Beamformer::validate() const {
  if (!(power > 0.0)) throw ContractViolation("Beamformer: power budget must be positive");
  if (w.squaredNorm() > power * (1.0 + 1e-9)) throw ContractViolation("Beamformer: ||w||^2 exceeds the budget");
}

void RadioParams::validate() const {
  if (!(P_watt > 0.0) || !(sigma2_B > 0.0) || !(sigma2_E > 0.0))
    throw ContractViolation("RadioParams: power and noise variances must be strictly positive");
}

double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double noise_power(double density_dbm_hz, double bandwidth_hz) {
  if (!(bandwidth_hz > 0.0)) throw DomainError("noise_power: bandwidth must be positive");
  return dbm_to_watt(density_dbm_hz + 10.0 * std::log10(bandwidth_hz));
}

CVector effective_channel_bob(const ChannelSet& ch, const CVector& theta_B, const CVector& theta_E) {
  check_theta(ch, theta_B, theta_E);
  return ch.h_AB + reflected(ch.h_IBB, theta_B, ch.h_AIB) + reflected(ch.h_IEB, theta_E, ch.h_AIE);
}

CVector effective_channel_bob(const ChannelSet& ch, const PhaseConfig& pc) {
  return effective_channel_bob(ch, pc.theta_B, pc.theta_E);
}

CVector effective_channel_eve(const ChannelSet& ch, const CVector& theta_B, const CVector& theta_E) {
  check_theta(ch, theta_B, theta_E);
  return ch.h_AE + reflected(ch.h_IEE, theta_E, ch.h_AIE) + reflected(ch.h_IBE, theta_B, ch.h_AIB);
}

CVector effective_channel_eve(const ChannelSet& ch, const PhaseConfig& pc) {
  return effective_channel_eve(ch, pc.theta_B, pc.theta_E);
}

double received_gain(const CVector& h, const CVector& w) {
  if (h.size() != w.size()) throw ContractViolation("received_gain: channel and beamformer lengths differ");
  return std::norm(h.cwiseProduct(w).sum());
}

SecrecyRates secrecy_rate(const ChannelSet& ch, const CVector& w, const CVector& theta_B, const CVector& theta_E,
                          const RadioParams& rp) {
  const double snr_b = received_gain(effective_channel_bob(ch, theta_B, theta_E), w) / rp.sigma2_B;
  const double snr_e = received_gain(effective_channel_eve(ch, theta_B, theta_E), w) / rp.sigma2_E;
  SecrecyRates r;
  r.bob = std::log2(1.0 + snr_b);
  r.eve = std::log2(1.0 + snr_e);
  r.secrecy = r.bob - r.eve;
  return r;
}

SecrecyRates secrecy_rate(const ChannelSet& ch, const Beamformer& bf, const PhaseConfig& pc, const RadioParams& rp) {
  return secrecy_rate(ch, bf.w, pc.theta_B, pc.theta_E, rp);
}

Complex phase_level(int k, int levels) {
  return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(levels));
}

int nearest_level(Complex theta, int levels) {
  if (levels < 2) throw ContractViolation("quantize_phase: need at least 2 levels");
  if (std::abs(std::abs(theta) - 1.0) > 1e-6) throw ContractViolation("quantize_phase: input is not unit-modulus");
  double best = std::abs(theta - phase_level(0, levels));
  int best_k = 0;
  for (int k = 1; k < levels; ++k) {
    const double d = std::abs(theta - phase_level(k, levels));
    if (d < best - 1e-12) {
      best = d;
      best_k = k;
    }
  }
  return best_k;
}

Complex quantize_phase(Complex theta, int levels) { return phase_level(nearest_level(theta, levels), levels); }

CVector project_to_domain(const CVector& v, PhaseDomain domain) {
  CVector out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double mag = std::abs(v(i));
    const Complex unit = mag > 0.0 ? v(i) / mag : Complex(1.0, 0.0);
    out(i) = domain.is_discrete() ? quantize_phase(unit, domain.levels()) : unit;
  }
  return out;
}

}  // namespace irssec::model
