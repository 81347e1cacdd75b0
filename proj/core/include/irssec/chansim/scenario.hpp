// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

#include "irssec/chansim/rng.hpp"
#include "irssec/model/channel.hpp"

namespace irssec::chansim {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

double distance(Point2 a, Point2 b);

/// Node positions in meters. Defaults are the package's reference layout.
struct Geometry {
  Point2 alice{0.0, 0.0};
  Point2 bob{50.0, 0.0};
  Point2 eve{45.0, 5.0};
  Point2 irs_bob{40.0, 2.0};
  Point2 irs_eve{48.0, 4.0};

  /// Throws ContractViolation if any two nodes coincide.
  void validate() const;
};

struct ScenarioSpec {
  Geometry geometry;
  int M = 3;
  int N_B = 4;
  int N_E = 4;
  double direct_exponent = 4.0;
  double reflected_exponent = 2.0;
  double reference_loss_db = -30.0;  // at 1 m
  double correlation_rho = 0.7;
  std::uint64_t seed = 1;

  void validate() const;
};

/// Link identifiers; they double as RNG stream ids.
enum class Link : std::uint64_t { kAB = 1, kAIB, kIBB, kIBE, kAE, kAIE, kIEE, kIEB };

/// Amplitude gain sqrt(10^{ref_db/10} d^{-exponent}). Throws DomainError for d <= 0.
double path_loss(double d, double exponent, double ref_loss_db);

/// Kronecker-correlated matrix R_rx^{1/2} G R_tx^{1/2} with [R]_ij = rho^|i-j|
/// and G i.i.d. CN(0, 1). Throws DomainError unless 0 <= rho < 1.
optkit::CMatrix correlated_mimo(int n_rx, int n_tx, double rho, Rng& rng);

/// Channels for the spec. Alice -> IRS matrices are correlated and checked
/// for full rank (sigma_min > 1e-9 sigma_max); a rank-deficient draw is
/// replaced by the next substream, at most 100 attempts.
model::ChannelSet generate_channels(const ScenarioSpec& spec);

}  // namespace irssec::chansim
