// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "irssec/model/channel.hpp"

namespace irssec::model {

using optkit::HermMatrix;

enum class Receiver { kBob, kEve };
enum class Surface { kBobIrs, kEveIrs };

/// A receiver's scalar output s = h(theta) w written as an affine function of
/// one surface's phases: s(theta) = base + sum_n coeff_n theta_n, with the
/// other surface held fixed.
struct Cascade {
  Complex base;
  CVector coeff;

  Complex evaluate(const CVector& theta) const;
};

/// Cascade of `rx` over the phases of `surface`; `other` holds the phases of
/// the remaining surface.
Cascade cascade(const ChannelSet& ch, const CVector& w, Receiver rx, Surface surface, const CVector& other);

/// Quadratic form over the homogenized vector tb = [theta; 1]:
///   tb^H mat tb + scalar = |s(theta)|^2 / sigma2.
/// The bottom-right entry of `mat` is 0.
struct LiftedQuadratic {
  HermMatrix mat;
  double scalar = 0.0;

  double evaluate(const CVector& theta_bar) const;
};

LiftedQuadratic lift(const Cascade& c, double sigma2);

/// [theta; 1]
CVector homogenize(const CVector& theta);

}  // namespace irssec::model
