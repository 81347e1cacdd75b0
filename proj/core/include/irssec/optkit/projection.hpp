// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <vector>

#include "irssec/optkit/linalg.hpp"

namespace irssec::optkit {

/// Linear functional on the pair (X, aux): Re tr(a X) + aux_coeff * aux.
/// Used with `==` semantics for equalities and `<=` for halfspaces.
struct LinearRow {
  HermMatrix a;
  double aux_coeff = 0.0;
  double rhs = 0.0;
};

struct ProjectionOptions {
  int max_cycles = 500;
  /// Stop once the Frobenius change between successive cycles drops below
  /// `change_tol` times the norm of the current iterate.
  double change_tol = 1e-8;
  double equality_tol = 1e-6;
  double halfspace_tol = 1e-8;
  double psd_tol = 1e-8;
  /// When Dykstra misses the tolerances, recompute the projection by
  /// semismooth Newton on its dual before giving up.
  bool newton_fallback = true;
  int max_newton_iters = 200;
  /// Optional map onto the feasible set, applied in place to the best point
  /// when both solvers miss. It should move the point by about its residual.
  std::function<void(HermMatrix&, double&)> restore;
};

struct ProjectionResult {
  HermMatrix x;
  double aux = 0.0;
  int cycles = 0;
  double max_equality_residual = 0.0;
  double max_halfspace_violation = 0.0;
  double min_eigenvalue = 0.0;
  bool newton_fallback = false;  // the returned point came from the dual Newton solve
  bool restored = false;         // and was then passed through ProjectionOptions::restore
};

/// Euclidean projection of (x0, aux0) onto
///   { (X, aux) : equalities hold, halfspaces hold, X >= 0 }
/// using the norm ||X||_F^2 + aux^2, computed by Dykstra's alternating
/// projections. One cycle visits the equality subspace (exact projection),
/// then each halfspace, then the PSD cone.
///
/// Residuals are measured relative to the size of the terms involved:
/// |lhs - rhs| / max(|rhs|, ||a||_F ||X||_F + |aux_coeff aux|).
/// If the cycle cap is reached or the final point misses the tolerances, the
/// same projection is recomputed by semismooth Newton on the dual (unless
/// disabled), and the restore hook is applied if that point still misses.
/// Throws ConvergenceError with the final equality, halfspace and PSD
/// residuals when the returned point misses the tolerances.
ProjectionResult project_affine_psd(const HermMatrix& x0, double aux0, const std::vector<LinearRow>& equalities,
                                    const std::vector<LinearRow>& halfspaces, const ProjectionOptions& opt = {});

}  // namespace irssec::optkit
