// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <vector>

#include "irssec/optkit/linalg.hpp"

namespace irssec::optkit {

/// Re tr(A X) + aux_coeff * aux = rhs
struct SdpConstraint {
  HermMatrix a;
  double aux_coeff = 0.0;
  double rhs = 0.0;
};

/// maximize Re tr(C X) + aux_objective * aux
/// s.t.     Re tr(A_k X) + a_k * aux = b_k,  X >= 0,  aux >= 0.
///
/// The scalar `aux` exists only when `has_aux` is set; it is the variable the
/// Charnes-Cooper change of variables introduces for linear-fractional SDPs.
struct SdpProblem {
  HermMatrix objective;
  std::vector<SdpConstraint> constraints;
  bool has_aux = false;
  double aux_objective = 0.0;

  Eigen::Index dim() const { return objective.dim(); }
};

struct SdpOptions {
  int max_iters = 100;
  double gap_tol = 1e-10;       // relative duality gap at which the IPM stops
  double feas_tol = 1e-10;      // relative primal/dual infeasibility
  double step_fraction = 0.98;  // fraction of the distance to the cone boundary
  double divergence_limit = 1e12;
  int stall_iters = 8;          // stop after this many iterations without a 10% gain in the worst residual
};

struct SdpSolution {
  HermMatrix x;
  std::optional<double> aux;
  /// Dual objective; an upper bound on the relaxed maximum (up to dual
  /// infeasibility, which is below `feas_tol`).
  double value = 0.0;
  double primal_value = 0.0;
  std::vector<double> dual;  // multipliers, one per constraint
  double max_equality_residual = 0.0;  // max_k |r_k| / (1 + |b_k|)
  double min_eigenvalue = 0.0;
  int iterations = 0;
};

/// Primal-dual path-following interior-point method (HKM search direction,
/// Mehrotra predictor-corrector) on the complex Hermitian cone.
///
/// Throws InfeasibleError when the iterates exhibit a primal infeasibility
/// certificate, UnboundedError for a dual one, and ConvergenceError (with the
/// final primal infeasibility, dual infeasibility and gap) when the final
/// iterate misses 1e-7 in relative feasibility or gap.
SdpSolution solve_sdp(const SdpProblem& p, const SdpOptions& opt = {});

}  // namespace irssec::optkit
