// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <limits>
#include <vector>

#include "irssec/optkit/linalg.hpp"

namespace irssec::optkit {

enum class Sense { kMinimize, kMaximize };

struct VarBound {
  double lower = 0.0;
  double upper = std::numeric_limits<double>::infinity();

  static VarBound free() {
    return {-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  }
};

/// optimize c^T x  s.t.  G x <= h,  A x = b,  lower <= x <= upper.
/// An empty `bounds` vector means x >= 0 for every variable.
struct LpProblem {
  Sense sense = Sense::kMinimize;
  RVector c;
  RMatrix g;
  RVector h;
  RMatrix a;
  RVector b;
  std::vector<VarBound> bounds;

  Eigen::Index num_vars() const { return c.size(); }
};

struct LpOptions {
  double feas_tol = 1e-9;
  double pivot_tol = 1e-11;
  int max_pivots = 200000;
  /// Consecutive degenerate pivots after which pricing falls back from
  /// Dantzig's rule to Bland's rule.
  int degenerate_switch = 50;
};

struct LpSolution {
  RVector x;
  double value = 0.0;       // c^T x
  double dual_value = 0.0;  // objective of the dual LP at the recovered multipliers
  RVector ineq_duals;       // >= 0 for a minimization, one per row of G
  RVector eq_duals;         // one per row of A
  int pivots = 0;
};

/// Two-phase simplex on a dense tableau. The optimal basis is re-factorized
/// at the end to recover x and the dual multipliers to working precision;
/// primal feasibility, dual feasibility and equal primal/dual objectives are
/// all verified before returning.
///
/// Throws InfeasibleError / UnboundedError for the corresponding LP status,
/// ContractViolation for inconsistent dimensions and ConvergenceError when
/// the pivot cap is hit or the final certificate check fails.
LpSolution solve_lp(const LpProblem& p, const LpOptions& opt = {});

}  // namespace irssec::optkit
