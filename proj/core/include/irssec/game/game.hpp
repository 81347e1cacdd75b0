// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "irssec/model/channel.hpp"
#include "irssec/optkit/linalg.hpp"

namespace irssec::game {

using optkit::CVector;
using optkit::RMatrix;
using optkit::RVector;

inline constexpr std::size_t kDefaultStrategyCap = 4096;

/// All L^N discrete phase profiles of one surface, lexicographic in the level
/// indices with the first element most significant. Index 0 is all level 0.
class StrategySpace {
 public:
  int elements() const noexcept { return n_; }
  int levels() const noexcept { return l_; }
  std::size_t size() const noexcept { return profiles_.size(); }
  const CVector& operator[](std::size_t i) const { return profiles_.at(i); }

  std::vector<int> level_indices(std::size_t index) const;
  std::size_t index_of(const std::vector<int>& level_indices) const;
  /// Index of a phase vector whose entries sit on the level set within 1e-9.
  std::size_t index_of(const CVector& theta) const;

 private:
  friend StrategySpace enumerate_strategies(int, int, std::size_t);
  int n_ = 0;
  int l_ = 0;
  std::vector<CVector> profiles_;
};

/// Throws SizeError naming L^N when it exceeds `cap`, ContractViolation for
/// N < 1 or L < 2.
StrategySpace enumerate_strategies(int n, int levels, std::size_t cap = kDefaultStrategyCap);

/// a_ij = C_s for Bob's profile i against Eve's profile j.
struct PayoffMatrix {
  RMatrix a;

  Eigen::Index rows() const { return a.rows(); }
  Eigen::Index cols() const { return a.cols(); }
  /// Non-empty with finite entries.
  void validate() const;
};

struct PayoffOptions {
  /// Workers for the enumeration; 0 uses the hardware concurrency.
  unsigned threads = 0;
  /// Use this beamformer for every pair instead of the per-pair optimum.
  std::optional<CVector> fixed_w;
};

/// One entry, through the same code path as payoff_matrix.
double payoff_entry(const model::ChannelSet& ch, const model::RadioParams& rp, const CVector& theta_B,
                    const CVector& theta_E, const PayoffOptions& opt = {});

PayoffMatrix payoff_matrix(const model::ChannelSet& ch, const model::RadioParams& rp, const StrategySpace& bob,
                           const StrategySpace& eve, const PayoffOptions& opt = {});

/// Entries >= -1e-12 and sum 1 within 1e-9.
void validate_mixed_strategy(const RVector& p);

struct GameSolution {
  RVector x;  // Bob (row player)
  RVector y;  // Eve (column player)
  double value = 0.0;
  double value_row = 0.0;  // optimum of the row player's LP
  double value_col = 0.0;  // optimum of the column player's LP
  std::vector<std::size_t> support_x;  // probabilities > 1e-9
  std::vector<std::size_t> support_y;
};

/// Solves max v s.t. A^T x >= v 1 over the simplex and the column player's
/// min u s.t. A y <= u 1, then checks |v_row - v_col| <= 1e-8 (ConvergenceError
/// otherwise). The value returned is v_row.
GameSolution solve_zero_sum(const PayoffMatrix& a);

struct NeCheck {
  bool pass = false;
  double row_violation = 0.0;  // max_i (A y)_i - v
  double col_violation = 0.0;  // max_j v - (A^T x)_j
  double worst() const { return std::max(row_violation, col_violation); }
};

NeCheck verify_ne(const PayoffMatrix& a, const RVector& x, const RVector& y, double v, double tol);

struct PureBounds {
  double maxmin = 0.0;  // max_i min_j a_ij
  double minmax = 0.0;  // min_j max_i a_ij
};

PureBounds pure_bounds(const PayoffMatrix& a);

struct WorstCase {
  double secrecy = 0.0;
  std::size_t eve_index = 0;
  model::SecrecyRates rates;
};

/// Eve's best pure response to a fixed (theta_B, w): the smallest C_s over
/// her strategy space. Without w, the beamformer is re-optimized per profile.
WorstCase worst_case_over_eve(const model::ChannelSet& ch, const model::RadioParams& rp, const CVector& theta_B,
                              const StrategySpace& eve, const std::optional<CVector>& w = std::nullopt);

/// Header "row\col,0,1,..." then one line per row led by its index; entries
/// printed with 17 significant digits.
std::string payoff_csv(const PayoffMatrix& a);
PayoffMatrix parse_payoff_csv(const std::string& text);

/// {"value", "value_row", "value_col", "support_x", "support_y", "x", "y"}
std::string solution_json(const GameSolution& s);

}  // namespace irssec::game
