// SPDX-License-Identifier: Apache-2.0
#include "irssec/game/game.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <iomanip>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "irssec/ao/ao.hpp"
#include "irssec/errors.hpp"
#include "irssec/optkit/lp.hpp"

namespace irssec::game {
namespace {

constexpr double kSupportTol = 1e-9;
constexpr double kMinimaxTol = 1e-8;

std::vector<std::size_t> support(const RVector& p) {
  std::vector<std::size_t> s;
  for (Eigen::Index i = 0; i < p.size(); ++i)
    if (p(i) > kSupportTol) s.push_back(static_cast<std::size_t>(i));
  return s;
}

// LP output can carry -1e-16 style entries; clip and renormalize.
RVector clean_strategy(RVector p) {
  p = p.cwiseMax(0.0);
  const double sum = p.sum();
  if (!(sum > 0.0)) throw ConvergenceError("solve_zero_sum: LP returned an empty strategy");
  return p / sum;
}

// Column player's LP on M shifted to entries >= 1: max 1^T y s.t. (M + c) y <= 1,
// y >= 0. The origin is a feasible vertex, so no phase 1 is needed.
// Returns the minimizer's strategy (unnormalized) and the value of M.
std::pair<RVector, double> minimizer_lp(const RMatrix& m) {
  const double shift = 1.0 - m.minCoeff();
  optkit::LpProblem lp;
  lp.sense = optkit::Sense::kMaximize;
  lp.c = RVector::Ones(m.cols());
  lp.g = m.array() + shift;
  lp.h = RVector::Ones(m.rows());
  const auto sol = optkit::solve_lp(lp);
  return {sol.x, 1.0 / sol.value - shift};
}

}  // namespace

std::vector<int> StrategySpace::level_indices(std::size_t index) const {
  if (index >= size()) throw ContractViolation("StrategySpace: index out of range");
  std::vector<int> k(static_cast<std::size_t>(n_));
  for (int e = n_ - 1; e >= 0; --e) {
    k[static_cast<std::size_t>(e)] = static_cast<int>(index % static_cast<std::size_t>(l_));
    index /= static_cast<std::size_t>(l_);
  }
  return k;
}

std::size_t StrategySpace::index_of(const std::vector<int>& level_indices) const {
  if (level_indices.size() != static_cast<std::size_t>(n_))
    throw ContractViolation("StrategySpace: level vector has the wrong length");
  std::size_t idx = 0;
  for (int k : level_indices) {
    if (k < 0 || k >= l_) throw ContractViolation("StrategySpace: level index out of range");
    idx = idx * static_cast<std::size_t>(l_) + static_cast<std::size_t>(k);
  }
  return idx;
}

std::size_t StrategySpace::index_of(const CVector& theta) const {
  if (theta.size() != n_) throw ContractViolation("StrategySpace: phase vector has the wrong length");
  std::vector<int> k(static_cast<std::size_t>(n_));
  for (int e = 0; e < n_; ++e) {
    const int lvl = model::nearest_level(theta(e), l_);
    if (std::abs(theta(e) - model::phase_level(lvl, l_)) > 1e-9)
      throw ContractViolation("StrategySpace: entry is not on the level set");
    k[static_cast<std::size_t>(e)] = lvl;
  }
  return index_of(k);
}

StrategySpace enumerate_strategies(int n, int levels, std::size_t cap) {
  if (n < 1) throw ContractViolation("enumerate_strategies: N must be >= 1");
  if (levels < 2) throw ContractViolation("enumerate_strategies: L must be >= 2");
  std::size_t count = 1;
  for (int e = 0; e < n; ++e) {
    if (count > std::numeric_limits<std::size_t>::max() / static_cast<std::size_t>(levels)) {
      count = std::numeric_limits<std::size_t>::max();
      break;
    }
    count *= static_cast<std::size_t>(levels);
  }
  if (count > cap) {
    std::ostringstream os;
    os << "enumerate_strategies: L^N = " << levels << "^" << n;
    if (count != std::numeric_limits<std::size_t>::max()) os << " = " << count;
    os << " exceeds the strategy cap " << cap;
    throw SizeError(os.str());
  }

  StrategySpace s;
  s.n_ = n;
  s.l_ = levels;
  s.profiles_.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    CVector v(n);
    std::size_t rest = i;
    for (int e = n - 1; e >= 0; --e) {
      v(e) = model::phase_level(static_cast<int>(rest % static_cast<std::size_t>(levels)), levels);
      rest /= static_cast<std::size_t>(levels);
    }
    s.profiles_.push_back(std::move(v));
  }
  return s;
}

void PayoffMatrix::validate() const {
  if (a.rows() == 0 || a.cols() == 0) throw ContractViolation("PayoffMatrix: empty matrix");
  if (!a.allFinite()) throw ContractViolation("PayoffMatrix: non-finite entry");
}

double payoff_entry(const model::ChannelSet& ch, const model::RadioParams& rp, const CVector& theta_B,
                    const CVector& theta_E, const PayoffOptions& opt) {
  const CVector w = opt.fixed_w ? *opt.fixed_w : ao::optimal_beamformer(ch, theta_B, theta_E, rp).w;
  return model::secrecy_rate(ch, w, theta_B, theta_E, rp).secrecy;
}

PayoffMatrix payoff_matrix(const model::ChannelSet& ch, const model::RadioParams& rp, const StrategySpace& bob,
                           const StrategySpace& eve, const PayoffOptions& opt) {
  ch.validate();
  rp.validate();
  if (bob.elements() != ch.N_B || eve.elements() != ch.N_E)
    throw ContractViolation("payoff_matrix: strategy spaces do not match the channel dimensions");
  if (opt.fixed_w && opt.fixed_w->size() != ch.M)
    throw ContractViolation("payoff_matrix: fixed beamformer has the wrong length");

  PayoffMatrix out;
  out.a.resize(static_cast<Eigen::Index>(bob.size()), static_cast<Eigen::Index>(eve.size()));
  unsigned workers = opt.threads ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(bob.size()));

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto work = [&] {
    try {
      for (std::size_t i = next++; i < bob.size(); i = next++)
        for (std::size_t j = 0; j < eve.size(); ++j)
          out.a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
              payoff_entry(ch, rp, bob[i], eve[j], opt);
    } catch (...) {
      std::lock_guard lock(failure_mu);
      if (!failure) failure = std::current_exception();
      next = bob.size();
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  out.validate();
  return out;
}

void validate_mixed_strategy(const RVector& p) {
  if (p.size() == 0) throw ContractViolation("mixed strategy: empty vector");
  if (!p.allFinite()) throw ContractViolation("mixed strategy: non-finite entry");
  if (p.minCoeff() < -1e-12) throw ContractViolation("mixed strategy: negative probability");
  if (std::abs(p.sum() - 1.0) > 1e-9) throw ContractViolation("mixed strategy: probabilities do not sum to 1");
}

GameSolution solve_zero_sum(const PayoffMatrix& a) {
  a.validate();
  GameSolution s;
  auto [y, v_col] = minimizer_lp(a.a);
  // Bob minimizes in the transposed, negated game.
  auto [x, neg_v_row] = minimizer_lp(-a.a.transpose());
  s.x = clean_strategy(std::move(x));
  s.y = clean_strategy(std::move(y));
  s.value_row = -neg_v_row;
  s.value_col = v_col;
  s.value = s.value_row;
  if (!(std::abs(s.value_row - s.value_col) <= kMinimaxTol)) {
    std::ostringstream os;
    os << std::setprecision(17) << "solve_zero_sum: row value " << s.value_row << " and column value "
       << s.value_col << " differ by more than " << kMinimaxTol;
    throw ConvergenceError(os.str(), {std::abs(s.value_row - s.value_col)});
  }
  s.support_x = support(s.x);
  s.support_y = support(s.y);
  return s;
}

NeCheck verify_ne(const PayoffMatrix& a, const RVector& x, const RVector& y, double v, double tol) {
  a.validate();
  validate_mixed_strategy(x);
  validate_mixed_strategy(y);
  if (x.size() != a.rows() || y.size() != a.cols())
    throw ContractViolation("verify_ne: strategy sizes do not match the matrix");
  NeCheck c;
  c.row_violation = (a.a * y).maxCoeff() - v;
  c.col_violation = v - (a.a.transpose() * x).minCoeff();
  c.pass = c.row_violation <= tol && c.col_violation <= tol;
  return c;
}

PureBounds pure_bounds(const PayoffMatrix& a) {
  a.validate();
  return {a.a.rowwise().minCoeff().maxCoeff(), a.a.colwise().maxCoeff().minCoeff()};
}

WorstCase worst_case_over_eve(const model::ChannelSet& ch, const model::RadioParams& rp, const CVector& theta_B,
                              const StrategySpace& eve, const std::optional<CVector>& w) {
  if (eve.elements() != ch.N_E) throw ContractViolation("worst_case_over_eve: Eve space does not match N_E");
  WorstCase best;
  best.secrecy = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < eve.size(); ++j) {
    const CVector wj = w ? *w : ao::optimal_beamformer(ch, theta_B, eve[j], rp).w;
    const auto r = model::secrecy_rate(ch, wj, theta_B, eve[j], rp);
    if (r.secrecy < best.secrecy) best = {r.secrecy, j, r};
  }
  return best;
}

std::string payoff_csv(const PayoffMatrix& a) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "row\\col";
  for (Eigen::Index j = 0; j < a.cols(); ++j) os << ',' << j;
  os << '\n';
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    os << i;
    for (Eigen::Index j = 0; j < a.cols(); ++j) os << ',' << a.a(i, j);
    os << '\n';
  }
  return os.str();
}

PayoffMatrix parse_payoff_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.rfind("row\\col", 0) != 0)
    throw ContractViolation("parse_payoff_csv: missing header");
  std::vector<std::vector<double>> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<double> row;
    std::size_t pos = line.find(',');
    if (pos == std::string::npos) throw ContractViolation("parse_payoff_csv: line " + std::to_string(line_no));
    while (pos != std::string::npos) {
      const std::size_t end = line.find(',', pos + 1);
      const char* b = line.data() + pos + 1;
      const char* e = end == std::string::npos ? line.data() + line.size() : line.data() + end;
      double v = 0.0;
      const auto r = std::from_chars(b, e, v);
      if (r.ec != std::errc{} || r.ptr != e)
        throw ContractViolation("parse_payoff_csv: bad number on line " + std::to_string(line_no));
      row.push_back(v);
      pos = end;
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw ContractViolation("parse_payoff_csv: ragged row on line " + std::to_string(line_no));
    rows.push_back(std::move(row));
  }
  PayoffMatrix m;
  m.a.resize(static_cast<Eigen::Index>(rows.size()), rows.empty() ? 0 : static_cast<Eigen::Index>(rows[0].size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      m.a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return m;
}

std::string solution_json(const GameSolution& s) {
  auto vec = [](const RVector& v) { return std::vector<double>(v.data(), v.data() + v.size()); };
  const nlohmann::json j = {
      {"value", s.value},         {"value_row", s.value_row}, {"value_col", s.value_col},
      {"support_x", s.support_x}, {"support_y", s.support_y}, {"x", vec(s.x)},
      {"y", vec(s.y)},
  };
  return j.dump(2);
}

}  // namespace irssec::game
