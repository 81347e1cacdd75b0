// SPDX-License-Identifier: Apache-2.0
#include "irssec/optkit/lp.hpp"

#include <cmath>
#include <sstream>

#include "irssec/errors.hpp"

namespace irssec::optkit {
namespace {

using Tableau = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// x = offset + sum over the column list of sign * z
struct VarMap {
  double offset = 0.0;
  std::vector<std::pair<Eigen::Index, double>> cols;
};

struct StandardForm {
  RMatrix s;   // rows x structural+slack columns
  RVector r;   // rhs, nonnegative after row flips
  RVector cost;
  std::vector<VarMap> vars;
  std::vector<double> row_flip;  // +1/-1 applied to the row
  Eigen::Index n_struct = 0;
  Eigen::Index n_ineq = 0;       // G rows + upper-bound rows
  Eigen::Index n_g = 0;
  Eigen::Index n_eq = 0;
  std::vector<Eigen::Index> slack_of_row;  // -1 for equality rows
  double sense_sign = 1.0;
  double const_term = 0.0;
};

StandardForm to_standard(const LpProblem& p) {
  const Eigen::Index n = p.num_vars();
  if (p.g.rows() != p.h.size() || (p.g.rows() > 0 && p.g.cols() != n))
    throw ContractViolation("solve_lp: G/h dimensions inconsistent with c");
  if (p.a.rows() != p.b.size() || (p.a.rows() > 0 && p.a.cols() != n))
    throw ContractViolation("solve_lp: A/b dimensions inconsistent with c");
  if (!p.bounds.empty() && static_cast<Eigen::Index>(p.bounds.size()) != n)
    throw ContractViolation("solve_lp: bounds size differs from number of variables");

  StandardForm f;
  f.sense_sign = p.sense == Sense::kMinimize ? 1.0 : -1.0;
  f.vars.resize(n);
  std::vector<std::pair<Eigen::Index, double>> ub_rows;  // (struct column, bound width)
  Eigen::Index nz = 0;
  for (Eigen::Index j = 0; j < n; ++j) {
    const VarBound bd = p.bounds.empty() ? VarBound{} : p.bounds[j];
    if (bd.lower > bd.upper) throw InfeasibleError("solve_lp: variable lower bound exceeds upper bound");
    auto& vm = f.vars[j];
    if (std::isfinite(bd.lower)) {
      vm.offset = bd.lower;
      vm.cols.push_back({nz, 1.0});
      if (std::isfinite(bd.upper)) ub_rows.push_back({nz, bd.upper - bd.lower});
      ++nz;
    } else if (std::isfinite(bd.upper)) {
      vm.offset = bd.upper;
      vm.cols.push_back({nz++, -1.0});
    } else {
      vm.cols.push_back({nz++, 1.0});
      vm.cols.push_back({nz++, -1.0});
    }
  }
  f.n_struct = nz;
  f.n_g = p.g.rows();
  f.n_ineq = f.n_g + static_cast<Eigen::Index>(ub_rows.size());
  f.n_eq = p.a.rows();
  const Eigen::Index rows = f.n_ineq + f.n_eq;
  const Eigen::Index cols = nz + f.n_ineq;

  RVector offset(n);
  for (Eigen::Index j = 0; j < n; ++j) offset(j) = f.vars[j].offset;

  f.s = RMatrix::Zero(rows, cols);
  f.r = RVector::Zero(rows);
  auto expand = [&](const RMatrix& m, Eigen::Index src_row, Eigen::Index dst_row) {
    for (Eigen::Index j = 0; j < n; ++j)
      for (auto [col, sign] : f.vars[j].cols) f.s(dst_row, col) += sign * m(src_row, j);
  };
  for (Eigen::Index i = 0; i < f.n_g; ++i) {
    expand(p.g, i, i);
    f.r(i) = p.h(i) - p.g.row(i).dot(offset);
  }
  for (std::size_t k = 0; k < ub_rows.size(); ++k) {
    const Eigen::Index row = f.n_g + static_cast<Eigen::Index>(k);
    f.s(row, ub_rows[k].first) = 1.0;
    f.r(row) = ub_rows[k].second;
  }
  f.slack_of_row.assign(rows, -1);
  for (Eigen::Index i = 0; i < f.n_ineq; ++i) {
    f.s(i, nz + i) = 1.0;
    f.slack_of_row[i] = nz + i;
  }
  for (Eigen::Index i = 0; i < f.n_eq; ++i) {
    expand(p.a, i, f.n_ineq + i);
    f.r(f.n_ineq + i) = p.b(i) - p.a.row(i).dot(offset);
  }
  f.row_flip.assign(rows, 1.0);
  for (Eigen::Index i = 0; i < rows; ++i) {
    if (f.r(i) < 0.0) {
      f.s.row(i) *= -1.0;
      f.r(i) *= -1.0;
      f.row_flip[i] = -1.0;
    }
  }
  f.cost = RVector::Zero(cols);
  for (Eigen::Index j = 0; j < n; ++j)
    for (auto [col, sign] : f.vars[j].cols) f.cost(col) += f.sense_sign * sign * p.c(j);
  f.const_term = p.c.dot(offset);
  return f;
}

class Simplex {
 public:
  Simplex(const StandardForm& f, const LpOptions& opt) : f_(f), opt_(opt) {
    m_ = f.s.rows();
    n_ = f.s.cols();
    // Initial basis: slacks of rows that were not flipped, artificials elsewhere.
    basis_.assign(m_, -1);
    std::vector<Eigen::Index> art_rows;
    for (Eigen::Index i = 0; i < m_; ++i) {
      const Eigen::Index sl = f.slack_of_row[i];
      if (sl >= 0 && f.row_flip[i] > 0) basis_[i] = sl;
      else art_rows.push_back(i);
    }
    n_art_ = static_cast<Eigen::Index>(art_rows.size());
    rhs_col_ = n_ + n_art_;
    tab_ = Tableau::Zero(m_ + 2, rhs_col_ + 1);
    tab_.block(0, 0, m_, n_) = f.s;
    tab_.block(0, rhs_col_, m_, 1) = f.r;
    for (Eigen::Index k = 0; k < n_art_; ++k) {
      tab_(art_rows[k], n_ + k) = 1.0;
      basis_[art_rows[k]] = n_ + k;
    }
    // Phase-2 cost row (m_) and phase-1 cost row (m_ + 1), as reduced costs.
    tab_.block(m_, 0, 1, n_) = f.cost.transpose();
    for (Eigen::Index k = 0; k < n_art_; ++k) tab_(m_ + 1, n_ + k) = 1.0;
    for (Eigen::Index i = 0; i < m_; ++i) {
      const Eigen::Index bv = basis_[i];
      if (bv < n_) {
        const double cb = f.cost(bv);
        if (cb != 0.0) tab_.row(m_) -= cb * tab_.row(i);
      } else {
        tab_.row(m_ + 1) -= tab_.row(i);
      }
    }
    scale_ = 1.0 + (f.r.size() ? f.r.cwiseAbs().maxCoeff() : 0.0);
  }

  void run() {
    if (n_art_ > 0) {
      iterate(m_ + 1, /*allow_artificial=*/true);
      const double infeas = -tab_(m_ + 1, rhs_col_);
      if (infeas > opt_.feas_tol * scale_) {
        std::ostringstream os;
        os << "solve_lp: infeasible (phase-1 residual " << infeas << ")";
        throw InfeasibleError(os.str());
      }
      drive_out_artificials();
    }
    iterate(m_, /*allow_artificial=*/false);
  }

  const std::vector<Eigen::Index>& basis() const { return basis_; }
  Eigen::Index num_struct_cols() const { return n_; }
  int pivots() const { return pivots_; }

 private:
  void pivot(Eigen::Index r, Eigen::Index c) {
    tab_.row(r) /= tab_(r, c);
    for (Eigen::Index i = 0; i < m_ + 2; ++i) {
      if (i == r) continue;
      const double factor = tab_(i, c);
      if (factor != 0.0) tab_.row(i) -= factor * tab_.row(r);
    }
    basis_[r] = c;
    ++pivots_;
  }

  void iterate(Eigen::Index cost_row, bool allow_artificial) {
    const Eigen::Index ncols = allow_artificial ? n_ + n_art_ : n_;
    int degenerate_run = 0;
    while (true) {
      if (pivots_ >= opt_.max_pivots) {
        std::ostringstream os;
        os << "solve_lp: pivot limit " << opt_.max_pivots << " reached";
        throw ConvergenceError(os.str());
      }
      const bool bland = degenerate_run >= opt_.degenerate_switch;
      Eigen::Index enter = -1;
      double best = -opt_.feas_tol;
      for (Eigen::Index j = 0; j < ncols; ++j) {
        const double d = tab_(cost_row, j);
        if (d < best) {
          enter = j;
          if (bland) break;
          best = d;
        }
      }
      if (enter < 0) return;

      Eigen::Index leave = -1;
      double ratio = std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < m_; ++i) {
        const double a = tab_(i, enter);
        if (a <= opt_.pivot_tol) continue;
        const double t = std::max(tab_(i, rhs_col_), 0.0) / a;
        if (leave < 0 || t < ratio - 1e-12 * (1.0 + ratio) ||
            (t <= ratio + 1e-12 * (1.0 + ratio) && basis_[i] < basis_[leave])) {
          if (t < ratio) ratio = t;
          leave = i;
        }
      }
      if (leave < 0) {
        if (cost_row == m_) throw UnboundedError("solve_lp: objective unbounded");
        throw ConvergenceError("solve_lp: phase-1 ratio test failed");
      }
      degenerate_run = (ratio <= 1e-12) ? degenerate_run + 1 : 0;
      pivot(leave, enter);
    }
  }

  void drive_out_artificials() {
    for (Eigen::Index i = 0; i < m_; ++i) {
      if (basis_[i] < n_) continue;
      Eigen::Index best = -1;
      double mag = opt_.pivot_tol;
      for (Eigen::Index j = 0; j < n_; ++j) {
        if (std::abs(tab_(i, j)) > mag) {
          mag = std::abs(tab_(i, j));
          best = j;
        }
      }
      // No candidate: the row is redundant and its artificial stays basic at zero.
      if (best >= 0) pivot(i, best);
    }
  }

  const StandardForm& f_;
  LpOptions opt_;
  Eigen::Index m_ = 0, n_ = 0, n_art_ = 0, rhs_col_ = 0;
  Tableau tab_;
  std::vector<Eigen::Index> basis_;
  int pivots_ = 0;
  double scale_ = 1.0;
};

}  // namespace

LpSolution solve_lp(const LpProblem& p, const LpOptions& opt) {
  const StandardForm f = to_standard(p);
  Simplex sx(f, opt);
  sx.run();

  // Re-factorize the optimal basis over the non-redundant rows.
  const auto& basis = sx.basis();
  const Eigen::Index n_cols = sx.num_struct_cols();
  std::vector<Eigen::Index> rows, cols;
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(basis.size()); ++i) {
    if (basis[i] < n_cols) {
      rows.push_back(i);
      cols.push_back(basis[i]);
    }
  }
  const Eigen::Index mb = static_cast<Eigen::Index>(rows.size());
  RMatrix bmat(mb, mb);
  RVector rb(mb), cb(mb);
  for (Eigen::Index i = 0; i < mb; ++i) {
    rb(i) = f.r(rows[i]);
    cb(i) = f.cost(cols[i]);
    for (Eigen::Index k = 0; k < mb; ++k) bmat(i, k) = f.s(rows[i], cols[k]);
  }
  Eigen::PartialPivLU<RMatrix> lu(bmat);
  const RVector xb = mb ? RVector(lu.solve(rb)) : RVector();
  const RVector yb = mb ? RVector(lu.transpose().solve(cb)) : RVector();

  RVector z = RVector::Zero(n_cols);
  for (Eigen::Index k = 0; k < mb; ++k) z(cols[k]) = xb(k);
  RVector y = RVector::Zero(f.s.rows());
  for (Eigen::Index i = 0; i < mb; ++i) y(rows[i]) = yb(i);

  // Certificate checks: primal feasibility, dual feasibility, zero gap.
  const double rscale = 1.0 + (f.r.size() ? f.r.cwiseAbs().maxCoeff() : 0.0);
  const double cscale = 1.0 + (f.cost.size() ? f.cost.cwiseAbs().maxCoeff() : 0.0);
  const double primal_res = f.s.rows() ? (f.s * z - f.r).cwiseAbs().maxCoeff() : 0.0;
  const double neg_z = z.size() ? std::max(0.0, -z.minCoeff()) : 0.0;
  const RVector reduced = f.cost - f.s.transpose() * y;
  const double neg_d = reduced.size() ? std::max(0.0, -reduced.minCoeff()) : 0.0;
  const double pobj = f.cost.dot(z);
  const double dobj = f.r.dot(y);
  if (primal_res > opt.feas_tol * rscale || neg_z > opt.feas_tol * rscale || neg_d > opt.feas_tol * cscale ||
      std::abs(pobj - dobj) > opt.feas_tol * (1.0 + std::abs(pobj))) {
    std::ostringstream os;
    os << "solve_lp: optimality certificate failed (primal residual " << primal_res << ", negative x " << neg_z
       << ", negative reduced cost " << neg_d << ", gap " << std::abs(pobj - dobj) << ")";
    throw ConvergenceError(os.str(), {primal_res, neg_z, neg_d, std::abs(pobj - dobj)});
  }

  LpSolution sol;
  sol.pivots = sx.pivots();
  sol.x.resize(p.num_vars());
  for (Eigen::Index j = 0; j < p.num_vars(); ++j) {
    double v = f.vars[j].offset;
    for (auto [col, sign] : f.vars[j].cols) v += sign * z(col);
    sol.x(j) = v;
  }
  sol.value = p.c.dot(sol.x);
  sol.dual_value = f.const_term + f.sense_sign * dobj;
  sol.ineq_duals.resize(f.n_g);
  for (Eigen::Index i = 0; i < f.n_g; ++i) sol.ineq_duals(i) = -f.row_flip[i] * y(i);
  sol.eq_duals.resize(f.n_eq);
  for (Eigen::Index i = 0; i < f.n_eq; ++i) sol.eq_duals(i) = f.row_flip[f.n_ineq + i] * y(f.n_ineq + i);
  return sol;
}

}  // namespace irssec::optkit
