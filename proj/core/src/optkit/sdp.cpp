// SPDX-License-Identifier: Apache-2.0
#include "irssec/optkit/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "irssec/errors.hpp"

namespace irssec::optkit {
namespace {

// The IPM runs in extended precision: lifted SNR forms at realistic power
// levels give objective and constraint matrices with spectra spanning ~1e13.
using Real = long double;
using XComplex = std::complex<Real>;
using XMatrix = Eigen::Matrix<XComplex, Eigen::Dynamic, Eigen::Dynamic>;
using XVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;
using XRMatrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;

// A block-diagonal Hermitian matrix: block 0 is the n x n variable, block 1
// (present only with an auxiliary scalar) is 1 x 1.
using Blocks = std::vector<XMatrix>;

Real trace_product(const XMatrix& a, const XMatrix& b) {
  // Re tr(A B) = Re sum_ij A_ij B_ji
  return (a.array() * b.transpose().array()).real().sum();
}

Real inner(const Blocks& a, const Blocks& b) {
  Real s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += trace_product(a[i], b[i]);
  return s;
}

Real norm(const Blocks& a) {
  Real s = 0.0;
  for (const auto& m : a) s += m.squaredNorm();
  return std::sqrt(s);
}

Blocks scaled_identity(const std::vector<Eigen::Index>& dims, Real s) {
  Blocks out;
  for (auto d : dims) out.push_back(XMatrix::Identity(d, d) * s);
  return out;
}

XMatrix herm_part(const XMatrix& m) { return 0.5 * (m + m.adjoint()); }

// Largest t with X + t D still positive definite (infinity when unbounded).
Real max_step(const XMatrix& x, const XMatrix& d) {
  Eigen::LLT<XMatrix> llt(x);
  if (llt.info() != Eigen::Success) return 0.0;
  const XMatrix a = llt.matrixL().solve(d);
  const XMatrix w = llt.matrixL().solve(a.adjoint()).adjoint();
  Eigen::SelfAdjointEigenSolver<XMatrix> es(herm_part(w), Eigen::EigenvaluesOnly);
  const Real lmin = es.eigenvalues()(0);
  if (lmin >= 0.0) return std::numeric_limits<Real>::infinity();
  return -1.0 / lmin;
}

Real max_step(const Blocks& x, const Blocks& d) {
  Real t = std::numeric_limits<Real>::infinity();
  for (std::size_t i = 0; i < x.size(); ++i) t = std::min(t, max_step(x[i], d[i]));
  return t;
}

struct ScaledProblem {
  std::vector<Eigen::Index> dims;
  Blocks c;                 // minimization objective
  std::vector<Blocks> a;    // constraint matrices
  XVector b;
  XVector row_scale;        // original row k = scaled row k / row_scale(k)
  Real obj_scale = 1.0;
  std::vector<int> kept;    // original index of each kept row
};

ScaledProblem prepare(const SdpProblem& p) {
  const Eigen::Index n = p.dim();
  ScaledProblem s;
  s.dims.push_back(n);
  if (p.has_aux) s.dims.push_back(1);

  s.c.push_back(-p.objective.mat().cast<XComplex>());
  if (p.has_aux) s.c.push_back(XMatrix::Constant(1, 1, XComplex(-p.aux_objective)));
  const Real cn = norm(s.c);
  s.obj_scale = 1.0 / std::max<Real>(1.0L, cn);
  for (auto& m : s.c) m *= s.obj_scale;

  std::vector<Real> rhs, scale;
  for (std::size_t k = 0; k < p.constraints.size(); ++k) {
    const auto& con = p.constraints[k];
    if (con.a.dim() != n) {
      std::ostringstream os;
      os << "solve_sdp: constraint " << k << " has dimension " << con.a.dim() << ", expected " << n;
      throw ContractViolation(os.str());
    }
    if (!p.has_aux && con.aux_coeff != 0.0)
      throw ContractViolation("solve_sdp: auxiliary coefficient given without auxiliary variable");
    Blocks row{con.a.mat().cast<XComplex>()};
    if (p.has_aux) row.push_back(XMatrix::Constant(1, 1, XComplex(con.aux_coeff)));
    const Real rn = norm(row);
    if (rn == 0.0) {
      if (con.rhs != 0.0) throw InfeasibleError("solve_sdp: zero constraint row with nonzero right-hand side");
      continue;
    }
    for (auto& m : row) m /= rn;
    s.a.push_back(std::move(row));
    rhs.push_back(con.rhs / rn);
    scale.push_back(1.0 / rn);
    s.kept.push_back(static_cast<int>(k));
  }
  s.b = Eigen::Map<XVector>(rhs.data(), static_cast<Eigen::Index>(rhs.size()));
  s.row_scale = Eigen::Map<XVector>(scale.data(), static_cast<Eigen::Index>(scale.size()));
  return s;
}

struct Residuals {
  XVector rp;
  Blocks rd;
  Real pinf, dinf, pobj, dobj, gap, relgap;
};

}  // namespace

SdpSolution solve_sdp(const SdpProblem& p, const SdpOptions& opt) {
  const ScaledProblem s = prepare(p);
  const std::size_t m = s.a.size();
  const std::size_t nb = s.dims.size();
  Eigen::Index total_dim = 0;
  for (auto d : s.dims) total_dim += d;

  // Initial point in the style of SDPT3.
  const Real sqrt_n = std::sqrt(static_cast<Real>(total_dim));
  Real xi = std::max<Real>(10.0L, sqrt_n);
  for (std::size_t k = 0; k < m; ++k) xi = std::max(xi, sqrt_n * (1.0 + std::abs(s.b(k))) / 2.0);
  Real eta = std::max<Real>({10.0L, sqrt_n, norm(s.c)});
  Blocks x = scaled_identity(s.dims, xi);
  Blocks z = scaled_identity(s.dims, eta);
  XVector y = XVector::Zero(static_cast<Eigen::Index>(m));

  const Real bnorm = s.b.norm();
  const Real cnorm = norm(s.c);

  auto residuals = [&](const Blocks& xx, const XVector& yy, const Blocks& zz) {
    Residuals r;
    r.rp.resize(static_cast<Eigen::Index>(m));
    for (std::size_t k = 0; k < m; ++k) r.rp(k) = s.b(k) - inner(s.a[k], xx);
    r.rd = s.c;
    for (std::size_t bi = 0; bi < nb; ++bi) {
      r.rd[bi] -= zz[bi];
      for (std::size_t k = 0; k < m; ++k) r.rd[bi] -= yy(k) * s.a[k][bi];
    }
    r.pinf = r.rp.norm() / (1.0 + bnorm);
    r.dinf = norm(r.rd) / (1.0 + cnorm);
    r.pobj = inner(s.c, xx);
    r.dobj = s.b.dot(yy);
    r.gap = inner(xx, zz);
    r.relgap = std::max(r.gap, std::abs(r.pobj - r.dobj)) / (s.obj_scale + std::abs(r.pobj) + std::abs(r.dobj));
    return r;
  };

  int iter = 0;
  Residuals res = residuals(x, y, z);
  struct Iterate {
    Blocks x, z;
    XVector y;
    Residuals res;
    Real merit;
  };
  auto merit_of = [](const Residuals& r) { return std::max({r.pinf, r.dinf, r.relgap}); };
  Iterate best{x, z, y, res, merit_of(res)};
  Real last_gain = best.merit;
  int stalled = 0;
  for (; iter < opt.max_iters; ++iter) {
    if (res.pinf <= opt.feas_tol && res.dinf <= opt.feas_tol && res.relgap <= opt.gap_tol) break;
    const Real merit = merit_of(res);
    if (merit < best.merit) best = {x, z, y, res, merit};
    if (merit < 0.9 * last_gain) {
      last_gain = merit;
      stalled = 0;
    } else if (++stalled >= opt.stall_iters) {
      break;
    }

    Real xnorm = norm(x);
    if (y.size() > 0 && y.cwiseAbs().maxCoeff() > opt.divergence_limit && res.dobj > 0.0 &&
        res.dinf <= 1e-6 * y.norm()) {
      throw InfeasibleError("solve_sdp: primal infeasible (dual ray b^T y -> +inf found)");
    }
    if (xnorm > opt.divergence_limit && res.pobj < 0.0 && res.pinf <= 1e-6 * xnorm) {
      throw UnboundedError("solve_sdp: dual infeasible (objective unbounded along a primal ray)");
    }

    Blocks zinv(nb);
    bool ok = true;
    for (std::size_t bi = 0; bi < nb; ++bi) {
      Eigen::LLT<XMatrix> llt(z[bi]);
      if (llt.info() != Eigen::Success) {
        ok = false;
        break;
      }
      zinv[bi] = llt.solve(XMatrix::Identity(s.dims[bi], s.dims[bi]));
      zinv[bi] = herm_part(zinv[bi]);
    }
    if (!ok) break;

    // Schur complement M_ij = Re tr(A_i X A_j Z^{-1}).
    std::vector<Blocks> xaz(m, Blocks(nb));
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t bi = 0; bi < nb; ++bi) xaz[j][bi] = x[bi] * s.a[j][bi] * zinv[bi];
    XRMatrix schur(m, m);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i; j < m; ++j) {
        const Real v = inner(s.a[i], xaz[j]);
        schur(i, j) = v;
        schur(j, i) = v;
      }
    Eigen::LDLT<XRMatrix> ldlt(schur);
    const bool use_ldlt = ldlt.info() == Eigen::Success && ldlt.isPositive();
    Eigen::CompleteOrthogonalDecomposition<XRMatrix> cod;
    if (!use_ldlt) cod.compute(schur);

    Blocks x_rd_zinv(nb);
    for (std::size_t bi = 0; bi < nb; ++bi) x_rd_zinv[bi] = x[bi] * res.rd[bi] * zinv[bi];
    const Real mu = res.gap / static_cast<Real>(total_dim);

    auto direction = [&](const Blocks& k, Blocks& dx, XVector& dy, Blocks& dz) {
      XVector rhs(static_cast<Eigen::Index>(m));
      for (std::size_t i = 0; i < m; ++i)
        rhs(i) = res.rp(i) - inner(s.a[i], k) + inner(s.a[i], x_rd_zinv);
      dy = use_ldlt ? XVector(ldlt.solve(rhs)) : XVector(cod.solve(rhs));
      dz = res.rd;
      dx.assign(nb, XMatrix());
      for (std::size_t bi = 0; bi < nb; ++bi) {
        for (std::size_t j = 0; j < m; ++j) dz[bi] -= dy(j) * s.a[j][bi];
        dz[bi] = herm_part(dz[bi]);
        dx[bi] = herm_part(k[bi] - x[bi] * dz[bi] * zinv[bi]);
      }
    };

    // Predictor.
    Blocks k_aff(nb);
    for (std::size_t bi = 0; bi < nb; ++bi) k_aff[bi] = -x[bi];
    Blocks dx, dz;
    XVector dy;
    direction(k_aff, dx, dy, dz);
    Real ap = std::min<Real>(1.0L, max_step(x, dx));
    Real ad = std::min<Real>(1.0L, max_step(z, dz));

    Blocks xa = x, za = z;
    for (std::size_t bi = 0; bi < nb; ++bi) {
      xa[bi] += ap * dx[bi];
      za[bi] += ad * dz[bi];
    }
    const Real mu_aff = inner(xa, za) / static_cast<Real>(total_dim);
    const Real sigma = std::clamp<Real>(std::pow(std::max<Real>(mu_aff, 0.0L) / mu, 3.0L), 0.0L, 1.0L);

    // Corrector.
    Blocks k_cor(nb);
    for (std::size_t bi = 0; bi < nb; ++bi)
      k_cor[bi] = sigma * mu * zinv[bi] - x[bi] - dx[bi] * dz[bi] * zinv[bi];
    direction(k_cor, dx, dy, dz);
    ap = std::min<Real>(1.0L, opt.step_fraction * max_step(x, dx));
    ad = std::min<Real>(1.0L, opt.step_fraction * max_step(z, dz));
    if (ap < 1e-14 && ad < 1e-14) break;

    for (std::size_t bi = 0; bi < nb; ++bi) {
      x[bi] = herm_part(x[bi] + ap * dx[bi]);
      z[bi] = herm_part(z[bi] + ad * dz[bi]);
    }
    y += ad * dy;
    res = residuals(x, y, z);
  }

  if (merit_of(res) > best.merit) {
    x = std::move(best.x);
    z = std::move(best.z);
    y = std::move(best.y);
    res = best.res;
  }

  // Map back to the caller's (maximization) problem.
  SdpSolution sol;
  sol.x = HermMatrix::symmetrized(x[0].cast<Complex>());
  if (p.has_aux) sol.aux = static_cast<double>(x[1](0, 0).real());
  sol.iterations = iter;

  sol.dual.assign(p.constraints.size(), 0.0);
  double dual_obj_min = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    const double yk = static_cast<double>(y(k) * s.row_scale(k) / s.obj_scale);
    sol.dual[s.kept[k]] = -yk;
    dual_obj_min += yk * p.constraints[s.kept[k]].rhs;
  }
  sol.value = -dual_obj_min;
  sol.primal_value = sol.x.inner(p.objective) + (p.has_aux ? p.aux_objective * *sol.aux : 0.0);

  for (const auto& con : p.constraints) {
    const double lhs = sol.x.inner(con.a) + (p.has_aux ? con.aux_coeff * *sol.aux : 0.0);
    sol.max_equality_residual =
        std::max(sol.max_equality_residual, std::abs(lhs - con.rhs) / (1.0 + std::abs(con.rhs)));
  }
  sol.min_eigenvalue = min_eigenvalue(sol.x);
  if (p.has_aux) sol.min_eigenvalue = std::min(sol.min_eigenvalue, *sol.aux);

  const double gap = std::abs(sol.value - sol.primal_value);
  const bool accurate = sol.max_equality_residual <= 1e-7 && sol.min_eigenvalue >= -1e-8 &&
                        gap <= 1e-7 * (1.0 + std::abs(sol.value)) && res.dinf <= 1e-7;
  if (!accurate) {
    std::ostringstream os;
    os << "solve_sdp: no convergence after " << iter << " iterations (primal infeasibility "
       << sol.max_equality_residual << ", dual infeasibility " << res.dinf << ", gap " << gap << ")";
    throw ConvergenceError(os.str(), {sol.max_equality_residual, static_cast<double>(res.dinf), gap});
  }
  return sol;
}

}  // namespace irssec::optkit
