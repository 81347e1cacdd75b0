// SPDX-License-Identifier: Apache-2.0
#include "irssec/optkit/projection.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "irssec/errors.hpp"

namespace irssec::optkit {
namespace {

struct Point {
  CMatrix x;
  double aux = 0.0;

  Point& operator+=(const Point& o) {
    x += o.x;
    aux += o.aux;
    return *this;
  }
  Point operator-(const Point& o) const { return {x - o.x, aux - o.aux}; }
  Point operator+(const Point& o) const { return {x + o.x, aux + o.aux}; }
  double norm() const { return std::sqrt(x.squaredNorm() + aux * aux); }
};

double apply(const LinearRow& row, const Point& z) {
  return (row.a.mat().array() * z.x.transpose().array()).real().sum() + row.aux_coeff * z.aux;
}

double relative_residual(const LinearRow& row, const Point& z, double lhs) {
  const double scale =
      std::max({std::abs(row.rhs), row.a.frobenius_norm() * z.x.norm() + std::abs(row.aux_coeff * z.aux), 1e-300});
  return (lhs - row.rhs) / scale;
}

class AffineProjector {
 public:
  explicit AffineProjector(const std::vector<LinearRow>& rows) : rows_(rows) {
    const Eigen::Index m = static_cast<Eigen::Index>(rows.size());
    RMatrix gram(m, m);
    for (Eigen::Index i = 0; i < m; ++i)
      for (Eigen::Index j = i; j < m; ++j) {
        const double v = rows[i].a.inner(rows[j].a) + rows[i].aux_coeff * rows[j].aux_coeff;
        gram(i, j) = v;
        gram(j, i) = v;
      }
    if (m > 0) cod_.compute(gram);
  }

  Point operator()(const Point& z) const {
    const Eigen::Index m = static_cast<Eigen::Index>(rows_.size());
    if (m == 0) return z;
    RVector r(m);
    for (Eigen::Index k = 0; k < m; ++k) r(k) = apply(rows_[k], z) - rows_[k].rhs;
    const RVector mu = cod_.solve(r);
    Point out = z;
    for (Eigen::Index k = 0; k < m; ++k) {
      out.x -= mu(k) * rows_[k].a.mat();
      out.aux -= mu(k) * rows_[k].aux_coeff;
    }
    out.x = 0.5 * (out.x + out.x.adjoint());
    return out;
  }

 private:
  const std::vector<LinearRow>& rows_;
  Eigen::CompleteOrthogonalDecomposition<RMatrix> cod_;
};

Point project_halfspace(const LinearRow& row, const Point& z) {
  const double excess = apply(row, z) - row.rhs;
  if (excess <= 0.0) return z;
  const double nrm2 = row.a.frobenius_norm() * row.a.frobenius_norm() + row.aux_coeff * row.aux_coeff;
  if (nrm2 == 0.0) return z;
  const double t = excess / nrm2;
  return {z.x - t * row.a.mat(), z.aux - t * row.aux_coeff};
}

Point project_psd(const Point& z) {
  return {psd_project(HermMatrix::symmetrized(z.x)).mat(), z.aux};
}


// Semismooth Newton on the dual of the same projection. With W(v) = Z0 +
// sum y_k A_k - sum u_i H_i and C = PSD x R, the primal point is Pi_C(W) and
// the dual objective phi(v) = |Pi_C(W)|^2 / 2 - b^T y + c^T u is minimized
// over u >= 0 by projected Newton with a line search. Rows are scaled to unit
// norm. W carries the far-away input while Pi_C(W) can be 1e9 times smaller,
// so the dual runs in long double.
class DualNewton {
 public:
  using Real = long double;
  using XComplex = std::complex<Real>;
  using XMatrix = Eigen::Matrix<XComplex, Eigen::Dynamic, Eigen::Dynamic>;
  using XRVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;
  using XRMatrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;

  DualNewton(const Point& z0, const std::vector<LinearRow>& equalities, const std::vector<LinearRow>& halfspaces)
      : x0_(z0.x.cast<XComplex>()), aux0_(z0.aux), n_eq_(static_cast<Eigen::Index>(equalities.size())) {
    auto add = [&](const LinearRow& row, Real sign) {
      const Real nrm = std::sqrt(static_cast<Real>(row.a.frobenius_norm()) * row.a.frobenius_norm() +
                                 static_cast<Real>(row.aux_coeff) * row.aux_coeff);
      const Real sc = sign * (nrm > 0 ? 1 / nrm : Real(1));
      dir_x_.push_back(row.a.mat().cast<XComplex>() * sc);
      dir_aux_.push_back(sc * row.aux_coeff);
      rhs_.push_back(sc * row.rhs);
    };
    for (const auto& row : equalities) add(row, 1);
    for (const auto& row : halfspaces) add(row, -1);
  }

  // Newton steps until `done` accepts the primal point, the step cap is hit or
  // the line search fails. The line search accepts a step that decreases phi
  // or one that shrinks the KKT residual.
  template <class Done>
  Point solve(int max_iters, Done&& done) {
    const Eigen::Index m = static_cast<Eigen::Index>(rhs_.size());
    XRVector v = XRVector::Zero(m);
    Eval cur = evaluate(v);
    XRVector g = gradient(cur);
    Real kkt = kkt_residual(v, g);
    for (int it = 0; it < max_iters && kkt > 0 && !done(to_point(cur)); ++it) {
      std::vector<Eigen::Index> free;
      for (Eigen::Index k = 0; k < m; ++k)
        if (k < n_eq_ || v(k) > 0 || g(k) <= 0) free.push_back(k);
      const XRMatrix h = hessian(cur);
      const Eigen::Index nf = static_cast<Eigen::Index>(free.size());
      XRMatrix hf(nf, nf);
      XRVector gf(nf);
      for (Eigen::Index i = 0; i < nf; ++i) {
        gf(i) = g(free[i]);
        for (Eigen::Index j = 0; j < nf; ++j) hf(i, j) = h(free[i], free[j]);
      }
      hf.diagonal().array() += Real(1e-6) * std::min<Real>(1, gf.norm());
      const XRVector df = hf.ldlt().solve(-gf);
      XRVector d = XRVector::Zero(m);
      for (Eigen::Index i = 0; i < nf; ++i) d(free[i]) = df(i);

      bool moved = false;
      Real t = 1;
      for (int ls = 0; ls < 60 && !moved; ++ls, t /= 2) {
        XRVector trial = v + t * d;
        for (Eigen::Index k = n_eq_; k < m; ++k) trial(k) = std::max<Real>(0, trial(k));
        Eval next = evaluate(trial);
        const XRVector g_next = gradient(next);
        const Real kkt_next = kkt_residual(trial, g_next);
        const bool phi_ok = next.phi <= cur.phi + Real(1e-4) * g.dot(trial - v);
        const bool kkt_ok = kkt_next <= (1 - Real(1e-4) * t) * kkt;
        if (phi_ok || kkt_ok) {
          v = std::move(trial);
          cur = std::move(next);
          g = g_next;
          kkt = kkt_next;
          moved = true;
        }
      }
      if (!moved) break;
    }
    return to_point(cur);
  }

 private:
  struct Eval {
    XMatrix px;  // PSD part of Pi_C(W)
    Real aux = 0;
    XRVector values;
    XMatrix vectors;
    Real phi = 0;
  };

  static Point to_point(const Eval& e) { return {e.px.cast<Complex>(), static_cast<double>(e.aux)}; }

  // Projected-gradient optimality measure for min phi s.t. u >= 0.
  Real kkt_residual(const XRVector& v, const XRVector& g) const {
    Real worst = 0;
    for (Eigen::Index k = 0; k < v.size(); ++k)
      worst = std::max(worst, k < n_eq_ ? std::abs(g(k)) : std::abs(v(k) - std::max<Real>(0, v(k) - g(k))));
    return worst;
  }

  Eval evaluate(const XRVector& v) const {
    XMatrix wx = x0_;
    Real waux = aux0_;
    for (std::size_t k = 0; k < rhs_.size(); ++k) {
      const Real vk = v(static_cast<Eigen::Index>(k));
      wx += vk * dir_x_[k];
      waux += vk * dir_aux_[k];
    }
    wx = (wx + wx.adjoint()) / Real(2);
    Eigen::SelfAdjointEigenSolver<XMatrix> es(wx);
    Eval e;
    e.values = es.eigenvalues();
    e.vectors = es.eigenvectors();
    const XRVector pos = e.values.cwiseMax(Real(0));
    e.px = e.vectors * pos.cast<XComplex>().asDiagonal() * e.vectors.adjoint();
    e.aux = waux;
    Real phi = (pos.squaredNorm() + waux * waux) / 2;
    for (std::size_t k = 0; k < rhs_.size(); ++k) phi -= rhs_[k] * v(static_cast<Eigen::Index>(k));
    e.phi = phi;
    return e;
  }

  XRVector gradient(const Eval& e) const {
    XRVector g(static_cast<Eigen::Index>(rhs_.size()));
    for (std::size_t k = 0; k < rhs_.size(); ++k)
      g(static_cast<Eigen::Index>(k)) =
          (dir_x_[k].array() * e.px.transpose().array()).real().sum() + dir_aux_[k] * e.aux - rhs_[k];
    return g;
  }

  XRMatrix hessian(const Eval& e) const {
    const XRVector& lam = e.values;
    const Eigen::Index n = lam.size();
    XRMatrix omega(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) {
        const Real li = lam(i), lj = lam(j);
        if (li > 0 && lj > 0) omega(i, j) = 1;
        else if (li <= 0 && lj <= 0) omega(i, j) = 0;
        else omega(i, j) = (std::max<Real>(li, 0) - std::max<Real>(lj, 0)) / (li - lj);
      }
    const Eigen::Index m = static_cast<Eigen::Index>(rhs_.size());
    std::vector<XMatrix> rotated(rhs_.size());
    for (std::size_t k = 0; k < rhs_.size(); ++k) rotated[k] = e.vectors.adjoint() * dir_x_[k] * e.vectors;
    XRMatrix h(m, m);
    for (Eigen::Index i = 0; i < m; ++i)
      for (Eigen::Index j = i; j < m; ++j) {
        const auto ui = static_cast<std::size_t>(i), uj = static_cast<std::size_t>(j);
        const Real val = (rotated[ui].conjugate().array() * omega.array().cast<XComplex>() * rotated[uj].array())
                             .real()
                             .sum() +
                         dir_aux_[ui] * dir_aux_[uj];
        h(i, j) = val;
        h(j, i) = val;
      }
    return h;
  }

  XMatrix x0_;
  Real aux0_;
  Eigen::Index n_eq_;
  std::vector<XMatrix> dir_x_;
  std::vector<Real> dir_aux_;
  std::vector<Real> rhs_;
};

}  // namespace

ProjectionResult project_affine_psd(const HermMatrix& x0, double aux0, const std::vector<LinearRow>& equalities,
                                    const std::vector<LinearRow>& halfspaces, const ProjectionOptions& opt) {
  const Eigen::Index n = x0.dim();
  for (const auto* group : {&equalities, &halfspaces})
    for (const auto& row : *group)
      if (row.a.dim() != n) throw ContractViolation("project_affine_psd: constraint dimension mismatch");

  const AffineProjector affine(equalities);
  const std::size_t n_sets = 2 + halfspaces.size();

  auto equality_residual = [&](const Point& z) {
    double worst = 0.0;
    for (const auto& row : equalities) worst = std::max(worst, std::abs(relative_residual(row, z, apply(row, z))));
    return worst;
  };
  auto halfspace_violation = [&](const Point& z) {
    double worst = 0.0;
    for (const auto& row : halfspaces) worst = std::max(worst, relative_residual(row, z, apply(row, z)));
    return worst;
  };

  int cycle = 0;
  auto dykstra = [&](Point z) {
    std::vector<Point> increments(n_sets, Point{CMatrix::Zero(n, n), 0.0});
    for (int c = 0; c < opt.max_cycles; ++c) {
      const Point start = z;
      auto visit = [&](std::size_t idx, auto&& proj) {
        const Point y = z + increments[idx];
        z = proj(y);
        increments[idx] = y - z;
      };
      visit(0, [&](const Point& y) { return affine(y); });
      for (std::size_t h = 0; h < halfspaces.size(); ++h)
        visit(1 + h, [&](const Point& y) { return project_halfspace(halfspaces[h], y); });
      visit(n_sets - 1, project_psd);
      ++cycle;

      const double change = (z - start).norm();
      const double size = std::max(z.norm(), 1e-300);
      if (change <= opt.change_tol * size && equality_residual(z) <= opt.equality_tol &&
          halfspace_violation(z) <= opt.halfspace_tol)
        break;
      if (change <= 1e-15 * size) break;
    }
    return z;
  };

  ProjectionResult out;
  auto fill = [&](const Point& p) {
    out.x = HermMatrix::symmetrized(p.x);
    out.aux = p.aux;
    out.max_equality_residual = equality_residual(p);
    out.max_halfspace_violation = halfspace_violation(p);
    out.min_eigenvalue = min_eigenvalue(out.x);
  };
  auto misses = [&] {
    const double scale = std::max(out.x.frobenius_norm(), 1e-300);
    return out.max_equality_residual > opt.equality_tol || out.max_halfspace_violation > opt.halfspace_tol ||
           out.min_eigenvalue < -opt.psd_tol * std::max(1.0, scale);
  };
  fill(dykstra({x0.mat(), aux0}));
  if (misses() && opt.newton_fallback) {
    out.newton_fallback = true;
    auto done = [&](const Point& p) {
      return equality_residual(p) <= 1e-2 * opt.equality_tol && halfspace_violation(p) <= opt.halfspace_tol;
    };
    fill(DualNewton({x0.mat(), aux0}, equalities, halfspaces).solve(opt.max_newton_iters, done));
  }
  if (misses() && opt.restore) {
    HermMatrix x = out.x;
    double aux = out.aux;
    opt.restore(x, aux);
    fill({x.mat(), aux});
    out.restored = true;
  }
  out.cycles = cycle;
  if (misses()) {
    std::ostringstream os;
    os << "project_affine_psd: Dykstra did not converge in " << cycle << " cycles"
       << (out.newton_fallback ? " and the dual Newton fallback missed" : "") << (out.restored ? ", also after restoration" : "") << " (equality residual "
       << out.max_equality_residual << ", halfspace violation " << out.max_halfspace_violation
       << ", min eigenvalue " << out.min_eigenvalue << ")";
    throw ConvergenceError(os.str(),
                           {out.max_equality_residual, out.max_halfspace_violation, out.min_eigenvalue});
  }
  return out;
}

}  // namespace irssec::optkit
