// SPDX-License-Identifier: Apache-2.0
#include "irssec/optkit/linalg.hpp"

#include <cmath>
#include <sstream>

#include "irssec/errors.hpp"

namespace irssec::optkit {

HermMatrix::HermMatrix(CMatrix m, double tol) {
  if (m.rows() != m.cols()) {
    std::ostringstream os;
    os << "HermMatrix: matrix is " << m.rows() << "x" << m.cols() << ", not square";
    throw ContractViolation(os.str());
  }
  const Eigen::Index n = m.rows();
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i <= j; ++i) {
      const double dev = std::abs(m(i, j) - std::conj(m(j, i)));
      if (!(dev <= tol)) {
        std::ostringstream os;
        os << "HermMatrix: entry (" << i << "," << j << ") deviates from Hermitian by " << dev;
        throw ContractViolation(os.str());
      }
    }
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    m(j, j) = Complex(m(j, j).real(), 0.0);
    for (Eigen::Index i = j + 1; i < n; ++i) m(i, j) = std::conj(m(j, i));
  }
  m_ = std::move(m);
}

HermMatrix HermMatrix::symmetrized(const CMatrix& m) {
  if (m.rows() != m.cols()) throw ContractViolation("HermMatrix::symmetrized: not square");
  CMatrix h = 0.5 * (m + m.adjoint());
  for (Eigen::Index j = 0; j < h.rows(); ++j) h(j, j) = Complex(h(j, j).real(), 0.0);
  return HermMatrix(std::move(h), Unchecked{});
}

HermMatrix HermMatrix::diagonal(const RVector& d) {
  CMatrix m = CMatrix::Zero(d.size(), d.size());
  for (Eigen::Index i = 0; i < d.size(); ++i) m(i, i) = d(i);
  return HermMatrix(std::move(m), Unchecked{});
}

HermMatrix HermMatrix::outer(const CVector& v) { return symmetrized(v * v.adjoint()); }

double HermMatrix::inner(const HermMatrix& other) const {
  if (other.dim() != dim()) throw ContractViolation("HermMatrix::inner: dimension mismatch");
  // Re tr(A B) = sum_ij Re(A_ij * B_ji) = sum_ij Re(A_ij * conj(B_ij)) for Hermitian B.
  return (m_.array() * other.m_.array().conjugate()).real().sum();
}

HermMatrix HermMatrix::operator+(const HermMatrix& o) const {
  if (o.dim() != dim()) throw ContractViolation("HermMatrix::+: dimension mismatch");
  return HermMatrix(m_ + o.m_, Unchecked{});
}

HermMatrix HermMatrix::operator-(const HermMatrix& o) const {
  if (o.dim() != dim()) throw ContractViolation("HermMatrix::-: dimension mismatch");
  return HermMatrix(m_ - o.m_, Unchecked{});
}

HermMatrix HermMatrix::operator*(double s) const { return HermMatrix(m_ * s, Unchecked{}); }

EigenDecomposition hermitian_eig(const HermMatrix& h) {
  if (h.dim() == 0) return {RVector(), CMatrix()};
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h.mat());
  if (es.info() != Eigen::Success) throw ConvergenceError("hermitian_eig: eigensolver failed");
  return {es.eigenvalues(), es.eigenvectors()};
}

double min_eigenvalue(const HermMatrix& h) {
  if (h.dim() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h.mat(), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

namespace {

// Rotate v so that its largest-magnitude entry (first on ties) is real positive.
void canonical_phase(CVector& v) {
  Eigen::Index best = 0;
  double mag = -1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > mag * (1.0 + 1e-12)) {
      mag = std::abs(v(i));
      best = i;
    }
  }
  if (mag > 0.0) v *= std::conj(v(best)) / mag;
}

}  // namespace

GeneralizedEigResult max_generalized_eigvec(const HermMatrix& a, const HermMatrix& b) {
  if (a.dim() != b.dim()) throw ContractViolation("max_generalized_eigvec: dimension mismatch");
  const Eigen::Index n = a.dim();
  if (n == 0) throw ContractViolation("max_generalized_eigvec: empty pencil");

  const double bmin = min_eigenvalue(b);
  if (!(bmin > 1e-12)) {
    std::ostringstream os;
    os << "max_generalized_eigvec: B is not positive definite (min eigenvalue " << bmin << ")";
    throw NotPositiveDefinite(os.str());
  }
  Eigen::LLT<CMatrix> llt(b.mat());
  if (llt.info() != Eigen::Success) throw NotPositiveDefinite("max_generalized_eigvec: Cholesky of B failed");

  // C = L^{-1} A L^{-H}
  const CMatrix linv_a = llt.matrixL().solve(a.mat());
  const CMatrix c = llt.matrixL().solve(linv_a.adjoint()).adjoint();
  const auto eig = hermitian_eig(HermMatrix::symmetrized(c));

  const double top = eig.values(n - 1);
  const double slack = 1e-12 * std::max(1.0, std::abs(top));
  Eigen::Index pick = n - 1;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (eig.values(i) >= top - slack) {
      pick = i;
      break;
    }
  }
  CVector u = llt.matrixU().solve(eig.vectors.col(pick));
  u.normalize();
  canonical_phase(u);
  const double num = (u.adjoint() * a.mat() * u)(0).real();
  const double den = (u.adjoint() * b.mat() * u)(0).real();
  return {u, num / den};
}

HermMatrix psd_project(const HermMatrix& h) {
  if (h.dim() == 0) return h;
  const auto eig = hermitian_eig(h);
  if (eig.values(0) >= 0.0) return h;
  const RVector clipped = eig.values.cwiseMax(0.0);
  return HermMatrix::symmetrized(eig.vectors * clipped.asDiagonal() * eig.vectors.adjoint());
}

}  // namespace irssec::optkit
