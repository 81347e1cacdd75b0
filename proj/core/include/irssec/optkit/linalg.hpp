// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>

#include <Eigen/Dense>

namespace irssec::optkit {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

/// Dense complex Hermitian matrix. Construction checks the Hermitian
/// invariant; the stored matrix is exactly Hermitian (diagonal real, the
/// lower triangle mirrored from the upper one) after construction.
class HermMatrix {
 public:
  static constexpr double kHermitianTol = 1e-12;

  HermMatrix() = default;

  /// Throws ContractViolation if |m(i,j) - conj(m(j,i))| exceeds
  /// `tol` (absolute) or if m is not square.
  explicit HermMatrix(CMatrix m, double tol = kHermitianTol);

  /// Hermitian part (m + m^H)/2; never throws on asymmetry.
  static HermMatrix symmetrized(const CMatrix& m);

  static HermMatrix zero(Eigen::Index n) { return HermMatrix(CMatrix::Zero(n, n)); }
  static HermMatrix identity(Eigen::Index n) { return HermMatrix(CMatrix::Identity(n, n)); }
  static HermMatrix diagonal(const RVector& d);
  /// v v^H
  static HermMatrix outer(const CVector& v);

  Eigen::Index dim() const noexcept { return m_.rows(); }
  const CMatrix& mat() const noexcept { return m_; }
  Complex operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

  /// Re tr(this * other); real for any pair of Hermitian matrices.
  double inner(const HermMatrix& other) const;
  double frobenius_norm() const { return m_.norm(); }

  HermMatrix operator+(const HermMatrix& o) const;
  HermMatrix operator-(const HermMatrix& o) const;
  HermMatrix operator*(double s) const;

 private:
  struct Unchecked {};
  HermMatrix(CMatrix m, Unchecked) : m_(std::move(m)) {}

  CMatrix m_;
};

struct EigenDecomposition {
  RVector values;   // ascending
  CMatrix vectors;  // orthonormal columns, vectors.col(i) pairs with values(i)
};

/// Eigendecomposition of a Hermitian matrix.
EigenDecomposition hermitian_eig(const HermMatrix& h);

/// Unit vector maximizing the Rayleigh quotient (x^H A x)/(x^H B x).
/// Throws NotPositiveDefinite when the smallest eigenvalue of B is <= 1e-12.
struct GeneralizedEigResult {
  CVector vector;
  double eigenvalue;  // the attained maximal quotient
};
GeneralizedEigResult max_generalized_eigvec(const HermMatrix& a, const HermMatrix& b);

/// Nearest PSD matrix in Frobenius norm (negative eigenvalues clipped to 0).
HermMatrix psd_project(const HermMatrix& h);

/// Smallest eigenvalue; convenience for PSD checks.
double min_eigenvalue(const HermMatrix& h);

}  // namespace irssec::optkit
