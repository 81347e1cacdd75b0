// SPDX-License-Identifier: Apache-2.0
#include "irssec/chansim/scenario.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/SVD>

#include "irssec/errors.hpp"
#include "irssec/optkit/linalg.hpp"

namespace irssec::chansim {
namespace {

using optkit::CMatrix;
using optkit::CVector;

constexpr int kMaxAttempts = 100;

CMatrix exp_correlation_sqrt(int n, double rho) {
  optkit::RMatrix r(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) r(i, j) = std::pow(rho, std::abs(i - j));
  const auto eig = optkit::hermitian_eig(optkit::HermMatrix(r.cast<optkit::Complex>()));
  const optkit::RVector root = eig.values.cwiseMax(0.0).cwiseSqrt();
  return eig.vectors * root.asDiagonal() * eig.vectors.adjoint();
}

CVector iid_row(int n, double gain, Rng rng) {
  CVector v(n);
  for (int i = 0; i < n; ++i) v(i) = gain * rng.complex_normal();
  return v;
}

bool full_rank(const CMatrix& h) {
  if (h.size() == 0) return true;
  const Eigen::JacobiSVD<CMatrix> svd(h);
  const auto& s = svd.singularValues();
  return s(s.size() - 1) > 1e-9 * s(0);
}

CMatrix correlated_link(const ScenarioSpec& spec, Link link, int n_rx, double gain) {
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    Rng rng = Rng::stream(spec.seed, static_cast<std::uint64_t>(link), static_cast<std::uint64_t>(attempt));
    const CMatrix h = gain * correlated_mimo(n_rx, spec.M, spec.correlation_rho, rng);
    if (full_rank(h)) return h;
  }
  std::ostringstream os;
  os << "generate_channels: no full-rank draw for link " << static_cast<std::uint64_t>(link) << " after "
     << kMaxAttempts << " attempts";
  throw ConvergenceError(os.str());
}

}  // namespace

double distance(Point2 a, Point2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

void Geometry::validate() const {
  const Point2 pts[] = {alice, bob, eve, irs_bob, irs_eve};
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j)
      if (!(distance(pts[i], pts[j]) > 0.0)) throw ContractViolation("Geometry: two nodes share a position");
}

void ScenarioSpec::validate() const {
  geometry.validate();
  if (M < 1 || N_B < 0 || N_E < 0) throw ContractViolation("ScenarioSpec: need M >= 1 and N_B, N_E >= 0");
  if (direct_exponent < 0.0 || reflected_exponent < 0.0)
    throw ContractViolation("ScenarioSpec: path-loss exponents must be nonnegative");
  if (!(correlation_rho >= 0.0 && correlation_rho < 1.0))
    throw ContractViolation("ScenarioSpec: correlation_rho must lie in [0, 1)");
  if (!std::isfinite(reference_loss_db)) throw ContractViolation("ScenarioSpec: reference_loss_db must be finite");
}

double path_loss(double d, double exponent, double ref_loss_db) {
  if (!(d > 0.0)) throw DomainError("path_loss: distance must be positive");
  return std::sqrt(std::pow(10.0, ref_loss_db / 10.0) * std::pow(d, -exponent));
}

CMatrix correlated_mimo(int n_rx, int n_tx, double rho, Rng& rng) {
  if (!(rho >= 0.0 && rho < 1.0)) throw DomainError("correlated_mimo: rho must lie in [0, 1)");
  CMatrix g(n_rx, n_tx);
  for (int i = 0; i < n_rx; ++i)
    for (int j = 0; j < n_tx; ++j) g(i, j) = rng.complex_normal();
  if (rho == 0.0) return g;
  return exp_correlation_sqrt(n_rx, rho) * g * exp_correlation_sqrt(n_tx, rho);
}

model::ChannelSet generate_channels(const ScenarioSpec& spec) {
  spec.validate();
  const Geometry& g = spec.geometry;
  const double ref = spec.reference_loss_db;
  const double ed = spec.direct_exponent, er = spec.reflected_exponent;
  auto stream = [&](Link l) { return Rng::stream(spec.seed, static_cast<std::uint64_t>(l)); };

  model::ChannelSet ch;
  ch.M = spec.M;
  ch.N_B = spec.N_B;
  ch.N_E = spec.N_E;
  ch.h_AB = iid_row(spec.M, path_loss(distance(g.alice, g.bob), ed, ref), stream(Link::kAB));
  ch.h_AE = iid_row(spec.M, path_loss(distance(g.alice, g.eve), ed, ref), stream(Link::kAE));
  ch.h_AIB = correlated_link(spec, Link::kAIB, spec.N_B, path_loss(distance(g.alice, g.irs_bob), er, ref));
  ch.h_AIE = correlated_link(spec, Link::kAIE, spec.N_E, path_loss(distance(g.alice, g.irs_eve), er, ref));
  ch.h_IBB = iid_row(spec.N_B, path_loss(distance(g.irs_bob, g.bob), er, ref), stream(Link::kIBB));
  ch.h_IBE = iid_row(spec.N_B, path_loss(distance(g.irs_bob, g.eve), er, ref), stream(Link::kIBE));
  ch.h_IEE = iid_row(spec.N_E, path_loss(distance(g.irs_eve, g.eve), er, ref), stream(Link::kIEE));
  ch.h_IEB = iid_row(spec.N_E, path_loss(distance(g.irs_eve, g.bob), er, ref), stream(Link::kIEB));
  ch.validate();
  return ch;
}

}  // namespace irssec::chansim
