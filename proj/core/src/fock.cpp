#include "gocclab/fock.hpp"

#include <fmt/format.h>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>

namespace gocclab {

namespace {

constexpr double kHermTol = 1e-12;
constexpr double kTruncationBudget = 1e-8;
constexpr double kEigFloorRel = 1e-12;

CMat hermitized(const CMat& a) { return 0.5 * (a + a.adjoint()); }

// Single-mode Fock amplitudes e^{-|a|^2/2} a^n / sqrt(n!), n = 0..n_max.
CVec single_mode_ket(Complex a, int n_max) {
  CVec v(n_max + 1);
  v[0] = std::exp(-0.5 * std::norm(a));
  for (int n = 1; n <= n_max; ++n) v[n] = v[n - 1] * a / std::sqrt(static_cast<double>(n));
  const double mass = v.squaredNorm();
  if (1.0 - mass > kTruncationBudget) {
    throw GuardError(fmt::format(
        "coherent_ket: cutoff {} too small for |alpha| = {:.4f} (truncated mass {:.3e})", n_max,
        std::abs(a), 1.0 - mass));
  }
  return v;
}

CVec kron(const CVec& a, const CVec& b) {
  CVec out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i)
    out.segment(i * b.size(), b.size()) = a[i] * b;
  return out;
}

// Eigen-decomposition with small/negative eigenvalues floored to zero.
std::pair<CMat, Vec> pseudo_sqrt(const CMat& g) {
  Eigen::SelfAdjointEigenSolver<CMat> es(hermitized(g));
  Vec d = es.eigenvalues();
  const double max_eig = d.maxCoeff();
  if (max_eig <= 0.0) return {CMat::Zero(g.rows(), g.cols()), Vec::Zero(d.size())};
  if (d.minCoeff() < -1e-6 * max_eig) {
    throw GuardError(
        "trace_distance_gram: Gram matrix singular beyond regularization "
        "(nearly coincident constellation points)");
  }
  const double floor = kEigFloorRel * max_eig;
  Vec sqrt_d = d.unaryExpr([&](double x) { return x > floor ? std::sqrt(x) : 0.0; });
  CMat s = es.eigenvectors() * sqrt_d.asDiagonal() * es.eigenvectors().adjoint();
  return {s, d};
}

}  // namespace

FockOperator::FockOperator(CMat matrix) : matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols()) throw std::invalid_argument("FockOperator: not square");
  const double defect = (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
  if (defect > kHermTol * (1.0 + matrix_.cwiseAbs().maxCoeff()))
    throw std::invalid_argument(
        fmt::format("FockOperator: not Hermitian (defect {:.3e})", defect));
  matrix_ = hermitized(matrix_);
}

void FockOperator::require_density(double trace_slack) const {
  const double tr = trace();
  if (tr > 1.0 + trace_slack || tr < 1.0 - 1e-2)
    throw std::invalid_argument(fmt::format("FockOperator: trace {} not close to 1", tr));
  Eigen::SelfAdjointEigenSolver<CMat> es(matrix_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-10)
    throw std::invalid_argument("FockOperator: negative eigenvalue, not a density operator");
}

FockCutoff adaptive_cutoff(const CoherentConstellation& c) {
  double amax = 0.0;
  for (const auto& p : c.points)
    for (Eigen::Index j = 0; j < p.size(); ++j) amax = std::max(amax, std::abs(p[j]));
  const int n = static_cast<int>(std::ceil(amax * amax + 6.0 * amax + 10.0));
  return FockCutoff{std::max(10, n)};
}

CVec coherent_ket(const CVec& a, FockCutoff cut) {
  if (cut.n_max < 1) throw std::invalid_argument("coherent_ket: n_max must be >= 1");
  if (a.size() == 0) throw std::invalid_argument("coherent_ket: empty amplitude vector");
  CVec ket = single_mode_ket(a[0], cut.n_max);
  for (Eigen::Index j = 1; j < a.size(); ++j) ket = kron(ket, single_mode_ket(a[j], cut.n_max));
  return ket;
}

FockOperator density_from_constellation(const CoherentConstellation& c, FockCutoff cut) {
  if (c.points.empty()) throw std::invalid_argument("density_from_constellation: no points");
  const int dim = static_cast<int>(std::pow(cut.n_max + 1, c.modes()) + 0.5);
  CMat rho = CMat::Zero(dim, dim);
  for (int k = 0; k < c.size(); ++k) {
    const CVec ket = coherent_ket(c.points[k], cut);
    rho.noalias() += c.weights[k] * (ket * ket.adjoint());
  }
  return FockOperator(std::move(rho));
}

double trace_distance_fock(const FockOperator& r0, const FockOperator& r1) {
  if (r0.dim() != r1.dim())
    throw std::invalid_argument("trace_distance_fock: dimension mismatch");
  Eigen::SelfAdjointEigenSolver<CMat> es(r0.matrix() - r1.matrix(), Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double hs_norm_sq_gram(const CoherentConstellation& delta) {
  double acc = 0.0;
  for (int i = 0; i < delta.size(); ++i) {
    acc += delta.weights[i] * delta.weights[i];
    for (int j = i + 1; j < delta.size(); ++j) {
      const double ov2 = std::norm(coherent_overlap(delta.points[i], delta.points[j]));
      acc += 2.0 * delta.weights[i] * delta.weights[j] * ov2;
    }
  }
  return acc;
}

double trace_distance_gram(const CoherentConstellation& r0, const CoherentConstellation& r1) {
  const CoherentConstellation delta = signed_difference(r0, r1);
  const int n = delta.size();
  CMat g(n, n);
  for (int i = 0; i < n; ++i) {
    g(i, i) = 1.0;
    for (int j = i + 1; j < n; ++j) {
      g(i, j) = coherent_overlap(delta.points[i], delta.points[j]);
      g(j, i) = std::conj(g(i, j));
    }
  }
  const auto [sqrt_g, eigs] = pseudo_sqrt(g);
  // Delta's nonzero spectrum lives on the span of the coherent vectors, so
  // the eigenvalues of G^{1/2} diag(c) G^{1/2} are exactly those of Delta.
  CMat h = sqrt_g * delta.weights.asDiagonal() * sqrt_g;
  Eigen::SelfAdjointEigenSolver<CMat> es(hermitized(h), Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double quantum_chernoff(const FockOperator& r0, const FockOperator& r1) {
  if (r0.dim() != r1.dim()) throw std::invalid_argument("quantum_chernoff: dimension mismatch");
  r0.require_density();
  r1.require_density();
  Eigen::SelfAdjointEigenSolver<CMat> es0(r0.matrix());
  Eigen::SelfAdjointEigenSolver<CMat> es1(r1.matrix());
  // Powers are taken on the supports; eigenvalues below 1e-12 count as 0.
  const Vec d0 = es0.eigenvalues().cwiseMax(0.0);
  const Vec d1 = es1.eigenvalues().cwiseMax(0.0);
  const Mat m = (es0.eigenvectors().adjoint() * es1.eigenvectors()).cwiseAbs2();

  auto s_trace = [&](double s) {
    Vec p0 = d0.unaryExpr([&](double x) { return x > 1e-12 ? std::pow(x, s) : 0.0; });
    Vec p1 = d1.unaryExpr([&](double x) { return x > 1e-12 ? std::pow(x, 1.0 - s) : 0.0; });
    return p0.dot(m * p1);
  };
  const auto best = golden_section_min(s_trace, 1e-4, 1.0 - 1e-4, 1e-6);
  return std::max(0.0, -std::log(best.value));
}

double fidelity_fock(const FockOperator& r0, const FockOperator& r1) {
  if (r0.dim() != r1.dim()) throw std::invalid_argument("fidelity_fock: dimension mismatch");
  auto sqrt_of = [](const FockOperator& r) {
    Eigen::SelfAdjointEigenSolver<CMat> es(r.matrix());
    Vec d = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return CMat(es.eigenvectors() * d.asDiagonal() * es.eigenvectors().adjoint());
  };
  const CMat prod = sqrt_of(r0) * sqrt_of(r1);
  Eigen::BDCSVD<CMat> svd(prod);
  return std::min(1.0, svd.singularValues().sum());
}

}  // namespace gocclab
