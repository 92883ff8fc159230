#include "gocclab/bounds.hpp"

#include <fmt/format.h>

#include <Eigen/SVD>
#include <cmath>

#include "gocclab/fock.hpp"
#include "gocclab/wigner_metrics.hpp"

namespace gocclab {

namespace {

constexpr std::int64_t kMaxGridNodes = 40000000;

double log_binomial(double n, double k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

}  // namespace

PropositionBias proposition_povm_bias(const CoherentConstellation& delta, int m) {
  delta.validate_signed();
  if (delta.modes() != m)
    throw std::invalid_argument("proposition_povm_bias: mode count mismatch");
  const double eta = std::pow(2.0, -m - 1);
  return {eta, eta * hs_norm_sq_gram(delta)};
}

double verify_wplus_validity(const CoherentConstellation& delta, int m, const GridSpec& grid,
                             double eta) {
  delta.validate_signed();
  if (delta.modes() != m) throw std::invalid_argument("verify_wplus_validity: mode mismatch");
  if (eta < 0.0) eta = std::pow(2.0, -m - 1);

  // Phase-space means as columns.
  Mat means(2 * m, delta.size());
  for (int k = 0; k < delta.size(); ++k) means.col(k) = phase_space_mean(delta.points[k]);

  // Orthonormal basis of the span; W_Delta only varies inside it.
  Eigen::JacobiSVD<Mat> svd(means, Eigen::ComputeThinU);
  const double smax = svd.singularValues().size() ? svd.singularValues().maxCoeff() : 0.0;
  int rank = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()[i] > 1e-10 * std::max(smax, 1.0)) ++rank;

  const double w_identity = 0.5 * std::pow(2.0 * M_PI, -m);
  const double pi_m = std::pow(M_PI, -m);

  if (rank == 0) {
    // All means at the origin: W_Delta(0) = pi^{-m} sum c.
    const double wd = pi_m * delta.weights.sum();
    return w_identity - 0.5 * eta * std::abs(wd);
  }

  const Mat basis = svd.matrixU().leftCols(rank);      // 2m x d
  const Mat proj = basis.transpose() * means;          // d x n, span coordinates

  const double pad = grid.padding_sigmas * std::sqrt(kVacuumVariance);
  std::vector<std::int64_t> steps(static_cast<std::size_t>(rank));
  Vec lo(rank);
  std::int64_t total = 1;
  for (int dim = 0; dim < rank; ++dim) {
    const double a = proj.row(dim).minCoeff() - pad;
    const double b = proj.row(dim).maxCoeff() + pad;
    lo[dim] = a;
    steps[static_cast<std::size_t>(dim)] =
        static_cast<std::int64_t>(std::floor((b - a) / grid.spacing)) + 1;
    total *= steps[static_cast<std::size_t>(dim)];
    if (total > kMaxGridNodes)
      throw GuardError(fmt::format(
          "verify_wplus_validity: grid of rank {} exceeds {} nodes; coarsen the spacing", rank,
          kMaxGridNodes));
  }

  double min_value = w_identity;  // the |u| -> infinity limit of both effects
  Vec t(rank);
  for (std::int64_t node = 0; node < total; ++node) {
    std::int64_t rem = node;
    for (int dim = 0; dim < rank; ++dim) {
      t[dim] = lo[dim] + grid.spacing * static_cast<double>(rem % steps[static_cast<std::size_t>(dim)]);
      rem /= steps[static_cast<std::size_t>(dim)];
    }
    double wd = 0.0;
    for (int k = 0; k < delta.size(); ++k)
      wd += delta.weights[k] * std::exp(-(t - proj.col(k)).squaredNorm());
    wd *= pi_m;
    min_value = std::min(min_value, w_identity - 0.5 * eta * std::abs(wd));
  }
  return min_value;
}

CorollaryBound corollary_energy_bound(int m, double e_bar, double t, double c) {
  if (m < 1) throw std::invalid_argument("corollary_energy_bound: need m >= 1");
  if (e_bar <= 0.0) throw std::invalid_argument("corollary_energy_bound: need E > 0");
  if (!(t > 0.0 && t <= 2.0))
    throw std::invalid_argument("corollary_energy_bound: need t in (0, 2]");
  if (!(c > 0.0 && 4.0 * c <= t))
    throw std::invalid_argument("corollary_energy_bound: need 0 < 4c <= t");

  CorollaryBound out;
  out.r = t - 4.0 * c;
  const double ratio = e_bar / (c * c);
  const auto floor_ratio = static_cast<std::int64_t>(std::floor(ratio));

  // Exact binomial via big integers; the bound itself goes through logs so
  // large m cannot overflow.
  out.d = 1;
  for (std::int64_t i = 1; i <= m; ++i) {
    out.d *= BigInt(floor_ratio + i);
    out.d /= BigInt(i);
  }

  if (out.r == 0.0) {
    out.bound = 0.0;
    out.pre_relaxation = 0.0;
    return out;
  }
  const double log_r2_eta = 2.0 * std::log(out.r) - (m + 1) * std::log(2.0);
  out.bound = std::exp(log_r2_eta - m * std::log1p(ratio));
  out.pre_relaxation =
      std::exp(log_r2_eta - log_binomial(static_cast<double>(floor_ratio) + m, m));
  return out;
}

CorollaryOptimum optimize_corollary_c(int m, double e_bar, double t) {
  if (!(t > 0.0 && t <= 2.0)) throw std::invalid_argument("optimize_corollary_c: t in (0,2]");
  const double c_max = t / 4.0;
  auto neg_bound = [&](double c) {
    const double r = t - 4.0 * c;
    return -(r * r * std::pow(2.0, -m - 1) * std::pow(1.0 + e_bar / (c * c), -m));
  };
  const auto best = golden_section_min(neg_bound, 1e-9 * c_max, (1.0 - 1e-9) * c_max, 1e-10);
  return {best.x, -best.value};
}

TowerReport tower_audit(const CoherentConstellation& r0, const CoherentConstellation& r1,
                        const GoccProtocol& protocol, const TowerMcParams& mc) {
  if (r0.modes() != r1.modes())
    throw std::invalid_argument("tower_audit: mode count mismatch");
  const int m = r0.modes();

  TowerReport rep{};
  const McEstimate pe = run_protocol_error_prob(protocol, r0, r1, mc.trials, RngStream(mc.seed));
  rep.gocc_bias = 2.0 * (1.0 - 2.0 * pe.estimate);
  rep.gocc_bias_err = 4.0 * pe.std_err;

  rep.proposition_bias = proposition_povm_bias(signed_difference(r0, r1), m).bias;

  const McEstimate l1 = l1_distance_mc(wigner_of_constellation(r0), wigner_of_constellation(r1),
                                       mc.samples, RngStream(mc.seed ^ 0xa11ceULL));
  rep.l1 = l1.estimate;
  rep.l1_err = l1.std_err;

  rep.trace_norm = 2.0 * trace_distance_gram(r0, r1);

  const double slack_gocc = 3.0 * (rep.gocc_bias_err + rep.l1_err);
  if (rep.gocc_bias > rep.l1 + slack_gocc)
    throw GuardError(fmt::format("tower_audit: GOCC bias {} exceeds L1 bound {} (+{})",
                                 rep.gocc_bias, rep.l1, slack_gocc));
  if (rep.gocc_bias > rep.trace_norm + 3.0 * rep.gocc_bias_err)
    throw GuardError(fmt::format("tower_audit: GOCC bias {} exceeds trace norm {}", rep.gocc_bias,
                                 rep.trace_norm));
  if (rep.proposition_bias > rep.l1 + 3.0 * rep.l1_err)
    throw GuardError(fmt::format("tower_audit: proposition bias {} exceeds L1 bound {}",
                                 rep.proposition_bias, rep.l1));
  if (rep.proposition_bias > rep.trace_norm + 1e-9)
    throw GuardError(fmt::format("tower_audit: proposition bias {} exceeds trace norm {}",
                                 rep.proposition_bias, rep.trace_norm));
  return rep;
}

}  // namespace gocclab
