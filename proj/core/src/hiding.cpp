#include "gocclab/hiding.hpp"

#include <fmt/format.h>

#include <cmath>
#include <limits>

#include "gocclab/fock.hpp"

namespace gocclab {

namespace {

// Largest combined support for which the exact Gram trace-distance path is
// considered feasible (dense eigensolve of a 2L x 2L complex matrix).
constexpr int kGramFeasibleSupport = 4000;

// Generic two-hypothesis Gaussian classifier: outcome = mean_row + noise
// with isotropic variance `var`; decision by likelihood ratio between the
// two weighted mixtures of rows. Returns the achieved bias 2(1 - 2 p_err);
// slightly negative values are possible from sampling noise and are kept.
McEstimate classifier_bias(const Mat& means0, const Vec& logw0, const Mat& means1,
                           const Vec& logw1, double var, std::int64_t n_trials,
                           const RngStream& stream) {
  const Eigen::Index d = means0.cols();
  const double inv2v = 0.5 / var;
  auto log_lik = [&](const Mat& means, const Vec& logw, const Vec& y) {
    double best = -std::numeric_limits<double>::infinity();
    Vec terms(means.rows());
    for (Eigen::Index k = 0; k < means.rows(); ++k) {
      terms[k] = logw[k] - inv2v * (y - means.row(k).transpose()).squaredNorm();
      best = std::max(best, terms[k]);
    }
    double acc = 0.0;
    for (Eigen::Index k = 0; k < terms.size(); ++k) acc += std::exp(terms[k] - best);
    return best + std::log(acc);
  };

  std::int64_t errors = 0;
  const double sd = std::sqrt(var);
  for (std::int64_t t = 0; t < n_trials; ++t) {
    Rng rng = stream.substream(static_cast<std::uint64_t>(t));
    const int hyp = rng.uniform01() < 0.5 ? 0 : 1;
    const Mat& means = hyp == 0 ? means0 : means1;
    const Vec& logw = hyp == 0 ? logw0 : logw1;
    const double u = rng.uniform01();
    double cum = 0.0;
    Eigen::Index pick = means.rows() - 1;
    for (Eigen::Index k = 0; k < means.rows(); ++k) {
      cum += std::exp(logw[k]);
      if (u <= cum) {
        pick = k;
        break;
      }
    }
    Vec y(d);
    for (Eigen::Index j = 0; j < d; ++j) y[j] = means(pick, j) + sd * rng.normal();
    const int guess = log_lik(means0, logw0, y) >= log_lik(means1, logw1, y) ? 0 : 1;
    if (guess != hyp) ++errors;
  }
  const double n = static_cast<double>(n_trials);
  const double p_err = static_cast<double>(errors) / n;
  const double p_se = std::sqrt(std::max(p_err * (1.0 - p_err), 1.0 / n) / n);
  return {2.0 * (1.0 - 2.0 * p_err), 4.0 * p_se};
}

Mat homodyne_means(const CoherentConstellation& c) {
  Mat m(c.size(), c.modes());
  for (int k = 0; k < c.size(); ++k)
    for (int j = 0; j < c.modes(); ++j) m(k, j) = std::sqrt(2.0) * c.points[k][j].real();
  return m;
}

Mat heterodyne_means(const CoherentConstellation& c) {
  Mat m(c.size(), 2 * c.modes());
  for (int k = 0; k < c.size(); ++k) m.row(k) = phase_space_mean(c.points[k]).transpose();
  return m;
}

Vec log_weights(const CoherentConstellation& c) {
  return c.weights.array().max(1e-300).log();
}

}  // namespace

double capacity_noiseless(double e_bar) {
  if (e_bar < 0.0) throw std::invalid_argument("capacity_noiseless: negative energy");
  if (e_bar == 0.0) return 0.0;
  return (e_bar + 1.0) * std::log(e_bar + 1.0) - e_bar * std::log(e_bar);
}

double capacity_awgn(double e_bar) {
  if (e_bar < 0.0) throw std::invalid_argument("capacity_awgn: negative energy");
  return 0.5 * std::log1p(2.0 * e_bar);
}

int choose_l(int m, double e_bar, double delta) {
  if (m < 1) throw std::invalid_argument("choose_l: need m >= 1");
  if (delta <= 0.0) throw std::invalid_argument("choose_l: need delta > 0");
  const double lo_exp = 2.0 * m * (capacity_awgn(e_bar) + delta);
  const double hi_exp = m * (capacity_noiseless(e_bar) - delta);
  if (lo_exp >= hi_exp)
    throw GuardError(fmt::format(
        "choose_l: empty window for 2L at m={}, E={}, delta={} (need 2m(C_W+d) < m(g-d))", m,
        e_bar, delta));
  const int l = static_cast<int>(std::llround(0.5 * std::exp(0.5 * (lo_exp + hi_exp))));
  if (l < 1)
    throw GuardError(fmt::format("choose_l: window midpoint rounds below 1 at m={}, E={}", m, e_bar));
  return l;
}

std::pair<CoherentConstellation, CoherentConstellation> sample_constellations(
    const HidingParams& p, Rng& rng) {
  const double sd = std::sqrt(p.e_bar / 2.0);  // Re, Im ~ N(0, E/2)
  CoherentConstellation r0, r1;
  for (int lambda = 1; lambda <= 2 * p.l; ++lambda) {
    CVec point(p.m);
    for (int j = 0; j < p.m; ++j) point[j] = Complex(sd * rng.normal(), sd * rng.normal());
    (lambda % 2 == 0 ? r0 : r1).points.push_back(std::move(point));
  }
  r0.weights = Vec::Constant(p.l, 1.0 / p.l);
  r1.weights = Vec::Constant(p.l, 1.0 / p.l);
  return {std::move(r0), std::move(r1)};
}

McEstimate homodyne_map_bias(const CoherentConstellation& r0, const CoherentConstellation& r1,
                             std::int64_t n_trials, const RngStream& stream) {
  return classifier_bias(homodyne_means(r0), log_weights(r0), homodyne_means(r1), log_weights(r1),
                         kVacuumVariance, n_trials, stream);
}

McEstimate heterodyne_map_bias(const CoherentConstellation& r0, const CoherentConstellation& r1,
                               std::int64_t n_trials, const RngStream& stream) {
  // Husimi covariance of a coherent state is (1/2 + 1/2) I = I.
  return classifier_bias(heterodyne_means(r0), log_weights(r0), heterodyne_means(r1),
                         log_weights(r1), 1.0, n_trials, stream);
}

HidingReport compute_hiding_report(const CoherentConstellation& r0,
                                   const CoherentConstellation& r1, const HidingParams& p,
                                   std::int64_t mc_samples, std::int64_t bias_trials) {
  r0.validate_state();
  r1.validate_state();
  const int support = r0.size() + r1.size();
  if (support > kGramFeasibleSupport)
    throw GuardError(fmt::format(
        "run_hiding_experiment: combined support {} exceeds the exact Gram path limit {}", support,
        kGramFeasibleSupport));

  HidingReport rep;
  rep.params = p;
  rep.mc_samples = mc_samples;
  rep.bias_trials = bias_trials;
  rep.capacity_g = capacity_noiseless(p.e_bar);
  rep.capacity_w = capacity_awgn(p.e_bar);

  rep.trace_dist_half = trace_distance_gram(r0, r1);

  const GaussianMixturePdf w0 = wigner_of_constellation(r0);
  const GaussianMixturePdf w1 = wigner_of_constellation(r1);
  const GaussianMixturePdf thermal(Vec::Ones(1), {wigner_of_thermal(p.e_bar, p.m)});
  rep.l1_w0_w1 = l1_distance_mc(w0, w1, mc_samples, RngStream(p.seed ^ 0x11d1ULL));
  rep.l1_w0_thermal = l1_distance_mc(w0, thermal, mc_samples, RngStream(p.seed ^ 0x22d2ULL));
  rep.l1_w1_thermal = l1_distance_mc(w1, thermal, mc_samples, RngStream(p.seed ^ 0x33d3ULL));

  rep.mean_photons_r0 = r0.mean_photons_per_mode();
  rep.mean_photons_r1 = r1.mean_photons_per_mode();
  const double slack =
      p.e_bar + 3.0 * std::sqrt(p.e_bar / (static_cast<double>(r0.size()) * p.m));
  rep.energy_flag_r0 = rep.mean_photons_r0 > slack;
  rep.energy_flag_r1 = rep.mean_photons_r1 > slack;

  rep.homodyne_bias = homodyne_map_bias(r0, r1, bias_trials, RngStream(p.seed ^ 0x44d4ULL));
  rep.heterodyne_bias = heterodyne_map_bias(r0, r1, bias_trials, RngStream(p.seed ^ 0x55d5ULL));
  return rep;
}

HidingReport run_hiding_experiment(const HidingParams& p, std::int64_t mc_samples,
                                   std::int64_t bias_trials) {
  Rng rng = RngStream(p.seed).substream(0);
  auto [r0, r1] = sample_constellations(p, rng);
  return compute_hiding_report(r0, r1, p, mc_samples, bias_trials);
}

}  // namespace gocclab
