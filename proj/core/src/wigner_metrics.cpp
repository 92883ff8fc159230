#include "gocclab/wigner_metrics.hpp"

#include <fmt/format.h>

#include <cmath>
#include <limits>
#include <vector>

namespace gocclab {

namespace {

constexpr std::int64_t kChunk = 8192;
constexpr std::int64_t kMinSamples = 10000;

void require_compatible(const GaussianMixturePdf& w0, const GaussianMixturePdf& w1,
                        std::int64_t n_samples, const char* what) {
  if (w0.dim() != w1.dim())
    throw std::invalid_argument(fmt::format("{}: dimension mismatch ({} vs {})", what, w0.dim(),
                                            w1.dim()));
  if (n_samples < kMinSamples)
    throw std::invalid_argument(
        fmt::format("{}: n_samples {} below minimum {}", what, n_samples, kMinSamples));
}

// Proposal (w0 + w1)/2: flip a fair coin for the mixture, then sample it.
Vec sample_proposal(const GaussianMixturePdf& w0, const GaussianMixturePdf& w1, Rng& rng) {
  return rng.uniform01() < 0.5 ? w0.sample(rng) : w1.sample(rng);
}

// log q(x) for q = (w0 + w1)/2.
double log_proposal(double l0, double l1) {
  const double hi = std::max(l0, l1);
  return hi + std::log(0.5 * (std::exp(l0 - hi) + std::exp(l1 - hi)));
}

}  // namespace

McEstimate l1_distance_mc(const GaussianMixturePdf& w0, const GaussianMixturePdf& w1,
                          std::int64_t n_samples, const RngStream& stream) {
  require_compatible(w0, w1, n_samples, "l1_distance_mc");
  double sum = 0.0, sum_sq = 0.0;
  std::int64_t done = 0;
  for (std::int64_t chunk = 0; done < n_samples; ++chunk) {
    Rng rng = stream.substream(static_cast<std::uint64_t>(chunk));
    const std::int64_t take = std::min(kChunk, n_samples - done);
    for (std::int64_t i = 0; i < take; ++i) {
      const Vec x = sample_proposal(w0, w1, rng);
      const double l0 = w0.log_density(x);
      const double l1 = w1.log_density(x);
      // |w0 - w1| / q = 2 |e^{l0} - e^{l1}| / (e^{l0} + e^{l1}) = 2 |tanh((l0-l1)/2)|
      const double v = 2.0 * std::abs(std::tanh(0.5 * (l0 - l1)));
      sum += v;
      sum_sq += v * v;
    }
    done += take;
  }
  const double n = static_cast<double>(n_samples);
  const double mean = sum / n;
  const double var = std::max(0.0, sum_sq / n - mean * mean);
  return {mean, std::sqrt(var / n)};
}

double l1_distance_equal_cov(const Vec& mu0, const Vec& mu1, const Mat& cov) {
  if (mu0.size() != mu1.size() || cov.rows() != mu0.size() || cov.cols() != mu0.size())
    throw std::invalid_argument("l1_distance_equal_cov: dimension mismatch");
  Eigen::LLT<Mat> llt(0.5 * (cov + cov.transpose()));
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument("l1_distance_equal_cov: covariance not positive definite");
  const Vec y = llt.matrixL().solve(mu0 - mu1);
  const double d = y.norm();  // Mahalanobis distance
  return 2.0 * std::erf(d / (2.0 * std::sqrt(2.0)));
}

double classical_chernoff_mc(const GaussianMixturePdf& w0, const GaussianMixturePdf& w1,
                             std::int64_t n_samples, const RngStream& stream) {
  require_compatible(w0, w1, n_samples, "classical_chernoff_mc");
  // Draw once, reuse across the s-scan (common random numbers).
  std::vector<double> l0(n_samples), l1(n_samples), lq(n_samples);
  std::int64_t done = 0;
  for (std::int64_t chunk = 0; done < n_samples; ++chunk) {
    Rng rng = stream.substream(static_cast<std::uint64_t>(chunk));
    const std::int64_t take = std::min(kChunk, n_samples - done);
    for (std::int64_t i = 0; i < take; ++i) {
      const Vec x = sample_proposal(w0, w1, rng);
      l0[done + i] = w0.log_density(x);
      l1[done + i] = w1.log_density(x);
      lq[done + i] = log_proposal(l0[done + i], l1[done + i]);
    }
    done += take;
  }
  auto log_estimate = [&](double s) {
    // I(s) = mean of exp(s*l0 + (1-s)*l1 - lq); stabilized by the max exponent.
    double hi = -std::numeric_limits<double>::infinity();
    for (std::int64_t i = 0; i < n_samples; ++i)
      hi = std::max(hi, s * l0[i] + (1.0 - s) * l1[i] - lq[i]);
    double acc = 0.0;
    for (std::int64_t i = 0; i < n_samples; ++i)
      acc += std::exp(s * l0[i] + (1.0 - s) * l1[i] - lq[i] - hi);
    return hi + std::log(acc / static_cast<double>(n_samples));
  };
  const auto best = golden_section_min(log_estimate, 1e-4, 1.0 - 1e-4, 1e-6);
  return std::max(0.0, -best.value);
}

double classical_chernoff_equal_cov(const Vec& mu0, const Vec& mu1, const Mat& cov) {
  if (mu0.size() != mu1.size() || cov.rows() != mu0.size() || cov.cols() != mu0.size())
    throw std::invalid_argument("classical_chernoff_equal_cov: dimension mismatch");
  Eigen::LLT<Mat> llt(0.5 * (cov + cov.transpose()));
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument("classical_chernoff_equal_cov: covariance not positive definite");
  const Vec y = llt.matrixL().solve(mu0 - mu1);
  return 0.125 * y.squaredNorm();
}

}  // namespace gocclab
