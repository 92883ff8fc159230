#pragma once

#include <cstdint>

#include "gocclab/gaussian.hpp"

namespace gocclab {

struct McEstimate {
  double estimate;
  double std_err;
};

// Importance-sampled integral of |w0 - w1| with proposal q = (w0 + w1)/2.
// The weight |w0 - w1|/q is bounded by 2, so the variance is finite.
// Deterministic given the stream seed; samples are drawn in fixed-size
// chunks, one substream per chunk.
McEstimate l1_distance_mc(const GaussianMixturePdf& w0, const GaussianMixturePdf& w1,
                          std::int64_t n_samples, const RngStream& stream);

// Closed form for equal-covariance Gaussians:
// 2*erf(d / (2*sqrt(2))), d^2 = (mu0-mu1)^T cov^{-1} (mu0-mu1).
double l1_distance_equal_cov(const Vec& mu0, const Vec& mu1, const Mat& cov);

// -ln min_{0<s<1} of the importance-sampled integral of w0^s w1^{1-s}.
// Common random numbers across the s-scan keep the objective smooth for
// golden-section.
double classical_chernoff_mc(const GaussianMixturePdf& w0, const GaussianMixturePdf& w1,
                             std::int64_t n_samples, const RngStream& stream);

// (1/8) (mu0-mu1)^T cov^{-1} (mu0-mu1).
double classical_chernoff_equal_cov(const Vec& mu0, const Vec& mu1, const Mat& cov);

}  // namespace gocclab
