#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gocclab/wigner_metrics.hpp"

using namespace gocclab;

namespace {

GaussianMixturePdf pm_wigner(double alpha, int which) {
  CoherentConstellation c;
  c.points = {CVec::Constant(1, which == 0 ? alpha : -alpha)};
  c.weights = Vec::Ones(1);
  return wigner_of_constellation(c);
}

GaussianMixturePdf as_mixture(const GaussianPdf& g) {
  return GaussianMixturePdf(Vec::Ones(1), {g});
}

// L1 distance between two zero-mean isotropic 2-D Gaussians with variances
// v0 < v1: the densities cross on the circle r*^2 = 2 v0 v1 ln(v1/v0)/(v1-v0)
// and the radial integral is exponential in r^2.
double l1_isotropic_2d(double v0, double v1) {
  if (v0 > v1) std::swap(v0, v1);
  const double rstar2 = 2.0 * v0 * v1 * std::log(v1 / v0) / (v1 - v0);
  const auto mass_inside = [&](double v) { return 1.0 - std::exp(-rstar2 / (2.0 * v)); };
  return 2.0 * (mass_inside(v0) - mass_inside(v1));
}

}  // namespace

TEST_CASE("closed-form L1 for the coherent pair: 2 erf(alpha sqrt(2))") {
  const double alpha = 0.45;
  const auto w0 = pm_wigner(alpha, 0);
  const auto w1 = pm_wigner(alpha, 1);
  const double closed =
      l1_distance_equal_cov(w0.components()[0].mean(), w1.components()[0].mean(),
                            w0.components()[0].cov());
  CHECK(closed == doctest::Approx(2.0 * std::erf(alpha * std::sqrt(2.0))).epsilon(1e-12));
  CHECK(closed == doctest::Approx(1.26376).epsilon(1e-4));
}

TEST_CASE("MC L1 estimate agrees with the closed form within 3 sigma") {
  const double alpha = 0.45;
  const auto w0 = pm_wigner(alpha, 0);
  const auto w1 = pm_wigner(alpha, 1);
  const double closed = 2.0 * std::erf(alpha * std::sqrt(2.0));
  const auto mc = l1_distance_mc(w0, w1, 100000, RngStream(1));
  CHECK(std::abs(mc.estimate - closed) < 3.0 * mc.std_err);
  CHECK(mc.std_err < 0.01);
}

TEST_CASE("MC L1 against an independent radial oracle: thermal vs vacuum") {
  const auto w_th = as_mixture(wigner_of_thermal(1.0, 1));
  const auto w_vac = as_mixture(wigner_of_thermal(0.0, 1));
  const double oracle = l1_isotropic_2d(0.5, 1.5);
  const auto mc = l1_distance_mc(w_th, w_vac, 200000, RngStream(2));
  CHECK(std::abs(mc.estimate - oracle) < 3.0 * mc.std_err);
}

TEST_CASE("L1 of identical mixtures is zero, and the metric is symmetric") {
  const auto w0 = pm_wigner(0.6, 0);
  const auto w1 = pm_wigner(0.6, 1);
  const auto same = l1_distance_mc(w0, w0, 20000, RngStream(3));
  CHECK(same.estimate == doctest::Approx(0.0).epsilon(1e-12));
  // Swapping the arguments permutes which mixture each proposal draw comes
  // from, so symmetry is statistical, not bitwise.
  const auto ab = l1_distance_mc(w0, w1, 50000, RngStream(4));
  const auto ba = l1_distance_mc(w1, w0, 50000, RngStream(4));
  CHECK(std::abs(ab.estimate - ba.estimate) <
        3.0 * std::sqrt(ab.std_err * ab.std_err + ba.std_err * ba.std_err));
}

TEST_CASE("standard error shrinks like n^{-1/2}") {
  const auto w0 = pm_wigner(0.45, 0);
  const auto w1 = pm_wigner(0.45, 1);
  const auto small = l1_distance_mc(w0, w1, 10000, RngStream(5));
  const auto big = l1_distance_mc(w0, w1, 160000, RngStream(5));
  CHECK(big.std_err == doctest::Approx(small.std_err / 4.0).epsilon(0.2));
}

TEST_CASE("MC estimate is deterministic for a fixed stream") {
  const auto w0 = pm_wigner(0.45, 0);
  const auto w1 = pm_wigner(0.45, 1);
  const auto a = l1_distance_mc(w0, w1, 30000, RngStream(9));
  const auto b = l1_distance_mc(w0, w1, 30000, RngStream(9));
  CHECK(a.estimate == b.estimate);
  CHECK(a.std_err == b.std_err);
}

TEST_CASE("sample floor is enforced") {
  const auto w0 = pm_wigner(0.45, 0);
  CHECK_THROWS(l1_distance_mc(w0, w0, 5000, RngStream(1)));
}

TEST_CASE("classical Chernoff closed form: 2 alpha^2 for the coherent pair") {
  const double alpha = 0.5;
  const auto w0 = pm_wigner(alpha, 0);
  const auto w1 = pm_wigner(alpha, 1);
  const double closed = classical_chernoff_equal_cov(
      w0.components()[0].mean(), w1.components()[0].mean(), w0.components()[0].cov());
  CHECK(closed == doctest::Approx(2.0 * alpha * alpha).epsilon(1e-12));
}

TEST_CASE("classical Chernoff MC matches the closed form") {
  const double alpha = 0.5;
  const auto w0 = pm_wigner(alpha, 0);
  const auto w1 = pm_wigner(alpha, 1);
  const double xi = classical_chernoff_mc(w0, w1, 100000, RngStream(6));
  CHECK(xi == doctest::Approx(2.0 * alpha * alpha).epsilon(0.03));
}

TEST_CASE("classical Chernoff of identical densities is zero") {
  const auto w0 = pm_wigner(0.5, 0);
  CHECK(classical_chernoff_mc(w0, w0, 20000, RngStream(7)) ==
        doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("quantum beats classical by a factor of two on the coherent pair") {
  // Exponent ordering behind the 3 dB sensing claim: 4 a^2 vs 2 a^2.
  const double alpha = 0.45;
  const auto w0 = pm_wigner(alpha, 0);
  const auto w1 = pm_wigner(alpha, 1);
  const double xi_c = classical_chernoff_equal_cov(
      w0.components()[0].mean(), w1.components()[0].mean(), w0.components()[0].cov());
  CHECK(4.0 * alpha * alpha == doctest::Approx(2.0 * xi_c).epsilon(1e-12));
}
