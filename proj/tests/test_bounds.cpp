#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gocclab/bounds.hpp"
#include "gocclab/fock.hpp"

using namespace gocclab;

namespace {

CoherentConstellation pm_state(double alpha, int m, int which) {
  CoherentConstellation c;
  c.points = {CVec::Constant(m, which == 0 ? alpha : -alpha)};
  c.weights = Vec::Ones(1);
  return c;
}

CoherentConstellation pm_diff(double alpha, int m) {
  return signed_difference(pm_state(alpha, m, 0), pm_state(alpha, m, 1));
}

}  // namespace

TEST_CASE("explicit POVM bias: eta = 2^{-m-1} times the HS norm squared") {
  // m=1, alpha=0.45: tr Delta^2 = 2 - 2 e^{-0.81} = 1.11028, eta = 1/4.
  const auto pb = proposition_povm_bias(pm_diff(0.45, 1), 1);
  CHECK(pb.eta == doctest::Approx(0.25));
  CHECK(pb.bias == doctest::Approx(0.25 * (2.0 - 2.0 * std::exp(-0.81))).epsilon(1e-12));
  CHECK(pb.bias == doctest::Approx(0.277570).epsilon(1e-5));

  const auto pb2 = proposition_povm_bias(pm_diff(0.45, 2), 2);
  CHECK(pb2.eta == doctest::Approx(0.125));
}

TEST_CASE("POVM validity holds at the certified eta and fails at eta = 1") {
  GridSpec grid;
  for (double alpha : {0.2, 0.45, 1.0, 3.0}) {
    for (int m : {1, 2}) {
      CHECK(verify_wplus_validity(pm_diff(alpha, m), m, grid) >= -1e-12);
    }
  }
  // An uncertified eta large enough to push W_M negative.
  CHECK(verify_wplus_validity(pm_diff(1.0, 1), 1, grid, 1.0) < 0.0);
}

TEST_CASE("proposition bias never exceeds the L1 norm of the Wigner difference") {
  // |bias| <= ||W0 - W1||_L1 / 2 * max|2F-1| with |2F-1| <= eta...; the
  // coarse check here is bias <= closed-form L1.
  for (double alpha : {0.2, 0.45, 1.0}) {
    const auto pb = proposition_povm_bias(pm_diff(alpha, 1), 1);
    CHECK(pb.bias <= 2.0 * std::erf(alpha * std::sqrt(2.0)) + 1e-12);
  }
}

TEST_CASE("energy-truncated bound: worked example at m=2, E=1, t=2, c=0.4") {
  const auto b = corollary_energy_bound(2, 1.0, 2.0, 0.4);
  CHECK(b.r == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(b.d == BigInt(28));  // binom(6 + 2, 2)
  CHECK(b.bound == doctest::Approx(0.16 * 0.125 / (7.25 * 7.25)).epsilon(1e-12));
  CHECK(b.pre_relaxation == doctest::Approx(0.16 * 0.125 / 28.0).epsilon(1e-12));
  CHECK(b.bound <= b.pre_relaxation);
}

TEST_CASE("the relaxation D <= (1 + E/c^2)^m holds across a parameter grid") {
  for (int m : {1, 2, 3, 5}) {
    for (double e : {0.5, 1.0, 4.0}) {
      for (double c : {0.1, 0.25, 0.49}) {
        const auto b = corollary_energy_bound(m, e, 2.0, c);
        const double relaxed = std::pow(1.0 + e / (c * c), m);
        CHECK(static_cast<double>(b.d) <= relaxed * (1.0 + 1e-12));
      }
    }
  }
}

TEST_CASE("corollary guards") {
  CHECK_THROWS(corollary_energy_bound(1, 1.0, 2.5, 0.1));   // t > 2
  CHECK_THROWS(corollary_energy_bound(1, 1.0, 1.0, 0.3));   // 4c > t
  CHECK_THROWS(corollary_energy_bound(1, 1.0, 1.0, 0.0));   // c = 0
  const auto edge = corollary_energy_bound(1, 1.0, 1.0, 0.25);  // r = 0 exactly
  CHECK(edge.bound == doctest::Approx(0.0));
}

TEST_CASE("optimizer returns a local maximum of the bound") {
  const auto opt = optimize_corollary_c(2, 1.0, 1.4901);
  CHECK(opt.c_star > 0.0);
  CHECK(opt.c_star < 1.4901 / 4.0);
  const double at = corollary_energy_bound(2, 1.0, 1.4901, opt.c_star).bound;
  CHECK(opt.bound_star == doctest::Approx(at).epsilon(1e-9));
  for (double dc : {-0.01, 0.01}) {
    const double c = opt.c_star + dc;
    if (c > 0.0 && 4.0 * c <= 1.4901)
      CHECK(corollary_energy_bound(2, 1.0, 1.4901, c).bound <= opt.bound_star + 1e-9);
  }
}

TEST_CASE("tower audit on the coherent pair reproduces the norm ordering") {
  const auto r0 = pm_state(0.45, 1, 0);
  const auto r1 = pm_state(0.45, 1, 1);
  GoccProtocol protocol(1, {Round{0, SymplecticCircuit(1), {}, 1}},
                        DecisionRule::sign_affine({1.0}, 0.0));
  TowerMcParams mc;
  mc.trials = 100000;
  mc.samples = 100000;
  mc.seed = 1;
  const auto rep = tower_audit(r0, r1, protocol, mc);

  CHECK(std::abs(rep.gocc_bias - 2.0 * std::erf(0.45 * std::sqrt(2.0))) <
        4.0 * rep.gocc_bias_err);
  CHECK(rep.proposition_bias == doctest::Approx(0.277570).epsilon(1e-5));
  CHECK(std::abs(rep.l1 - 2.0 * std::erf(0.45 * std::sqrt(2.0))) < 4.0 * rep.l1_err);
  CHECK(rep.trace_norm ==
        doctest::Approx(2.0 * std::sqrt(1.0 - std::exp(-0.81))).epsilon(1e-10));
  // The chain itself: GOCC <= L1, proposition <= L1 <= trace norm.
  CHECK(rep.gocc_bias <= rep.l1 + 3.0 * rep.l1_err);
  CHECK(rep.proposition_bias <= rep.l1 + 3.0 * rep.l1_err);
  CHECK(rep.proposition_bias <= rep.trace_norm + 1e-9);
}
