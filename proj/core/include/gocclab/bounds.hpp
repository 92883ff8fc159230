#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include "gocclab/gocc.hpp"

namespace gocclab {

using BigInt = boost::multiprecision::cpp_int;

struct PropositionBias {
  double eta;   // 2^{-m-1}
  double bias;  // eta * ||Delta||_2^2 = tr Delta (2M - 1)
};

// Explicit W+ POVM M = (1 + eta*Delta)/2 with eta = 2^{-m-1}; its bias is
// a certified lower bound on ||rho0 - rho1||_W+.
PropositionBias proposition_povm_bias(const CoherentConstellation& delta, int m);

struct GridSpec {
  double spacing = 0.05;
  double padding_sigmas = 6.0;  // around constellation means, sigma = sqrt(1/2)
};

// Minimum of W_M = (1/2)(2pi)^{-m} +- (1/2) eta W_Delta over phase space.
// W_Delta of a coherent constellation is isotropic orthogonal to the span
// of its phase-space means, and the minimum is attained on that span, so
// the grid only covers the span. Pass eta < 0 to use 2^{-m-1}.
double verify_wplus_validity(const CoherentConstellation& delta, int m, const GridSpec& grid,
                             double eta = -1.0);

struct CorollaryBound {
  double r;               // t - 4c
  BigInt d;               // binom(floor(E/c^2) + m, m), exact
  double bound;           // r^2 2^{-m-1} (1 + E/c^2)^{-m}
  double pre_relaxation;  // r^2 2^{-m-1} / D, the sharper intermediate bound
};

// Energy-truncated W+ lower bound; requires t in (0,2] and 0 < 4c <= t.
CorollaryBound corollary_energy_bound(int m, double e_bar, double t, double c);

struct CorollaryOptimum {
  double c_star;
  double bound_star;
};

// Golden-section maximization of the corollary bound over c in (0, t/4).
CorollaryOptimum optimize_corollary_c(int m, double e_bar, double t);

struct TowerMcParams {
  std::int64_t trials = 100000;
  std::int64_t samples = 100000;
  std::uint64_t seed = 1;
};

struct TowerReport {
  double gocc_bias;       // 2(1 - 2 p_err), achieved by the protocol
  double gocc_bias_err;
  double proposition_bias;
  double l1;              // MC estimate of ||W0 - W1||_L1
  double l1_err;
  double trace_norm;      // ||rho0 - rho1||_1 via the Gram path
};

// Assembles the certified chain GOCC <= L1 and proposition <= L1,
// proposition <= trace norm; throws GuardError on a violation beyond
// 3 sigma (which signals a bug, not physics).
TowerReport tower_audit(const CoherentConstellation& r0, const CoherentConstellation& r1,
                        const GoccProtocol& protocol, const TowerMcParams& mc);

}  // namespace gocclab
