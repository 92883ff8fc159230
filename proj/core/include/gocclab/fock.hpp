#pragma once

#include "gocclab/gaussian.hpp"

namespace gocclab {

// Max photon number per mode; the truncated single-mode space has
// dimension n_max + 1.
struct FockCutoff {
  int n_max;
};

// Dense truncated-Fock operator, used as the independent oracle for the
// closed-form paths. Hermiticity is enforced on construction.
class FockOperator {
 public:
  explicit FockOperator(CMat matrix);

  int dim() const { return static_cast<int>(matrix_.rows()); }
  const CMat& matrix() const { return matrix_; }

  double trace() const { return matrix_.trace().real(); }

  // Checks trace ~ 1 and spectrum >= -1e-10.
  void require_density(double trace_slack = 1e-6) const;

 private:
  CMat matrix_;
};

// Cutoff policy: n_max = max(10, ceil(|a|^2 + 6|a| + 10)) over all per-mode
// amplitudes of the constellation (Poisson tail heuristic).
FockCutoff adaptive_cutoff(const CoherentConstellation& c);

// Tensor-product Fock amplitudes of |a>; throws GuardError when the
// per-mode truncated mass exceeds 1e-8.
CVec coherent_ket(const CVec& a, FockCutoff cut);

FockOperator density_from_constellation(const CoherentConstellation& c, FockCutoff cut);

// (1/2) sum |eig(r0 - r1)|.
double trace_distance_fock(const FockOperator& r0, const FockOperator& r1);

// tr Delta^2 via the Gram formula, exact (no truncation):
// sum_{l,m} w_l w_m |<a_l|a_m>|^2.
double hs_norm_sq_gram(const CoherentConstellation& delta);

// Exact small-rank trace distance: eigenvalues of G^{1/2} diag(c) G^{1/2}
// on the span of the coherent vectors.
double trace_distance_gram(const CoherentConstellation& r0, const CoherentConstellation& r1);

// xi = -ln min_{0<s<1} tr r0^s r1^{1-s}; the s-trace is convex, so the
// golden-section minimum is global.
double quantum_chernoff(const FockOperator& r0, const FockOperator& r1);

// F = ||sqrt(r0) sqrt(r1)||_1 via singular values.
double fidelity_fock(const FockOperator& r0, const FockOperator& r1);

}  // namespace gocclab
