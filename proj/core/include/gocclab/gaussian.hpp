#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <utility>
#include <vector>

#include "gocclab/errors.hpp"
#include "gocclab/rng.hpp"

namespace gocclab {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using Complex = std::complex<double>;

// Phase-space conventions shared by all modules: quadrature ordering
// (x1,p1,...,xm,pm), hbar = 1, vacuum covariance (1/2)*I.
inline constexpr double kVacuumVariance = 0.5;
inline constexpr double kSymplecticTol = 1e-10;
inline constexpr double kCovPositivityTol = 1e-10;

// Symplectic form Omega for m modes in (x,p) interleaved ordering.
Mat symplectic_form(int modes);

// Weighted finite set of m-mode coherent amplitudes. Weights are
// nonnegative and sum to 1 for states; signed weights summing to 0
// represent a difference of states.
struct CoherentConstellation {
  std::vector<CVec> points;
  Vec weights;

  int modes() const { return points.empty() ? 0 : static_cast<int>(points.front().size()); }
  int size() const { return static_cast<int>(points.size()); }

  void validate_state() const;
  void validate_signed() const;

  // Empirical (1/(size*m)) sum |alpha_j|^2 over all points, unweighted.
  double mean_photons_per_mode() const;
};

// delta = r0 - r1 as a signed constellation.
CoherentConstellation signed_difference(const CoherentConstellation& r0,
                                        const CoherentConstellation& r1);

// Real multivariate normal density with cached Cholesky factor. Covariances
// are symmetrized on construction and must be positive definite.
class GaussianPdf {
 public:
  GaussianPdf(Vec mean, Mat cov);

  const Vec& mean() const { return mean_; }
  const Mat& cov() const { return cov_; }
  int dim() const { return static_cast<int>(mean_.size()); }

  double log_density(const Vec& x) const;
  double density(const Vec& x) const { return std::exp(log_density(x)); }
  Vec sample(Rng& rng) const;

 private:
  Vec mean_;
  Mat cov_;
  Mat chol_;        // lower-triangular factor of cov
  double log_norm_; // -(d/2) ln(2*pi) - (1/2) ln det cov
  bool isotropic_ = false;
  double iso_var_ = 0.0;
};

// Finite convex mixture of GaussianPdf components of common dimension.
class GaussianMixturePdf {
 public:
  GaussianMixturePdf(Vec weights, std::vector<GaussianPdf> components);

  int dim() const { return components_.front().dim(); }
  int size() const { return static_cast<int>(components_.size()); }
  const Vec& weights() const { return weights_; }
  const std::vector<GaussianPdf>& components() const { return components_; }

  double log_density(const Vec& x) const;
  double density(const Vec& x) const { return std::exp(log_density(x)); }
  Vec sample(Rng& rng) const;
  Vec mean() const;

 private:
  Vec weights_;
  Vec log_weights_;
  std::vector<GaussianPdf> components_;
};

// Ordered list of Gaussian gates; composes to an affine phase-space map
// (S, d) with S symplectic.
class SymplecticCircuit {
 public:
  explicit SymplecticCircuit(int modes);

  SymplecticCircuit& beamsplitter(int i, int j, double theta);
  SymplecticCircuit& phase_rotation(int i, double phi);
  SymplecticCircuit& squeeze(int i, double r);
  SymplecticCircuit& displace(int i, Complex amount);

  int modes() const { return modes_; }
  bool empty() const { return gates_.empty(); }

  // Composed (S, d); throws GuardError if S fails S*Omega*S^T = Omega
  // beyond kSymplecticTol.
  std::pair<Mat, Vec> affine_map() const;

 private:
  struct Gate {
    enum class Kind { Beamsplitter, Phase, Squeeze, Displace };
    Kind kind;
    int a = 0;
    int b = 0;
    double param = 0.0;
    Complex amount{0.0, 0.0};
  };

  void check_mode(int i) const;

  int modes_;
  std::vector<Gate> gates_;
};

// Gaussian quantum state as a phase-space pair (mean, cov). Construction
// enforces the uncertainty invariant cov + (i/2) Omega >= 0.
class GaussianState {
 public:
  GaussianState(Vec mean, Mat cov);

  static GaussianState vacuum(int modes);

  const Vec& mean() const { return mean_; }
  const Mat& cov() const { return cov_; }
  int modes() const { return static_cast<int>(mean_.size()) / 2; }

  // Appends k vacuum modes at the end.
  GaussianState with_vacuum_ancillas(int k) const;

 private:
  Vec mean_;
  Mat cov_;
};

// Interleaved phase-space mean sqrt(2)*(Re a_1, Im a_1, ...).
Vec phase_space_mean(const CVec& a);

// <a|b> = exp(-|a|^2/2 - |b|^2/2 + sum conj(a_j) b_j).
Complex coherent_overlap(const CVec& a, const CVec& b);

GaussianState coherent_state(const CVec& a);

GaussianPdf wigner_of_coherent(const CVec& a);
GaussianMixturePdf wigner_of_constellation(const CoherentConstellation& c);
GaussianPdf wigner_of_thermal(double e_bar, int modes);
GaussianPdf wigner_of_state(const GaussianState& s);

GaussianState apply_circuit(const GaussianState& s, const SymplecticCircuit& circ);

struct HomodyneResult {
  double outcome;
  GaussianState state;
};

// Homodynes the x quadrature of `mode`: samples the marginal, conditions
// the remaining modes (Schur complement on the measured x row/column) and
// drops the measured mode.
HomodyneResult condition_on_homodyne(const GaussianState& s, int mode, Rng& rng);

// Scalar minimization of a unimodal function by golden-section search.
struct ScalarMin {
  double x;
  double value;
};
ScalarMin golden_section_min(const std::function<double(double)>& f, double lo, double hi,
                             double xtol);

}  // namespace gocclab
