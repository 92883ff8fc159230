#include "gocclab/gaussian.hpp"

#include <fmt/format.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <numbers>

namespace gocclab {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;

void require_same_modes(const CVec& a, const CVec& b, const char* what) {
  if (a.size() != b.size()) {
    throw std::invalid_argument(
        fmt::format("{}: mode count mismatch ({} vs {})", what, a.size(), b.size()));
  }
}

Mat symmetrized(const Mat& a) { return 0.5 * (a + a.transpose()); }

// Smallest eigenvalue of the Hermitian matrix cov + (i/2) Omega.
double min_uncertainty_eigenvalue(const Mat& cov) {
  const int n = static_cast<int>(cov.rows());
  if (n == 0) return 0.0;  // empty state after the last measurement
  CMat h = cov.cast<Complex>();
  const Mat omega = symplectic_form(n / 2);
  h += Complex(0.0, 0.5) * omega.cast<Complex>();
  Eigen::SelfAdjointEigenSolver<CMat> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

}  // namespace

Mat symplectic_form(int modes) {
  Mat omega = Mat::Zero(2 * modes, 2 * modes);
  for (int j = 0; j < modes; ++j) {
    omega(2 * j, 2 * j + 1) = 1.0;
    omega(2 * j + 1, 2 * j) = -1.0;
  }
  return omega;
}

void CoherentConstellation::validate_state() const {
  if (points.empty()) throw std::invalid_argument("constellation: no points");
  if (weights.size() != static_cast<Eigen::Index>(points.size()))
    throw std::invalid_argument("constellation: weight/point count mismatch");
  for (const auto& p : points) {
    if (p.size() != points.front().size())
      throw std::invalid_argument("constellation: inconsistent mode counts");
    if (!p.allFinite()) throw std::invalid_argument("constellation: non-finite amplitude");
  }
  if (weights.minCoeff() < 0.0)
    throw std::invalid_argument("constellation: negative weight in a state");
  if (std::abs(weights.sum() - 1.0) > 1e-12)
    throw std::invalid_argument(
        fmt::format("constellation: weights sum to {} != 1", weights.sum()));
}

void CoherentConstellation::validate_signed() const {
  if (points.empty()) throw std::invalid_argument("constellation: no points");
  if (weights.size() != static_cast<Eigen::Index>(points.size()))
    throw std::invalid_argument("constellation: weight/point count mismatch");
  for (const auto& p : points) {
    if (p.size() != points.front().size())
      throw std::invalid_argument("constellation: inconsistent mode counts");
  }
  if (std::abs(weights.sum()) > 1e-10)
    throw std::invalid_argument(
        fmt::format("signed constellation: weights sum to {} != 0", weights.sum()));
}

double CoherentConstellation::mean_photons_per_mode() const {
  double total = 0.0;
  for (const auto& p : points) total += p.squaredNorm();
  return total / (static_cast<double>(points.size()) * modes());
}

CoherentConstellation signed_difference(const CoherentConstellation& r0,
                                        const CoherentConstellation& r1) {
  if (r0.modes() != r1.modes())
    throw std::invalid_argument("signed_difference: mode count mismatch");
  CoherentConstellation delta;
  delta.points = r0.points;
  delta.points.insert(delta.points.end(), r1.points.begin(), r1.points.end());
  delta.weights.resize(r0.size() + r1.size());
  delta.weights.head(r0.size()) = r0.weights;
  delta.weights.tail(r1.size()) = -r1.weights;
  return delta;
}

GaussianPdf::GaussianPdf(Vec mean, Mat cov) : mean_(std::move(mean)), cov_(std::move(cov)) {
  const int d = static_cast<int>(mean_.size());
  if (cov_.rows() != d || cov_.cols() != d)
    throw std::invalid_argument("GaussianPdf: mean/cov dimension mismatch");
  if ((cov_ - cov_.transpose()).cwiseAbs().maxCoeff() > 1e-10 * (1.0 + cov_.cwiseAbs().maxCoeff()))
    throw std::invalid_argument("GaussianPdf: covariance not symmetric");
  cov_ = symmetrized(cov_);

  Eigen::LLT<Mat> llt(cov_);
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument("GaussianPdf: covariance not positive definite");
  chol_ = llt.matrixL();
  double log_det = 0.0;
  for (int i = 0; i < d; ++i) log_det += 2.0 * std::log(chol_(i, i));
  log_norm_ = -0.5 * (d * kLog2Pi + log_det);

  // Fast path for sigma^2 * I, the dominant case (coherent-state Wigners).
  const double v = cov_(0, 0);
  if ((cov_ - v * Mat::Identity(d, d)).cwiseAbs().maxCoeff() == 0.0) {
    isotropic_ = true;
    iso_var_ = v;
  }
}

double GaussianPdf::log_density(const Vec& x) const {
  if (x.size() != mean_.size())
    throw std::invalid_argument("GaussianPdf: point dimension mismatch");
  if (isotropic_) {
    return log_norm_ - 0.5 * (x - mean_).squaredNorm() / iso_var_;
  }
  const Vec y = chol_.triangularView<Eigen::Lower>().solve(x - mean_);
  return log_norm_ - 0.5 * y.squaredNorm();
}

Vec GaussianPdf::sample(Rng& rng) const {
  Vec z(mean_.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = rng.normal();
  if (isotropic_) return mean_ + std::sqrt(iso_var_) * z;
  return mean_ + chol_ * z;
}

GaussianMixturePdf::GaussianMixturePdf(Vec weights, std::vector<GaussianPdf> components)
    : weights_(std::move(weights)), components_(std::move(components)) {
  if (components_.empty()) throw std::invalid_argument("mixture: empty component list");
  if (weights_.size() != static_cast<Eigen::Index>(components_.size()))
    throw std::invalid_argument("mixture: weight/component count mismatch");
  if (weights_.minCoeff() < 0.0) throw std::invalid_argument("mixture: negative weight");
  if (std::abs(weights_.sum() - 1.0) > 1e-12)
    throw std::invalid_argument(fmt::format("mixture: weights sum to {} != 1", weights_.sum()));
  for (const auto& c : components_) {
    if (c.dim() != components_.front().dim())
      throw std::invalid_argument("mixture: inconsistent component dimensions");
  }
  log_weights_ = weights_.array().max(1e-300).log();
}

double GaussianMixturePdf::log_density(const Vec& x) const {
  // log-sum-exp over components; keeps m >~ 8 from underflowing.
  double best = -std::numeric_limits<double>::infinity();
  thread_local std::vector<double> terms;
  terms.resize(components_.size());
  for (std::size_t k = 0; k < components_.size(); ++k) {
    terms[k] = log_weights_[static_cast<Eigen::Index>(k)] + components_[k].log_density(x);
    best = std::max(best, terms[k]);
  }
  if (!std::isfinite(best)) return best;
  double acc = 0.0;
  for (double t : terms) acc += std::exp(t - best);
  return best + std::log(acc);
}

Vec GaussianMixturePdf::sample(Rng& rng) const {
  const double u = rng.uniform01();
  double cum = 0.0;
  std::size_t pick = components_.size() - 1;
  for (std::size_t k = 0; k < components_.size(); ++k) {
    cum += weights_[static_cast<Eigen::Index>(k)];
    if (u <= cum) {
      pick = k;
      break;
    }
  }
  return components_[pick].sample(rng);
}

Vec GaussianMixturePdf::mean() const {
  Vec m = Vec::Zero(dim());
  for (std::size_t k = 0; k < components_.size(); ++k)
    m += weights_[static_cast<Eigen::Index>(k)] * components_[k].mean();
  return m;
}

SymplecticCircuit::SymplecticCircuit(int modes) : modes_(modes) {
  if (modes < 0) throw std::invalid_argument("circuit: negative mode count");
}

void SymplecticCircuit::check_mode(int i) const {
  if (i < 0 || i >= modes_)
    throw std::invalid_argument(fmt::format("circuit: mode {} out of range [0,{})", i, modes_));
}

SymplecticCircuit& SymplecticCircuit::beamsplitter(int i, int j, double theta) {
  check_mode(i);
  check_mode(j);
  if (i == j) throw std::invalid_argument("beamsplitter: identical modes");
  gates_.push_back({Gate::Kind::Beamsplitter, i, j, theta, {}});
  return *this;
}

SymplecticCircuit& SymplecticCircuit::phase_rotation(int i, double phi) {
  check_mode(i);
  gates_.push_back({Gate::Kind::Phase, i, 0, phi, {}});
  return *this;
}

SymplecticCircuit& SymplecticCircuit::squeeze(int i, double r) {
  check_mode(i);
  gates_.push_back({Gate::Kind::Squeeze, i, 0, r, {}});
  return *this;
}

SymplecticCircuit& SymplecticCircuit::displace(int i, Complex amount) {
  check_mode(i);
  gates_.push_back({Gate::Kind::Displace, i, 0, 0.0, amount});
  return *this;
}

std::pair<Mat, Vec> SymplecticCircuit::affine_map() const {
  const int n = 2 * modes_;
  Mat s = Mat::Identity(n, n);
  Vec d = Vec::Zero(n);
  for (const auto& g : gates_) {
    switch (g.kind) {
      case Gate::Kind::Beamsplitter: {
        const double c = std::cos(g.param), sn = std::sin(g.param);
        Mat block = Mat::Identity(n, n);
        // Mixes (x_i,x_j) and (p_i,p_j) by the same rotation.
        block(2 * g.a, 2 * g.a) = c;
        block(2 * g.a, 2 * g.b) = sn;
        block(2 * g.b, 2 * g.a) = -sn;
        block(2 * g.b, 2 * g.b) = c;
        block(2 * g.a + 1, 2 * g.a + 1) = c;
        block(2 * g.a + 1, 2 * g.b + 1) = sn;
        block(2 * g.b + 1, 2 * g.a + 1) = -sn;
        block(2 * g.b + 1, 2 * g.b + 1) = c;
        s = block * s;
        d = block * d;
        break;
      }
      case Gate::Kind::Phase: {
        const double c = std::cos(g.param), sn = std::sin(g.param);
        Mat block = Mat::Identity(n, n);
        // x -> cos(phi) x + sin(phi) p, p -> -sin(phi) x + cos(phi) p.
        block(2 * g.a, 2 * g.a) = c;
        block(2 * g.a, 2 * g.a + 1) = sn;
        block(2 * g.a + 1, 2 * g.a) = -sn;
        block(2 * g.a + 1, 2 * g.a + 1) = c;
        s = block * s;
        d = block * d;
        break;
      }
      case Gate::Kind::Squeeze: {
        Mat block = Mat::Identity(n, n);
        block(2 * g.a, 2 * g.a) = std::exp(-g.param);
        block(2 * g.a + 1, 2 * g.a + 1) = std::exp(g.param);
        s = block * s;
        d = block * d;
        break;
      }
      case Gate::Kind::Displace: {
        d[2 * g.a] += std::sqrt(2.0) * g.amount.real();
        d[2 * g.a + 1] += std::sqrt(2.0) * g.amount.imag();
        break;
      }
    }
  }
  const Mat omega = symplectic_form(modes_);
  const double defect = (s * omega * s.transpose() - omega).cwiseAbs().maxCoeff();
  if (defect > kSymplecticTol) {
    throw GuardError(fmt::format("circuit: composed map fails symplectic check, defect {}", defect));
  }
  return {s, d};
}

GaussianState::GaussianState(Vec mean, Mat cov) : mean_(std::move(mean)), cov_(std::move(cov)) {
  if (mean_.size() % 2 != 0 || cov_.rows() != mean_.size() || cov_.cols() != mean_.size())
    throw std::invalid_argument("GaussianState: bad dimensions");
  cov_ = symmetrized(cov_);
  if (min_uncertainty_eigenvalue(cov_) < -kCovPositivityTol) {
    throw GuardError("GaussianState: uncertainty invariant cov + (i/2) Omega >= 0 violated");
  }
}

GaussianState GaussianState::vacuum(int modes) {
  return GaussianState(Vec::Zero(2 * modes), kVacuumVariance * Mat::Identity(2 * modes, 2 * modes));
}

GaussianState GaussianState::with_vacuum_ancillas(int k) const {
  if (k == 0) return *this;
  const int n = static_cast<int>(mean_.size());
  Vec mean = Vec::Zero(n + 2 * k);
  mean.head(n) = mean_;
  Mat cov = kVacuumVariance * Mat::Identity(n + 2 * k, n + 2 * k);
  cov.topLeftCorner(n, n) = cov_;
  return GaussianState(std::move(mean), std::move(cov));
}

Vec phase_space_mean(const CVec& a) {
  Vec z(2 * a.size());
  for (Eigen::Index j = 0; j < a.size(); ++j) {
    z[2 * j] = std::sqrt(2.0) * a[j].real();
    z[2 * j + 1] = std::sqrt(2.0) * a[j].imag();
  }
  return z;
}

Complex coherent_overlap(const CVec& a, const CVec& b) {
  require_same_modes(a, b, "coherent_overlap");
  const Complex inner = a.dot(b);  // sum conj(a_j) b_j
  return std::exp(-0.5 * a.squaredNorm() - 0.5 * b.squaredNorm() + inner);
}

GaussianState coherent_state(const CVec& a) {
  const int n = 2 * static_cast<int>(a.size());
  return GaussianState(phase_space_mean(a), kVacuumVariance * Mat::Identity(n, n));
}

GaussianPdf wigner_of_coherent(const CVec& a) {
  const int n = 2 * static_cast<int>(a.size());
  return GaussianPdf(phase_space_mean(a), kVacuumVariance * Mat::Identity(n, n));
}

GaussianMixturePdf wigner_of_constellation(const CoherentConstellation& c) {
  c.validate_state();
  std::vector<GaussianPdf> comps;
  comps.reserve(c.points.size());
  for (const auto& p : c.points) comps.push_back(wigner_of_coherent(p));
  return GaussianMixturePdf(c.weights, std::move(comps));
}

GaussianPdf wigner_of_thermal(double e_bar, int modes) {
  if (e_bar < 0.0) throw std::invalid_argument("wigner_of_thermal: negative energy");
  const int n = 2 * modes;
  return GaussianPdf(Vec::Zero(n), (e_bar + kVacuumVariance) * Mat::Identity(n, n));
}

GaussianPdf wigner_of_state(const GaussianState& s) { return GaussianPdf(s.mean(), s.cov()); }

GaussianState apply_circuit(const GaussianState& s, const SymplecticCircuit& circ) {
  if (circ.modes() != s.modes())
    throw std::invalid_argument(fmt::format("apply_circuit: circuit acts on {} modes, state has {}",
                                            circ.modes(), s.modes()));
  const auto [smat, d] = circ.affine_map();
  return GaussianState(smat * s.mean() + d, smat * s.cov() * smat.transpose());
}

HomodyneResult condition_on_homodyne(const GaussianState& s, int mode, Rng& rng) {
  const int m = s.modes();
  if (m < 1) throw std::invalid_argument("condition_on_homodyne: empty state");
  if (mode < 0 || mode >= m)
    throw std::invalid_argument(fmt::format("condition_on_homodyne: mode {} out of range", mode));

  const int xi = 2 * mode;  // measured x row/column
  const double var = s.cov()(xi, xi);
  const double outcome = s.mean()[xi] + std::sqrt(var) * rng.normal();

  // Remaining coordinates: everything except (x,p) of the measured mode.
  std::vector<int> keep;
  keep.reserve(2 * (m - 1));
  for (int j = 0; j < 2 * m; ++j) {
    if (j != xi && j != xi + 1) keep.push_back(j);
  }

  Vec mean(keep.size());
  Mat cov(keep.size(), keep.size());
  Vec cross(keep.size());
  for (std::size_t r = 0; r < keep.size(); ++r) {
    mean[static_cast<Eigen::Index>(r)] = s.mean()[keep[r]];
    cross[static_cast<Eigen::Index>(r)] = s.cov()(keep[r], xi);
    for (std::size_t c = 0; c < keep.size(); ++c)
      cov(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = s.cov()(keep[r], keep[c]);
  }
  mean += cross * ((outcome - s.mean()[xi]) / var);
  cov -= (cross * cross.transpose()) / var;
  return {outcome, GaussianState(std::move(mean), std::move(cov))};
}

ScalarMin golden_section_min(const std::function<double(double)>& f, double lo, double hi,
                             double xtol) {
  constexpr double invphi = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > xtol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  const double x = 0.5 * (a + b);
  return {x, f(x)};
}

}  // namespace gocclab
