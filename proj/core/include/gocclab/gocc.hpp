#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "gocclab/gaussian.hpp"
#include "gocclab/wigner_metrics.hpp"

namespace gocclab {

// Displacement of `target_mode` by the real amount
// offset + sum_k coefficients[k] * outcome[k], where outcome[k] ranges over
// homodyne outcomes recorded before the current round.
struct FeedForward {
  int target_mode = 0;
  double offset = 0.0;
  std::vector<double> coefficients;
};

struct Round {
  int ancillas = 0;
  SymplecticCircuit circuit{0};
  std::vector<FeedForward> feedforward;
  int measure = 1;  // homodynes the last `measure` modes
};

// Total decision function of the outcome record: either the sign of an
// affine functional, or a lookup over uniform bins of that functional.
class DecisionRule {
 public:
  static DecisionRule sign_affine(std::vector<double> coefficients, double threshold);
  static DecisionRule binned(std::vector<double> coefficients, double lo, double hi,
                             std::vector<int> table);
  // Ignores the outcomes entirely.
  static DecisionRule constant(int guess);

  // Returns the guessed hypothesis, 0 or 1.
  int decide(const std::vector<double>& outcomes) const;

  bool is_sign_affine() const { return kind_ == Kind::SignAffine; }

 private:
  enum class Kind { SignAffine, Binned, Constant };
  Kind kind_ = Kind::SignAffine;
  std::vector<double> coefficients_;
  double threshold_ = 0.0;
  double lo_ = 0.0, hi_ = 0.0;
  std::vector<int> table_;
  int constant_guess_ = 0;

  double functional(const std::vector<double>& outcomes) const;
};

// Declarative round list: ancilla attachment, symplectic circuit with
// affine feed-forward displacements, homodyne counts, final decision.
class GoccProtocol {
 public:
  GoccProtocol(int modes, std::vector<Round> rounds, DecisionRule decision);

  int modes() const { return modes_; }
  const std::vector<Round>& rounds() const { return rounds_; }
  const DecisionRule& decision() const { return decision_; }
  int total_outcomes() const { return total_outcomes_; }

 private:
  int modes_;
  std::vector<Round> rounds_;
  DecisionRule decision_;
  int total_outcomes_ = 0;
};

// Executes the protocol trial-by-trial on the equal-prior hypothesis pair
// (r0, r1) and returns the empirical error probability with its binomial
// standard error. Trial t draws from substream (seed, t).
McEstimate run_protocol_error_prob(const GoccProtocol& p, const CoherentConstellation& r0,
                                   const CoherentConstellation& r1, std::int64_t n_trials,
                                   const RngStream& stream);

// Raw outcome record of a single protocol execution on a coherent input.
std::vector<double> run_protocol_once(const GoccProtocol& p, const CVec& input, Rng& rng);

// 2*(1 - 2*p_err): the GOCC-norm lower estimate achieved by the protocol.
double gocc_norm_from_error(double p_err);

// Samples the Husimi density: normal with covariance cov + (1/2) I around
// the state mean, folded back into per-mode complex amplitudes.
CVec heterodyne_sample(const GaussianState& state, Rng& rng);

// Stochastic response function F: phase point -> [0,1], or with declared
// negativity bound |2F - 1| <= B.
struct ResponseFunction {
  std::function<double(const Vec&)> f;
  std::optional<double> negativity_bound;
};

// MC estimate of integral (w0 - w1) F; |result| <= (B/2) ||W0 - W1||_L1
// with B = 1 in the W+ case.
double wplus_bias(const ResponseFunction& f, const GaussianMixturePdf& w0,
                  const GaussianMixturePdf& w1, std::int64_t n_samples, const RngStream& stream);

// Loads a protocol from its JSON file format (see docs/protocol_schema.md).
// Throws ParseError naming the offending field (and line, for syntax errors).
GoccProtocol load_protocol(const std::filesystem::path& path);
GoccProtocol parse_protocol(const std::string& text, const std::string& origin);

}  // namespace gocclab
