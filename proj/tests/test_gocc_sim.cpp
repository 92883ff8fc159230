#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>

#include "gocclab/gocc.hpp"

using namespace gocclab;

namespace {

CoherentConstellation pm_state(double alpha, int which) {
  CoherentConstellation c;
  c.points = {CVec::Constant(1, which == 0 ? alpha : -alpha)};
  c.weights = Vec::Ones(1);
  return c;
}

GoccProtocol homodyne_sign_protocol() {
  return GoccProtocol(1, {Round{0, SymplecticCircuit(1), {}, 1}},
                      DecisionRule::sign_affine({1.0}, 0.0));
}

}  // namespace

TEST_CASE("single-mode homodyne sign rule hits the closed-form error rate") {
  const double alpha = 0.45;
  const auto p = homodyne_sign_protocol();
  const auto pe = run_protocol_error_prob(p, pm_state(alpha, 0), pm_state(alpha, 1), 100000,
                                          RngStream(1));
  // p_err = (1 - erf(alpha sqrt 2)) / 2 = 0.18418...
  const double expected = 0.5 * (1.0 - std::erf(alpha * std::sqrt(2.0)));
  CHECK(std::abs(pe.estimate - expected) < 3.0 * pe.std_err);
}

TEST_CASE("constant decision rule errors half the time") {
  const auto p = GoccProtocol(1, {Round{0, SymplecticCircuit(1), {}, 1}},
                              DecisionRule::constant(0));
  const auto pe =
      run_protocol_error_prob(p, pm_state(0.45, 0), pm_state(0.45, 1), 50000, RngStream(2));
  CHECK(std::abs(pe.estimate - 0.5) < 3.0 * pe.std_err);
}

TEST_CASE("identical hypotheses are indistinguishable") {
  const auto p = homodyne_sign_protocol();
  const auto pe =
      run_protocol_error_prob(p, pm_state(0.7, 0), pm_state(0.7, 0), 50000, RngStream(3));
  CHECK(std::abs(pe.estimate - 0.5) < 3.0 * pe.std_err);
}

TEST_CASE("error probability replays byte-for-byte with the same seed") {
  const auto p = homodyne_sign_protocol();
  const auto a =
      run_protocol_error_prob(p, pm_state(0.45, 0), pm_state(0.45, 1), 20000, RngStream(7));
  const auto b =
      run_protocol_error_prob(p, pm_state(0.45, 0), pm_state(0.45, 1), 20000, RngStream(7));
  CHECK(a.estimate == b.estimate);
}

TEST_CASE("feed-forward displacement shifts later outcomes") {
  // Round 1 measures a vacuum ancilla mode; round 2 displaces the remaining
  // mode by 1x that outcome plus an offset before measuring it.
  std::vector<Round> rounds;
  rounds.push_back(Round{1, SymplecticCircuit(2), {}, 1});
  Round second;
  second.ancillas = 0;
  second.circuit = SymplecticCircuit(1);
  second.feedforward = {FeedForward{0, 5.0, {1.0}}};
  second.measure = 1;
  rounds.push_back(second);
  GoccProtocol p(1, std::move(rounds), DecisionRule::sign_affine({0.0, 1.0}, 0.0));

  Rng rng(11);
  double sum = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const auto outcomes = run_protocol_once(p, CVec::Zero(1), rng);
    REQUIRE(outcomes.size() == 2);
    // y2 ~ N(sqrt(2)*(5 + y1), 1/2) given y1, and E[y1] = 0.
    sum += outcomes[1] - std::sqrt(2.0) * (5.0 + outcomes[0]);
  }
  CHECK(std::abs(sum / n) < 0.03);
}

TEST_CASE("protocol validation catches mode bookkeeping errors") {
  // Leaves a mode unmeasured.
  CHECK_THROWS_AS(GoccProtocol(2, {Round{0, SymplecticCircuit(2), {}, 1}},
                               DecisionRule::constant(0)),
                  std::invalid_argument);
  // Circuit size mismatch.
  CHECK_THROWS_AS(GoccProtocol(1, {Round{1, SymplecticCircuit(1), {}, 2}},
                               DecisionRule::constant(0)),
                  std::invalid_argument);
  // Acausal feed-forward: references an outcome before any exist.
  CHECK_THROWS_AS(GoccProtocol(1,
                               {Round{0, SymplecticCircuit(1),
                                      {FeedForward{0, 0.0, {1.0}}}, 1}},
                               DecisionRule::constant(0)),
                  std::invalid_argument);
}

TEST_CASE("binned decision rule clamps out-of-range functionals") {
  const auto rule = DecisionRule::binned({1.0}, -1.0, 1.0, {0, 1});
  CHECK(rule.decide({-100.0}) == 0);
  CHECK(rule.decide({100.0}) == 1);
  CHECK(rule.decide({-0.5}) == 0);
  CHECK(rule.decide({0.5}) == 1);
}

TEST_CASE("parser reports the offending field path") {
  const std::string missing_measure = R"({
    "modes": 1,
    "rounds": [ {"ancillas": 0} ],
    "decision": {"type": "constant", "guess": 0}
  })";
  try {
    parse_protocol(missing_measure, "inline");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("rounds[0].measure") != std::string::npos);
    CHECK(msg.find("inline") != std::string::npos);
  }

  const std::string bad_gate = R"({
    "modes": 1,
    "rounds": [ {"gates": [{"type": "warp", "mode": 0}], "measure": 1} ],
    "decision": {"type": "constant", "guess": 0}
  })";
  try {
    parse_protocol(bad_gate, "inline");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("rounds[0].gates[0].type") != std::string::npos);
  }
}

TEST_CASE("parser reports the line of a JSON syntax error") {
  const std::string text = "{\n  \"modes\": 1,\n  \"rounds\": [,\n}";
  try {
    parse_protocol(text, "inline");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("parsed protocol round-trips to the same error rate as the built one") {
  const std::string text = R"({
    "modes": 1,
    "rounds": [ {"measure": 1} ],
    "decision": {"type": "sign_affine", "coefficients": [1.0], "threshold": 0.0}
  })";
  const auto parsed = parse_protocol(text, "inline");
  const auto built = homodyne_sign_protocol();
  const auto a =
      run_protocol_error_prob(parsed, pm_state(0.45, 0), pm_state(0.45, 1), 20000, RngStream(5));
  const auto b =
      run_protocol_error_prob(built, pm_state(0.45, 0), pm_state(0.45, 1), 20000, RngStream(5));
  CHECK(a.estimate == b.estimate);
}

TEST_CASE("heterodyne sampling reproduces the Husimi moments") {
  const CVec a = CVec::Constant(1, Complex(0.4, -0.6));
  const GaussianState s = coherent_state(a);
  Rng rng(13);
  Complex sum{0.0, 0.0};
  double sum_sq = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const CVec beta = heterodyne_sample(s, rng);
    sum += beta[0];
    sum_sq += std::norm(beta[0] - a[0]);
  }
  CHECK(std::abs(sum / static_cast<double>(n) - a[0]) < 0.02);
  // E|beta - a|^2 = 1 for a coherent state (unit-variance Husimi).
  CHECK(sum_sq / n == doctest::Approx(1.0).epsilon(0.03));
}

TEST_CASE("bias of the trivial response is zero and of the sign response is erf") {
  const double alpha = 0.45;
  CoherentConstellation c0 = pm_state(alpha, 0), c1 = pm_state(alpha, 1);
  const auto w0 = wigner_of_constellation(c0);
  const auto w1 = wigner_of_constellation(c1);

  ResponseFunction ones{[](const Vec&) { return 1.0; }, std::nullopt};
  CHECK(std::abs(wplus_bias(ones, w0, w1, 50000, RngStream(17))) < 0.02);

  ResponseFunction sign{[](const Vec& x) { return x[0] > 0.0 ? 1.0 : 0.0; }, std::nullopt};
  const double bias = wplus_bias(sign, w0, w1, 200000, RngStream(18));
  CHECK(bias == doctest::Approx(std::erf(alpha * std::sqrt(2.0))).epsilon(0.02));
}

TEST_CASE("out-of-range responses are rejected") {
  const auto w = wigner_of_constellation(pm_state(0.3, 0));
  ResponseFunction bad{[](const Vec&) { return 1.5; }, std::nullopt};
  CHECK_THROWS(wplus_bias(bad, w, w, 10000, RngStream(1)));
  // With a declared negativity bound the same response is admissible.
  ResponseFunction ok{[](const Vec&) { return 1.5; }, 2.0};
  CHECK_NOTHROW(wplus_bias(ok, w, w, 10000, RngStream(1)));
}

TEST_CASE("gocc norm conversion and its guard") {
  CHECK(gocc_norm_from_error(0.0) == doctest::Approx(2.0));
  CHECK(gocc_norm_from_error(0.5) == doctest::Approx(0.0));
  CHECK(gocc_norm_from_error(0.1842) == doctest::Approx(1.2632).epsilon(1e-12));
  CHECK_THROWS_AS(gocc_norm_from_error(0.6), GuardError);
}
