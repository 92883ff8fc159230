#include "gocclab/gocc.hpp"

#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <json.hpp>
#include <sstream>

namespace gocclab {

namespace {

using nlohmann::json;

int weighted_pick(const Vec& weights, Rng& rng) {
  const double u = rng.uniform01();
  double cum = 0.0;
  for (Eigen::Index k = 0; k < weights.size(); ++k) {
    cum += weights[k];
    if (u <= cum) return static_cast<int>(k);
  }
  return static_cast<int>(weights.size()) - 1;
}

GaussianState displaced(const GaussianState& s, int mode, double amount) {
  Vec mean = s.mean();
  mean[2 * mode] += std::sqrt(2.0) * amount;
  return GaussianState(std::move(mean), s.cov());
}

}  // namespace

DecisionRule DecisionRule::sign_affine(std::vector<double> coefficients, double threshold) {
  DecisionRule r;
  r.kind_ = Kind::SignAffine;
  r.coefficients_ = std::move(coefficients);
  r.threshold_ = threshold;
  return r;
}

DecisionRule DecisionRule::binned(std::vector<double> coefficients, double lo, double hi,
                                  std::vector<int> table) {
  if (table.empty()) throw std::invalid_argument("DecisionRule: empty bin table");
  if (!(lo < hi)) throw std::invalid_argument("DecisionRule: need lo < hi");
  for (int g : table)
    if (g != 0 && g != 1) throw std::invalid_argument("DecisionRule: bin guess must be 0 or 1");
  DecisionRule r;
  r.kind_ = Kind::Binned;
  r.coefficients_ = std::move(coefficients);
  r.lo_ = lo;
  r.hi_ = hi;
  r.table_ = std::move(table);
  return r;
}

DecisionRule DecisionRule::constant(int guess) {
  if (guess != 0 && guess != 1) throw std::invalid_argument("DecisionRule: guess must be 0 or 1");
  DecisionRule r;
  r.kind_ = Kind::Constant;
  r.constant_guess_ = guess;
  return r;
}

double DecisionRule::functional(const std::vector<double>& outcomes) const {
  if (coefficients_.size() > outcomes.size())
    throw std::invalid_argument(
        fmt::format("DecisionRule: {} coefficients but only {} outcomes", coefficients_.size(),
                    outcomes.size()));
  double v = 0.0;
  for (std::size_t k = 0; k < coefficients_.size(); ++k) v += coefficients_[k] * outcomes[k];
  return v;
}

int DecisionRule::decide(const std::vector<double>& outcomes) const {
  switch (kind_) {
    case Kind::Constant:
      return constant_guess_;
    case Kind::SignAffine:
      return functional(outcomes) >= threshold_ ? 0 : 1;
    case Kind::Binned: {
      const double v = functional(outcomes);
      const int nbins = static_cast<int>(table_.size());
      int b = static_cast<int>(std::floor((v - lo_) / (hi_ - lo_) * nbins));
      b = std::clamp(b, 0, nbins - 1);  // out-of-range outcomes clamp to edge bins
      return table_[static_cast<std::size_t>(b)];
    }
  }
  return 0;
}

GoccProtocol::GoccProtocol(int modes, std::vector<Round> rounds, DecisionRule decision)
    : modes_(modes), rounds_(std::move(rounds)), decision_(std::move(decision)) {
  if (modes_ < 1) throw std::invalid_argument("protocol: need at least one mode");
  if (rounds_.empty()) throw std::invalid_argument("protocol: no rounds");
  int live = modes_;
  int outcomes = 0;
  for (std::size_t r = 0; r < rounds_.size(); ++r) {
    const Round& round = rounds_[r];
    if (round.ancillas < 0)
      throw std::invalid_argument(fmt::format("protocol: round {}: negative ancilla count", r));
    const int working = live + round.ancillas;
    if (round.circuit.modes() != working)
      throw std::invalid_argument(
          fmt::format("protocol: round {}: circuit acts on {} modes, expected {}", r,
                      round.circuit.modes(), working));
    for (const auto& ff : round.feedforward) {
      if (ff.target_mode < 0 || ff.target_mode >= working)
        throw std::invalid_argument(
            fmt::format("protocol: round {}: feed-forward target {} out of range", r,
                        ff.target_mode));
      if (static_cast<int>(ff.coefficients.size()) > outcomes)
        throw std::invalid_argument(
            fmt::format("protocol: round {}: feed-forward references future outcomes "
                        "({} coefficients, {} past outcomes)",
                        r, ff.coefficients.size(), outcomes));
    }
    if (round.measure < 1 || round.measure > working)
      throw std::invalid_argument(
          fmt::format("protocol: round {}: measure count {} not in [1,{}]", r, round.measure,
                      working));
    live = working - round.measure;
    outcomes += round.measure;
  }
  if (live != 0)
    throw std::invalid_argument(
        fmt::format("protocol: {} modes left unmeasured after the final round", live));
  total_outcomes_ = outcomes;
}

std::vector<double> run_protocol_once(const GoccProtocol& p, const CVec& input, Rng& rng) {
  if (static_cast<int>(input.size()) != p.modes())
    throw std::invalid_argument("run_protocol_once: input mode count mismatch");
  GaussianState state = coherent_state(input);
  std::vector<double> outcomes;
  outcomes.reserve(static_cast<std::size_t>(p.total_outcomes()));
  for (const Round& round : p.rounds()) {
    state = state.with_vacuum_ancillas(round.ancillas);
    state = apply_circuit(state, round.circuit);
    for (const auto& ff : round.feedforward) {
      double amount = ff.offset;
      for (std::size_t k = 0; k < ff.coefficients.size(); ++k)
        amount += ff.coefficients[k] * outcomes[k];
      state = displaced(state, ff.target_mode, amount);
    }
    const int first = state.modes() - round.measure;
    for (int j = 0; j < round.measure; ++j) {
      // Measuring mode `first` repeatedly: conditioning removes the mode,
      // so the next target slides into the same index.
      auto [outcome, next] = condition_on_homodyne(state, first, rng);
      outcomes.push_back(outcome);
      state = std::move(next);
    }
  }
  return outcomes;
}

McEstimate run_protocol_error_prob(const GoccProtocol& p, const CoherentConstellation& r0,
                                   const CoherentConstellation& r1, std::int64_t n_trials,
                                   const RngStream& stream) {
  r0.validate_state();
  r1.validate_state();
  if (r0.modes() != p.modes() || r1.modes() != p.modes())
    throw std::invalid_argument("run_protocol_error_prob: constellation/protocol mode mismatch");
  if (n_trials < 1) throw std::invalid_argument("run_protocol_error_prob: need trials >= 1");

  std::int64_t errors = 0;
  for (std::int64_t t = 0; t < n_trials; ++t) {
    Rng rng = stream.substream(static_cast<std::uint64_t>(t));
    const int hypothesis = rng.uniform01() < 0.5 ? 0 : 1;
    const CoherentConstellation& r = hypothesis == 0 ? r0 : r1;
    const int lambda = weighted_pick(r.weights, rng);
    const auto outcomes = run_protocol_once(p, r.points[static_cast<std::size_t>(lambda)], rng);
    if (p.decision().decide(outcomes) != hypothesis) ++errors;
  }
  const double n = static_cast<double>(n_trials);
  const double p_err = static_cast<double>(errors) / n;
  return {p_err, std::sqrt(std::max(p_err * (1.0 - p_err), 1.0 / n) / n)};
}

double gocc_norm_from_error(double p_err) {
  if (p_err < 0.0 || p_err > 0.5)
    throw GuardError(fmt::format(
        "gocc_norm_from_error: p_err = {} outside [0, 1/2]; negate the decision rule", p_err));
  return 2.0 * (1.0 - 2.0 * p_err);
}

CVec heterodyne_sample(const GaussianState& state, Rng& rng) {
  const int n = static_cast<int>(state.mean().size());
  const Mat husimi_cov = state.cov() + 0.5 * Mat::Identity(n, n);
  Vec y = GaussianPdf(state.mean(), husimi_cov).sample(rng);
  CVec beta(state.modes());
  for (int j = 0; j < state.modes(); ++j)
    beta[j] = Complex(y[2 * j], y[2 * j + 1]) / std::sqrt(2.0);
  return beta;
}

double wplus_bias(const ResponseFunction& f, const GaussianMixturePdf& w0,
                  const GaussianMixturePdf& w1, std::int64_t n_samples, const RngStream& stream) {
  if (w0.dim() != w1.dim()) throw std::invalid_argument("wplus_bias: dimension mismatch");
  if (n_samples < 1) throw std::invalid_argument("wplus_bias: need samples >= 1");
  constexpr double kRangeTol = 1e-9;
  const double b = f.negativity_bound.value_or(1.0);
  double sum = 0.0;
  constexpr std::int64_t kChunk = 8192;
  std::int64_t done = 0;
  for (std::int64_t chunk = 0; done < n_samples; ++chunk) {
    Rng rng = stream.substream(static_cast<std::uint64_t>(chunk));
    const std::int64_t take = std::min(kChunk, n_samples - done);
    for (std::int64_t i = 0; i < take; ++i) {
      const Vec x = rng.uniform01() < 0.5 ? w0.sample(rng) : w1.sample(rng);
      const double fx = f.f(x);
      if (f.negativity_bound) {
        if (std::abs(2.0 * fx - 1.0) > b + kRangeTol)
          throw std::invalid_argument(fmt::format(
              "wplus_bias: |2F-1| = {} exceeds declared bound {}", std::abs(2.0 * fx - 1.0), b));
      } else if (fx < -kRangeTol || fx > 1.0 + kRangeTol) {
        throw std::invalid_argument(
            fmt::format("wplus_bias: response F = {} outside [0,1]", fx));
      }
      const double l0 = w0.log_density(x);
      const double l1 = w1.log_density(x);
      sum += 2.0 * std::tanh(0.5 * (l0 - l1)) * fx;  // (w0 - w1)/q * F
    }
    done += take;
  }
  return sum / static_cast<double>(n_samples);
}

// ---------------------------------------------------------------------------
// Protocol file format
// ---------------------------------------------------------------------------

namespace {

[[noreturn]] void fail_field(const std::string& origin, const std::string& path,
                             const std::string& why) {
  throw ParseError(fmt::format("{}: field '{}': {}", origin, path, why));
}

const json& need(const json& obj, const std::string& path, const char* key,
                 const std::string& origin) {
  if (!obj.is_object()) fail_field(origin, path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) fail_field(origin, path + "." + key, "missing");
  return *it;
}

int need_int(const json& obj, const std::string& path, const char* key,
             const std::string& origin) {
  const json& v = need(obj, path, key, origin);
  if (!v.is_number_integer()) fail_field(origin, path + "." + key, "expected an integer");
  return v.get<int>();
}

double need_num(const json& obj, const std::string& path, const char* key,
                const std::string& origin) {
  const json& v = need(obj, path, key, origin);
  if (!v.is_number()) fail_field(origin, path + "." + key, "expected a number");
  return v.get<double>();
}

std::vector<double> need_num_array(const json& obj, const std::string& path, const char* key,
                                   const std::string& origin) {
  const json& v = need(obj, path, key, origin);
  if (!v.is_array()) fail_field(origin, path + "." + key, "expected an array");
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number()) fail_field(origin, path + "." + key, "expected numeric entries");
    out.push_back(e.get<double>());
  }
  return out;
}

SymplecticCircuit parse_gates(const json& arr, int working_modes, const std::string& path,
                              const std::string& origin) {
  if (!arr.is_array()) fail_field(origin, path, "expected an array of gates");
  SymplecticCircuit circ(working_modes);
  int idx = 0;
  for (const auto& g : arr) {
    const std::string gpath = fmt::format("{}[{}]", path, idx++);
    const json& tv = need(g, gpath, "type", origin);
    if (!tv.is_string()) fail_field(origin, gpath + ".type", "expected a string");
    const std::string type = tv.get<std::string>();
    try {
      if (type == "beamsplitter") {
        const json& ms = need(g, gpath, "modes", origin);
        if (!ms.is_array() || ms.size() != 2 || !ms[0].is_number_integer() ||
            !ms[1].is_number_integer())
          fail_field(origin, gpath + ".modes", "expected two mode indices");
        circ.beamsplitter(ms[0].get<int>(), ms[1].get<int>(), need_num(g, gpath, "theta", origin));
      } else if (type == "phase") {
        circ.phase_rotation(need_int(g, gpath, "mode", origin), need_num(g, gpath, "phi", origin));
      } else if (type == "squeeze") {
        circ.squeeze(need_int(g, gpath, "mode", origin), need_num(g, gpath, "r", origin));
      } else if (type == "displace") {
        circ.displace(need_int(g, gpath, "mode", origin),
                      Complex(need_num(g, gpath, "re", origin), need_num(g, gpath, "im", origin)));
      } else {
        fail_field(origin, gpath + ".type", fmt::format("unknown gate type '{}'", type));
      }
    } catch (const std::invalid_argument& e) {
      fail_field(origin, gpath, e.what());
    }
  }
  return circ;
}

DecisionRule parse_decision(const json& d, const std::string& origin) {
  const std::string path = "decision";
  const json& tv = need(d, path, "type", origin);
  if (!tv.is_string()) fail_field(origin, path + ".type", "expected a string");
  const std::string type = tv.get<std::string>();
  try {
    if (type == "sign_affine") {
      return DecisionRule::sign_affine(need_num_array(d, path, "coefficients", origin),
                                       need_num(d, path, "threshold", origin));
    }
    if (type == "binned") {
      const json& tb = need(d, path, "table", origin);
      if (!tb.is_array()) fail_field(origin, path + ".table", "expected an array");
      std::vector<int> table;
      for (const auto& e : tb) {
        if (!e.is_number_integer()) fail_field(origin, path + ".table", "expected integer entries");
        table.push_back(e.get<int>());
      }
      return DecisionRule::binned(need_num_array(d, path, "coefficients", origin),
                                  need_num(d, path, "lo", origin), need_num(d, path, "hi", origin),
                                  std::move(table));
    }
    if (type == "constant") {
      return DecisionRule::constant(need_int(d, path, "guess", origin));
    }
  } catch (const std::invalid_argument& e) {
    fail_field(origin, path, e.what());
  }
  fail_field(origin, path + ".type", fmt::format("unknown decision type '{}'", type));
}

}  // namespace

GoccProtocol parse_protocol(const std::string& text, const std::string& origin) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    // e.byte is a 1-based offset into the text; recover the line number.
    std::size_t line = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i)
      if (text[i] == '\n') ++line;
    throw ParseError(fmt::format("{}: line {}: {}", origin, line, e.what()));
  }

  const int modes = need_int(root, "", "modes", origin);
  if (modes < 1) fail_field(origin, "modes", "must be >= 1");
  const json& rounds_json = need(root, "", "rounds", origin);
  if (!rounds_json.is_array() || rounds_json.empty())
    fail_field(origin, "rounds", "expected a non-empty array");

  std::vector<Round> rounds;
  int live = modes;
  int idx = 0;
  for (const auto& rj : rounds_json) {
    const std::string rpath = fmt::format("rounds[{}]", idx++);
    Round round;
    round.ancillas = rj.contains("ancillas") ? need_int(rj, rpath, "ancillas", origin) : 0;
    if (round.ancillas < 0) fail_field(origin, rpath + ".ancillas", "must be >= 0");
    const int working = live + round.ancillas;
    round.circuit = rj.contains("gates") ? parse_gates(rj.at("gates"), working, rpath + ".gates", origin)
                                         : SymplecticCircuit(working);
    if (rj.contains("feedforward")) {
      const json& ffs = rj.at("feedforward");
      if (!ffs.is_array()) fail_field(origin, rpath + ".feedforward", "expected an array");
      int fidx = 0;
      for (const auto& fj : ffs) {
        const std::string fpath = fmt::format("{}.feedforward[{}]", rpath, fidx++);
        FeedForward ff;
        ff.target_mode = need_int(fj, fpath, "target_mode", origin);
        ff.offset = fj.contains("offset") ? need_num(fj, fpath, "offset", origin) : 0.0;
        if (fj.contains("coefficients"))
          ff.coefficients = need_num_array(fj, fpath, "coefficients", origin);
        round.feedforward.push_back(std::move(ff));
      }
    }
    round.measure = need_int(rj, rpath, "measure", origin);
    live = working - round.measure;
    rounds.push_back(std::move(round));
  }

  DecisionRule decision = parse_decision(need(root, "", "decision", origin), origin);
  try {
    return GoccProtocol(modes, std::move(rounds), std::move(decision));
  } catch (const std::invalid_argument& e) {
    throw ParseError(fmt::format("{}: {}", origin, e.what()));
  }
}

GoccProtocol load_protocol(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(fmt::format("{}: cannot open file", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_protocol(ss.str(), path.filename().string());
}

}  // namespace gocclab
