// Command-line front end: parameter sweeps, experiment drivers, CSV/JSON
// emission, seed management.
//
// Exit codes: 0 success, 2 bad arguments, 3 parse error, 4 numeric guard.

#include <fmt/format.h>

#include <CLI11.hpp>
#include <Eigen/Core>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "gocclab/bounds.hpp"
#include "gocclab/fock.hpp"
#include "gocclab/gocc.hpp"
#include "gocclab/hiding.hpp"
#include "gocclab/wigner_metrics.hpp"

namespace {

using gocclab::CoherentConstellation;
using gocclab::McEstimate;
using json = nlohmann::json;

constexpr int kSchemaVersion = 1;

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error(fmt::format("cannot open output file '{}'", out_path));
  out << text;
}

json mc_json(const McEstimate& e) {
  return json{{"estimate", e.estimate}, {"std_err", e.std_err}};
}

std::vector<std::uint64_t> parse_seed_list(const std::string& s) {
  std::vector<std::uint64_t> seeds;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    seeds.push_back(std::stoull(tok));
  }
  if (seeds.empty()) throw CLI::ValidationError("--seeds", "expected a comma-separated list");
  return seeds;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

CoherentConstellation constellation_from_json(const json& j, const std::string& which,
                                              const std::string& origin) {
  using gocclab::ParseError;
  if (!j.is_object() || !j.contains("weights") || !j.contains("points"))
    throw ParseError(fmt::format("{}: field '{}': expected object with weights and points",
                                 origin, which));
  CoherentConstellation c;
  const auto& w = j.at("weights");
  const auto& pts = j.at("points");
  if (!w.is_array() || !pts.is_array() || w.size() != pts.size() || w.empty())
    throw ParseError(fmt::format("{}: field '{}': weights/points must be equal-length arrays",
                                 origin, which));
  c.weights.resize(static_cast<Eigen::Index>(w.size()));
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!w[i].is_number())
      throw ParseError(fmt::format("{}: field '{}.weights[{}]': expected number", origin, which, i));
    c.weights[static_cast<Eigen::Index>(i)] = w[i].get<double>();
    const auto& p = pts[i];
    if (!p.is_array() || p.empty())
      throw ParseError(fmt::format("{}: field '{}.points[{}]': expected array of [re,im] pairs",
                                   origin, which, i));
    Eigen::VectorXcd point(static_cast<Eigen::Index>(p.size()));
    for (std::size_t m = 0; m < p.size(); ++m) {
      if (!p[m].is_array() || p[m].size() != 2 || !p[m][0].is_number() || !p[m][1].is_number())
        throw ParseError(fmt::format("{}: field '{}.points[{}][{}]': expected [re, im]", origin,
                                     which, i, m));
      point[static_cast<Eigen::Index>(m)] = {p[m][0].get<double>(), p[m][1].get<double>()};
    }
    c.points.push_back(std::move(point));
  }
  return c;
}

// State spec: "pm:ALPHA" for the single-mode |+a> vs |-a> pair, or a path
// to a JSON file {"r0": {...}, "r1": {...}}.
std::pair<CoherentConstellation, CoherentConstellation> load_state_spec(const std::string& spec) {
  using gocclab::ParseError;
  if (spec.rfind("pm:", 0) == 0) {
    double alpha = 0.0;
    try {
      alpha = std::stod(spec.substr(3));
    } catch (const std::exception&) {
      throw ParseError(fmt::format("state spec '{}': expected pm:<alpha>", spec));
    }
    CoherentConstellation r0, r1;
    r0.points = {Eigen::VectorXcd::Constant(1, alpha)};
    r1.points = {Eigen::VectorXcd::Constant(1, -alpha)};
    r0.weights = r1.weights = Eigen::VectorXd::Ones(1);
    return {r0, r1};
  }
  std::ifstream in(spec);
  if (!in) throw ParseError(fmt::format("state spec '{}': cannot open file", spec));
  json root;
  try {
    std::ostringstream ss;
    ss << in.rdbuf();
    root = json::parse(ss.str());
  } catch (const json::parse_error& e) {
    throw ParseError(fmt::format("{}: {}", spec, e.what()));
  }
  return {constellation_from_json(root.value("r0", json()), "r0", spec),
          constellation_from_json(root.value("r1", json()), "r1", spec)};
}

// --- subcommand bodies -----------------------------------------------------

int cmd_sweep_coherent(double alpha_min, double alpha_max, int steps,
                       const std::string& out_path) {
  if (!(alpha_min >= 0.0 && alpha_min < alpha_max) || steps < 2)
    throw CLI::ValidationError("sweep-coherent", "need 0 <= alpha_min < alpha_max and steps >= 2");
  std::string csv;
  csv += fmt::format("# gocc-lab sweep-coherent v{}\n", kSchemaVersion);
  csv += fmt::format("# alpha_min={:.12g} alpha_max={:.12g} steps={}\n", alpha_min, alpha_max,
                     steps);
  csv += "alpha,half_trace,half_gocc,gap\n";
  double best_gap = -1.0, best_alpha = 0.0;
  for (int i = 0; i < steps; ++i) {
    const double a = alpha_min + (alpha_max - alpha_min) * i / (steps - 1);
    const double half_trace = std::sqrt(1.0 - std::exp(-4.0 * a * a));
    const double half_gocc = std::erf(a * std::sqrt(2.0));
    const double gap = half_trace - half_gocc;
    if (gap > best_gap) {
      best_gap = gap;
      best_alpha = a;
    }
    csv += fmt::format("{:.12g},{:.12g},{:.12g},{:.12g}\n", a, half_trace, half_gocc, gap);
  }
  csv += fmt::format("# argmax: alpha={:.12g} gap={:.12g}\n", best_alpha, best_gap);
  emit(csv, out_path);
  return 0;
}

int cmd_chernoff(double alpha, int cutoff, std::int64_t mc_samples, std::uint64_t seed,
                 const std::string& out_path) {
  if (alpha < 0.0) throw CLI::ValidationError("--alpha", "must be >= 0");
  json out;
  out["command"] = "chernoff";
  out["schema_version"] = kSchemaVersion;
  out["alpha"] = alpha;
  out["cutoff"] = cutoff;
  out["mc_samples"] = mc_samples;
  out["seed"] = seed;

  CoherentConstellation r0, r1;
  r0.points = {Eigen::VectorXcd::Constant(1, alpha)};
  r1.points = {Eigen::VectorXcd::Constant(1, -alpha)};
  r0.weights = r1.weights = Eigen::VectorXd::Ones(1);

  const auto rho0 = gocclab::density_from_constellation(r0, {cutoff});
  const auto rho1 = gocclab::density_from_constellation(r1, {cutoff});
  const double xi_q = gocclab::quantum_chernoff(rho0, rho1);

  const auto w0 = gocclab::wigner_of_constellation(r0);
  const auto w1 = gocclab::wigner_of_constellation(r1);
  const double xi_c_mc =
      gocclab::classical_chernoff_mc(w0, w1, mc_samples, gocclab::RngStream(seed));
  const double xi_c_closed = gocclab::classical_chernoff_equal_cov(
      w0.components()[0].mean(), w1.components()[0].mean(), w0.components()[0].cov());

  out["quantum_chernoff"] = xi_q;
  out["quantum_closed_form"] = 4.0 * alpha * alpha;
  out["classical_chernoff_mc"] = xi_c_mc;
  out["classical_chernoff_closed_form"] = xi_c_closed;
  out["ratio"] = xi_c_mc > 0.0 ? xi_q / xi_c_mc : 0.0;
  emit(out.dump(2) + "\n", out_path);
  return 0;
}

json report_json(const gocclab::HidingReport& r) {
  json j;
  j["m"] = r.params.m;
  j["e_bar"] = r.params.e_bar;
  j["delta"] = r.params.delta;
  j["l"] = r.params.l;
  j["seed"] = r.params.seed;
  j["capacity_g"] = r.capacity_g;
  j["capacity_awgn"] = r.capacity_w;
  j["trace_dist_half"] = r.trace_dist_half;
  j["l1_w0_w1"] = mc_json(r.l1_w0_w1);
  j["l1_w0_thermal"] = mc_json(r.l1_w0_thermal);
  j["l1_w1_thermal"] = mc_json(r.l1_w1_thermal);
  j["mean_photons_per_mode"] = {{"r0", r.mean_photons_r0}, {"r1", r.mean_photons_r1}};
  j["energy_flag"] = {{"r0", r.energy_flag_r0}, {"r1", r.energy_flag_r1}};
  j["homodyne_bias"] = mc_json(r.homodyne_bias);
  j["heterodyne_bias"] = mc_json(r.heterodyne_bias);
  j["mc_samples"] = r.mc_samples;
  j["bias_trials"] = r.bias_trials;
  return j;
}

int cmd_hide(int m, double e_bar, double delta, int l_override, const std::string& seeds_csv,
             std::int64_t mc_samples, std::int64_t bias_trials, const std::string& out_path) {
  const auto seeds = parse_seed_list(seeds_csv);
  const int l = l_override > 0 ? l_override : gocclab::choose_l(m, e_bar, delta);

  json out;
  out["command"] = "hide";
  out["schema_version"] = kSchemaVersion;
  out["m"] = m;
  out["e_bar"] = e_bar;
  out["delta"] = delta;
  out["l"] = l;
  out["l_overridden"] = l_override > 0;
  out["mc_samples"] = mc_samples;
  out["bias_trials"] = bias_trials;
  out["seeds"] = seeds;

  std::vector<double> tds, l1s, homs, hets;
  json reports = json::array();
  for (std::uint64_t seed : seeds) {
    gocclab::HidingParams p{m, e_bar, delta, l, seed};
    const auto rep = gocclab::run_hiding_experiment(p, mc_samples, bias_trials);
    tds.push_back(rep.trace_dist_half);
    l1s.push_back(rep.l1_w0_w1.estimate);
    homs.push_back(rep.homodyne_bias.estimate);
    hets.push_back(rep.heterodyne_bias.estimate);
    reports.push_back(report_json(rep));
  }
  out["reports"] = reports;
  out["medians"] = {{"trace_dist_half", median(tds)},
                    {"l1_w0_w1", median(l1s)},
                    {"homodyne_bias", median(homs)},
                    {"heterodyne_bias", median(hets)}};
  emit(out.dump(2) + "\n", out_path);
  return 0;
}

int cmd_bounds(int m, double e_bar, double t, const std::string& out_path) {
  const auto opt = gocclab::optimize_corollary_c(m, e_bar, t);
  const auto at_star = gocclab::corollary_energy_bound(m, e_bar, t, opt.c_star);
  json out;
  out["command"] = "bounds";
  out["schema_version"] = kSchemaVersion;
  out["m"] = m;
  out["e_bar"] = e_bar;
  out["t"] = t;
  out["c_star"] = opt.c_star;
  out["bound_star"] = opt.bound_star;
  out["r"] = at_star.r;
  out["dimension_d"] = at_star.d.str();
  out["pre_relaxation_bound"] = at_star.pre_relaxation;
  emit(out.dump(2) + "\n", out_path);
  return 0;
}

int cmd_protocol(const std::string& file, const std::string& state_spec, std::int64_t trials,
                 std::uint64_t seed, const std::string& out_path) {
  const auto protocol = gocclab::load_protocol(file);
  const auto [r0, r1] = load_state_spec(state_spec);
  const auto pe =
      gocclab::run_protocol_error_prob(protocol, r0, r1, trials, gocclab::RngStream(seed));
  json out;
  out["command"] = "protocol";
  out["schema_version"] = kSchemaVersion;
  out["protocol_file"] = file;
  out["state_spec"] = state_spec;
  out["trials"] = trials;
  out["seed"] = seed;
  out["p_err"] = pe.estimate;
  out["std_err"] = pe.std_err;
  out["achieved_gocc_norm"] =
      pe.estimate <= 0.5 ? json(gocclab::gocc_norm_from_error(pe.estimate)) : json();
  emit(out.dump(2) + "\n", out_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* threads = std::getenv("GOCC_LAB_THREADS")) {
    Eigen::setNbThreads(std::max(1, std::atoi(threads)));
  }

  CLI::App app{"Distinguishability of bosonic states under Gaussian-restricted measurements"};
  app.require_subcommand(1);

  // sweep-coherent
  double alpha_min = 0.0, alpha_max = 2.0;
  int steps = 201;
  std::string sweep_out;
  auto* sweep = app.add_subcommand("sweep-coherent",
                                   "Closed-form sweep of half trace distance vs half GOCC "
                                   "distance for |+a> vs |-a> (CSV)");
  sweep->add_option("--alpha-min", alpha_min, "Lower end of the sweep")->capture_default_str();
  sweep->add_option("--alpha-max", alpha_max, "Upper end of the sweep")->capture_default_str();
  sweep->add_option("--steps", steps, "Number of grid points")->capture_default_str();
  sweep->add_option("--out", sweep_out, "Output CSV path (default stdout)");

  // chernoff
  double ch_alpha = 0.5;
  int ch_cutoff = 25;
  std::int64_t ch_samples = 100000;
  std::uint64_t ch_seed = 1;
  std::string ch_out;
  auto* chern = app.add_subcommand(
      "chernoff", "Quantum vs classical (Wigner) Chernoff exponents for |+a> vs |-a> (JSON)");
  chern->add_option("--alpha", ch_alpha, "Displacement amplitude")->capture_default_str();
  chern->add_option("--cutoff", ch_cutoff, "Fock cutoff n_max")->capture_default_str();
  chern->add_option("--mc-samples", ch_samples, "Monte Carlo samples")->capture_default_str();
  chern->add_option("--seed", ch_seed, "RNG seed")->capture_default_str();
  chern->add_option("--out", ch_out, "Output JSON path (default stdout)");

  // hide
  int h_m = 4, h_l_override = 0;
  double h_e = 1.0, h_delta = 0.05;
  std::string h_seeds = "1,2,3,4,5";
  std::int64_t h_samples = 20000, h_trials = 10000;
  std::string h_out;
  auto* hide = app.add_subcommand("hide", "Random-constellation data hiding experiment (JSON)");
  hide->add_option("--m", h_m, "Number of modes")->capture_default_str();
  hide->add_option("--e-bar", h_e, "Mean photons per mode")->capture_default_str();
  hide->add_option("--delta", h_delta, "Capacity slack")->capture_default_str();
  hide->add_option("--l-override", h_l_override, "Force L instead of the capacity window")
      ->capture_default_str();
  hide->add_option("--seeds", h_seeds, "Comma-separated seed list")->capture_default_str();
  hide->add_option("--mc-samples", h_samples, "Monte Carlo samples per L1 estimate")
      ->capture_default_str();
  hide->add_option("--bias-trials", h_trials, "Trials per achieved-bias estimate")
      ->capture_default_str();
  hide->add_option("--out", h_out, "Output JSON path (default stdout)");

  // bounds
  int b_m = 1;
  double b_e = 1.0, b_t = 2.0;
  std::string b_out;
  auto* bnd = app.add_subcommand("bounds", "Energy-truncated W+ lower bound, optimized over c "
                                           "(JSON)");
  bnd->add_option("--m", b_m, "Number of modes")->capture_default_str();
  bnd->add_option("--e-bar", b_e, "Energy per mode")->capture_default_str();
  bnd->add_option("--t", b_t, "Assumed trace-norm lower bound, in (0,2]")->capture_default_str();
  bnd->add_option("--out", b_out, "Output JSON path (default stdout)");

  // protocol
  std::string p_file, p_state = "pm:0.45", p_out;
  std::int64_t p_trials = 100000;
  std::uint64_t p_seed = 1;
  auto* prot = app.add_subcommand("protocol", "Run a GOCC protocol file on a state pair (JSON)");
  prot->add_option("--file", p_file, "Protocol JSON file")->required();
  prot->add_option("--state", p_state, "State spec: pm:<alpha> or a JSON file")
      ->capture_default_str();
  prot->add_option("--trials", p_trials, "Monte Carlo trials")->capture_default_str();
  prot->add_option("--seed", p_seed, "RNG seed")->capture_default_str();
  prot->add_option("--out", p_out, "Output JSON path (default stdout)");

  try {
    app.parse(argc, argv);
    if (sweep->parsed()) return cmd_sweep_coherent(alpha_min, alpha_max, steps, sweep_out);
    if (chern->parsed()) return cmd_chernoff(ch_alpha, ch_cutoff, ch_samples, ch_seed, ch_out);
    if (hide->parsed())
      return cmd_hide(h_m, h_e, h_delta, h_l_override, h_seeds, h_samples, h_trials, h_out);
    if (bnd->parsed()) return cmd_bounds(b_m, b_e, b_t, b_out);
    if (prot->parsed()) return cmd_protocol(p_file, p_state, p_trials, p_seed, p_out);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const gocclab::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 3;
  } catch (const gocclab::GuardError& e) {
    std::cerr << "numeric guard: " << e.what() << "\n";
    return 4;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
