#pragma once

#include <cstdint>
#include <utility>

#include "gocclab/gaussian.hpp"
#include "gocclab/wigner_metrics.hpp"

namespace gocclab {

struct HidingParams {
  int m = 1;
  double e_bar = 1.0;   // mean photons per mode
  double delta = 0.05;  // capacity slack
  int l = 1;            // codewords per state
  std::uint64_t seed = 1;
};

// g(E) = (E+1) ln(E+1) - E ln E: capacity of the noiseless bosonic channel.
double capacity_noiseless(double e_bar);

// (1/2) ln(1 + 2E): AWGN capacity of the Wigner response channel.
double capacity_awgn(double e_bar);

// Geometric midpoint of the admissible window
// exp(2m(C_W + delta)) <= 2L <= exp(m(g - delta)); throws GuardError when
// the window is empty or rounds below 1.
int choose_l(int m, double e_bar, double delta);

// 2L i.i.d. m-mode points with E|alpha_j|^2 = E_bar; points with even
// 1-based index go to r0, odd to r1, uniform weights 1/L.
std::pair<CoherentConstellation, CoherentConstellation> sample_constellations(
    const HidingParams& p, Rng& rng);

struct HidingReport {
  HidingParams params;
  double capacity_g = 0.0;
  double capacity_w = 0.0;
  double trace_dist_half = 0.0;
  McEstimate l1_w0_w1{};
  McEstimate l1_w0_thermal{};
  McEstimate l1_w1_thermal{};
  double mean_photons_r0 = 0.0;
  double mean_photons_r1 = 0.0;
  bool energy_flag_r0 = false;  // empirical photons/mode above E_bar + 3 sqrt(E_bar/(L m))
  bool energy_flag_r1 = false;
  McEstimate homodyne_bias{};   // 2(1-2p_err) for homodyne-all-modes + likelihood ratio
  McEstimate heterodyne_bias{}; // same for heterodyne + likelihood ratio
  std::int64_t mc_samples = 0;
  std::int64_t bias_trials = 0;
};

// Achieved GOCC biases of two concrete strategies: x-homodyne of every
// mode, or heterodyne of every mode, each followed by a likelihood-ratio
// decision between the two outcome densities.
McEstimate homodyne_map_bias(const CoherentConstellation& r0, const CoherentConstellation& r1,
                             std::int64_t n_trials, const RngStream& stream);
McEstimate heterodyne_map_bias(const CoherentConstellation& r0, const CoherentConstellation& r1,
                               std::int64_t n_trials, const RngStream& stream);

// Full desk-scale experiment on explicitly given constellations.
HidingReport compute_hiding_report(const CoherentConstellation& r0,
                                   const CoherentConstellation& r1, const HidingParams& p,
                                   std::int64_t mc_samples, std::int64_t bias_trials);

// Samples the random constellations from p.seed and runs the experiment.
HidingReport run_hiding_experiment(const HidingParams& p, std::int64_t mc_samples,
                                   std::int64_t bias_trials);

}  // namespace gocclab
