#include <benchmark/benchmark.h>

#include "gocclab/fock.hpp"
#include "gocclab/gocc.hpp"
#include "gocclab/hiding.hpp"
#include "gocclab/wigner_metrics.hpp"

namespace {

using namespace gocclab;

std::pair<CoherentConstellation, CoherentConstellation> random_pair(int m, int l,
                                                                    std::uint64_t seed) {
  HidingParams p{m, 1.0, 0.05, l, seed};
  Rng rng = RngStream(seed).substream(0);
  return sample_constellations(p, rng);
}

void BM_GramTraceDistance(benchmark::State& state) {
  const int l = static_cast<int>(state.range(0));
  auto [r0, r1] = random_pair(2, l, 7);
  for (auto _ : state) benchmark::DoNotOptimize(trace_distance_gram(r0, r1));
  state.SetComplexityN(2 * l);
}
BENCHMARK(BM_GramTraceDistance)->Arg(32)->Arg(128)->Arg(512)->Complexity();

void BM_L1DistanceMc(benchmark::State& state) {
  const std::int64_t n = state.range(0);
  auto [r0, r1] = random_pair(2, 64, 7);
  const auto w0 = wigner_of_constellation(r0);
  const auto w1 = wigner_of_constellation(r1);
  for (auto _ : state)
    benchmark::DoNotOptimize(l1_distance_mc(w0, w1, n, RngStream(1)));
}
BENCHMARK(BM_L1DistanceMc)->Arg(10000)->Arg(100000);

void BM_ProtocolTrial(benchmark::State& state) {
  CoherentConstellation r0, r1;
  r0.points = {Eigen::VectorXcd::Constant(1, 0.45)};
  r1.points = {Eigen::VectorXcd::Constant(1, -0.45)};
  r0.weights = r1.weights = Eigen::VectorXd::Ones(1);
  GoccProtocol p(1, {Round{0, SymplecticCircuit(1), {}, 1}},
                 DecisionRule::sign_affine({1.0}, 0.0));
  for (auto _ : state)
    benchmark::DoNotOptimize(run_protocol_error_prob(p, r0, r1, 1000, RngStream(1)));
}
BENCHMARK(BM_ProtocolTrial);

void BM_QuantumChernoff(benchmark::State& state) {
  const int cutoff = static_cast<int>(state.range(0));
  CoherentConstellation r0, r1;
  r0.points = {Eigen::VectorXcd::Constant(1, 0.5)};
  r1.points = {Eigen::VectorXcd::Constant(1, -0.5)};
  r0.weights = r1.weights = Eigen::VectorXd::Ones(1);
  const auto rho0 = density_from_constellation(r0, {cutoff});
  const auto rho1 = density_from_constellation(r1, {cutoff});
  for (auto _ : state) benchmark::DoNotOptimize(quantum_chernoff(rho0, rho1));
}
BENCHMARK(BM_QuantumChernoff)->Arg(16)->Arg(32)->Arg(64);

}  // namespace

BENCHMARK_MAIN();
