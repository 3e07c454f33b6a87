#include <benchmark/benchmark.h>

#include "ecd/channel.hpp"
#include "ecd/random.hpp"
#include "ecd/sdp.hpp"

using namespace ecd;

namespace {

void BM_EigHermitian(benchmark::State& state) {
  Rng rng(7);
  HermitianMatrix h = rng.hermitian(state.range(0));
  for (auto _ : state) {
    auto es = eig_hermitian(h);
    benchmark::DoNotOptimize(es.values.data());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_EigHermitian)->RangeMultiplier(2)->Range(8, 128)->Complexity();

void BM_PsdProject(benchmark::State& state) {
  Rng rng(11);
  HermitianMatrix h = rng.hermitian(state.range(0));
  for (auto _ : state) {
    auto p = psd_project(h);
    benchmark::DoNotOptimize(p.mat().data().data());
  }
}
BENCHMARK(BM_PsdProject)->Arg(16)->Arg(64);

void BM_TraceNorm(benchmark::State& state) {
  Rng rng(13);
  ComplexMatrix m = rng.gaussian_matrix(state.range(0), state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(trace_norm(m));
}
BENCHMARK(BM_TraceNorm)->Arg(9)->Arg(32);

void BM_AttenuatorAssemble(benchmark::State& state) {
  const std::size_t d = state.range(0);
  const Hamiltonian h = Hamiltonian::number_operator(d);
  auto delta = HermitianPreservingMap::difference(Channel::attenuator(0.9, d),
                                                  Channel::attenuator(0.6, d));
  for (auto _ : state) {
    auto prob = assemble(delta, h, 4.0);
    benchmark::DoNotOptimize(prob.blocks.size());
  }
}
BENCHMARK(BM_AttenuatorAssemble)->Arg(16)->Arg(32);

void BM_SolveQubitFlip(benchmark::State& state) {
  const Hamiltonian h = Hamiltonian::qubit();
  auto delta = HermitianPreservingMap::difference(Channel::unitary_evolution(h, 1.1),
                                                  Channel::identity(2));
  auto prob = assemble(delta, h, 0.5);
  for (auto _ : state) {
    auto cert = solve(prob);
    benchmark::DoNotOptimize(cert.norm_upper);
  }
}
BENCHMARK(BM_SolveQubitFlip);

void BM_SolveAttenuatorBlock(benchmark::State& state) {
  const std::size_t d = state.range(0);
  const Hamiltonian h = Hamiltonian::number_operator(d);
  auto prob = assemble(HermitianPreservingMap::difference(Channel::attenuator(0.9, d),
                                                          Channel::attenuator(0.6, d)),
                       h, 2.0);
  SolveOptions opts;
  opts.max_iterations = 200;
  opts.certify_every = 100;
  opts.polish_steps = 10;
  for (auto _ : state) {
    auto cert = solve(prob, opts);
    benchmark::DoNotOptimize(cert.norm_lower);
  }
}
BENCHMARK(BM_SolveAttenuatorBlock)->Arg(8)->Arg(16);

}  // namespace

BENCHMARK_MAIN();
