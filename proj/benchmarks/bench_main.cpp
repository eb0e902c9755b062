#include <benchmark/benchmark.h>

#include <random>

#include "ldrisk/cramer.hpp"
#include "ldrisk/families.hpp"
#include "ldrisk/large_deviations.hpp"
#include "ldrisk/maxitive.hpp"
#include "ldrisk/risk_measure.hpp"
#include "ldrisk/shortfall.hpp"

using namespace ldrisk;

namespace {

MaxStablePenalty random_penalty(int k, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(-4.0, 0.0);
    std::vector<double> atoms(static_cast<size_t>(k));
    for (auto& a : atoms) a = unif(rng);
    atoms[rng() % static_cast<size_t>(k)] = 0.0;
    return MaxStablePenalty(std::move(atoms));
}

void bm_maxitive_integral(benchmark::State& state) {
    const int k = static_cast<int>(state.range(0));
    auto mu = random_penalty(k, 11);
    std::mt19937_64 rng(5);
    auto f = random_function(k, rng);
    for (auto _ : state) benchmark::DoNotOptimize(maxitive_integral(f, mu));
    state.SetItemsProcessed(state.iterations() * k);
}

void bm_maxitive_integral_levels(benchmark::State& state) {
    const int k = static_cast<int>(state.range(0));
    auto mu = random_penalty(k, 11);
    std::mt19937_64 rng(5);
    auto f = random_function(k, rng);
    auto set_value = [&mu](const Subset& a) { return mu.of(a); };
    for (auto _ : state) benchmark::DoNotOptimize(maxitive_integral_levels(f, set_value));
    state.SetItemsProcessed(state.iterations() * k);
}

void bm_concentration_table(benchmark::State& state) {
    const int k = static_cast<int>(state.range(0));
    auto mu = random_penalty(k, 17);
    auto phi = risk_from_penalty(FiniteMetricSpace::discrete(k), mu);
    for (auto _ : state) benchmark::DoNotOptimize(ConcentrationTable::from_risk(phi));
    state.SetItemsProcessed(state.iterations() * (int64_t{1} << k));
}

void bm_shortfall_bisection(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    DiscreteLogLaw law{{0.0, 0.3, 1.0, 2.5},
                       {std::log(0.4), std::log(0.3), std::log(0.2), std::log(0.1)}};
    auto loss = LossExponent::power(2.0);
    for (auto _ : state) benchmark::DoNotOptimize(shortfall_risk(law, loss, n));
}

void bm_sample_mean_pmf(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    auto law = DiscreteRealLaw::bernoulli(0.5);
    std::vector<int> hs{n};
    for (auto _ : state) benchmark::DoNotOptimize(sample_mean_pmfs(law, hs));
    state.SetItemsProcessed(state.iterations() * n);
}

void bm_ldp_exhaustive(benchmark::State& state) {
    const int k = static_cast<int>(state.range(0));
    auto mu = random_penalty(k, 23);
    auto space = FiniteMetricSpace::discrete(k);
    auto phi = risk_from_penalty(space, mu);
    auto rate = rate_from_balls(phi);
    auto table = ConcentrationTable::from_risk(phi);
    for (auto _ : state) benchmark::DoNotOptimize(ldp_check(table, rate, space));
}

}  // namespace

BENCHMARK(bm_maxitive_integral)->Arg(8)->Arg(64)->Arg(512);
BENCHMARK(bm_maxitive_integral_levels)->Arg(8)->Arg(64)->Arg(512);
BENCHMARK(bm_concentration_table)->Arg(6)->Arg(10)->Arg(14);
BENCHMARK(bm_shortfall_bisection)->Arg(1)->Arg(16)->Arg(1024);
BENCHMARK(bm_sample_mean_pmf)->Arg(64)->Arg(1024)->Arg(4096);
BENCHMARK(bm_ldp_exhaustive)->Arg(6)->Arg(10);

BENCHMARK_MAIN();
