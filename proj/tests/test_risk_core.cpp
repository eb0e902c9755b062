#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "ldrisk/error.hpp"
#include "ldrisk/extended.hpp"
#include "ldrisk/loss.hpp"
#include "ldrisk/risk_measure.hpp"

using namespace ldrisk;

namespace {

// independent route: direct max over points, no shift normalization
double atomic_oracle(const std::vector<double>& gamma, const BoundedFunction& f) {
    double g_min = pos_inf;
    for (double g : gamma) g_min = std::min(g_min, g);
    double best = neg_inf;
    for (int i = 0; i < f.size(); ++i)
        best = std::max(best, add_penalty(f[i], -(gamma[static_cast<size_t>(i)] - g_min)));
    return best;
}

// independent route: long-double direct sum, no log-sum-exp
double entropic_oracle(const std::vector<double>& law, int n, const BoundedFunction& f) {
    long double acc = 0.0L;
    for (int i = 0; i < f.size(); ++i)
        acc += static_cast<long double>(law[static_cast<size_t>(i)]) *
               std::exp(static_cast<long double>(n) * f[i]);
    return static_cast<double>(std::log(acc) / n);
}

}  // namespace

TEST_CASE("atomic measures match the direct maximum") {
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> unif(0.0, 6.0);
    for (int trial = 0; trial < 60; ++trial) {
        int k = 2 + static_cast<int>(rng() % 7);
        std::vector<double> gamma(static_cast<size_t>(k));
        for (auto& g : gamma) g = unif(rng);
        if (trial % 3 == 0) gamma[rng() % static_cast<size_t>(k)] = pos_inf;
        auto phi = RiskMeasure::atomic(FiniteMetricSpace::discrete(k), gamma);
        CHECK(phi.kind() == RiskMeasure::Kind::atomic);

        // construction shifts gamma so that min gamma = 0
        double lo = pos_inf;
        for (double g : phi.atom_penalties()) lo = std::min(lo, g);
        CHECK(lo == 0.0);

        for (int t = 0; t < 50; ++t) {
            auto f = random_function(k, rng);
            CHECK(phi(f) == doctest::Approx(atomic_oracle(gamma, f)).epsilon(1e-15));
        }
        CHECK(phi(BoundedFunction::constant(k, 0.0)) == 0.0);
    }
}

TEST_CASE("atomic rejects bad penalties and normalizes shifted ones") {
    auto space = FiniteMetricSpace::discrete(2);
    CHECK_THROWS_AS(RiskMeasure::atomic(space, {pos_inf, pos_inf}), Error);
    CHECK_THROWS_AS(RiskMeasure::atomic(space, {0.0}), Error);
    CHECK_THROWS_AS(RiskMeasure::atomic(space, {0.0, neg_inf}), Error);
    CHECK_THROWS_AS(RiskMeasure::atomic(space, {0.0, std::nan("")}), Error);

    // finite but shifted gammas are accepted and renormalized to min 0,
    // since normalization pins the whole profile anyway
    auto shifted = RiskMeasure::atomic(space, {0.0, -1.0});
    auto canonical = RiskMeasure::atomic(space, {1.0, 0.0});
    CHECK(shifted.atom_penalties() == canonical.atom_penalties());
    BoundedFunction probe({0.3, -2.0});
    CHECK(shifted(probe) == canonical(probe));
}

TEST_CASE("entropic measures match a long-double sum") {
    std::mt19937_64 rng(202);
    for (int trial = 0; trial < 40; ++trial) {
        int k = 2 + static_cast<int>(rng() % 5);
        std::vector<double> w(static_cast<size_t>(k));
        double s = 0.0;
        for (auto& x : w) {
            x = 0.05 + static_cast<double>(rng() % 1000) / 1000.0;
            s += x;
        }
        for (auto& x : w) x /= s;
        int n = 1 << (rng() % 5);
        auto phi = RiskMeasure::entropic(FiniteMetricSpace::discrete(k), ProbabilityVector(w), n);
        CHECK(phi.horizon() == n);
        for (int t = 0; t < 30; ++t) {
            auto f = random_function(k, rng, 3.0);
            CHECK(phi(f) == doctest::Approx(entropic_oracle(w, n, f)).epsilon(1e-12));
        }
    }
}

TEST_CASE("fair coin entropic value is pinned") {
    auto phi = RiskMeasure::entropic(FiniteMetricSpace::discrete(2),
                                     ProbabilityVector::uniform(2), 1);
    // log((1 + e)/2), 20 digits computed with extended precision
    const double expected = 0.62011450695827752463;
    CHECK(phi(BoundedFunction({1.0, 0.0})) == doctest::Approx(expected).epsilon(1e-15));
    CHECK(phi(BoundedFunction({0.0, 1.0})) == doctest::Approx(expected).epsilon(1e-15));
    CHECK(phi(BoundedFunction({1.0, 1.0})) == doctest::Approx(1.0).epsilon(1e-15));

    // the canonical max-stability failure: the pointwise max of the two
    // indicator-like positions costs 1, the max of the individual values
    // only 0.6201...
    auto f = BoundedFunction({1.0, 0.0});
    auto g = BoundedFunction({0.0, 1.0});
    double lhs = phi(pointwise_max(f, g));
    double rhs = std::max(phi(f), phi(g));
    CHECK(lhs - rhs == doctest::Approx(0.37988549304172247537).epsilon(1e-12));
}

TEST_CASE("monetary axioms hold across kinds") {
    auto space = FiniteMetricSpace::discrete(4);
    std::vector<RiskMeasure> measures;
    measures.push_back(RiskMeasure::atomic(space, {0.0, 0.5, 1.25, pos_inf}));
    measures.push_back(RiskMeasure::entropic(space, ProbabilityVector::uniform(4), 2));
    measures.push_back(RiskMeasure::robust_entropic(
        space, {ProbabilityVector::uniform(4), ProbabilityVector({0.7, 0.1, 0.1, 0.1})}, 3));
    measures.push_back(RiskMeasure::shortfall(space, ProbabilityVector::uniform(4),
                                              LossExponent::power(2.0), 2));
    for (const auto& phi : measures) {
        auto rep = check_monetary_axioms(phi, 100, 5);
        CAPTURE(phi.kind_name());
        CAPTURE(rep.detail);
        CHECK(rep.pass);
        CHECK(rep.worst_gap <= rep.tolerance);
    }
}

TEST_CASE("max-stability verdicts split atomic from entropic") {
    auto space = FiniteMetricSpace::discrete(3);
    auto atom = RiskMeasure::atomic(space, {0.0, 1.0, 2.0});
    auto rep = check_max_stability(atom, 300, 9);
    CHECK(rep.pass);
    CHECK(rep.worst_gap <= 1e-12);

    auto coin = RiskMeasure::entropic(FiniteMetricSpace::discrete(2),
                                      ProbabilityVector::uniform(2), 1);
    auto bad = check_max_stability(coin, 1000, 1);
    CHECK_FALSE(bad.pass);
    CHECK(bad.worst_gap >= 0.3);
    // witnesses reproduce the reported violation
    BoundedFunction wf(bad.witness_f), wg(bad.witness_g);
    double again = coin(pointwise_max(wf, wg)) - std::max(coin(wf), coin(wg));
    CHECK(again == doctest::Approx(bad.worst_gap).epsilon(1e-12));
}

TEST_CASE("convexity holds where the loss is convex") {
    // power losses are concave on one side of zero, so only the entropic
    // and linear-shortfall measures are asserted convex
    auto space = FiniteMetricSpace::discrete(3);
    auto ent = RiskMeasure::entropic(space, ProbabilityVector({0.2, 0.5, 0.3}), 4);
    CHECK(check_convexity(ent, 200, 3).pass);
    auto sf = RiskMeasure::shortfall(space, ProbabilityVector({0.2, 0.5, 0.3}),
                                     LossExponent::linear(), 2);
    CHECK(check_convexity(sf, 100, 3).pass);
}

TEST_CASE("robust entropic is the max over the family") {
    auto space = FiniteMetricSpace::discrete(3);
    std::vector<ProbabilityVector> laws{ProbabilityVector({0.6, 0.2, 0.2}),
                                        ProbabilityVector({0.1, 0.1, 0.8})};
    auto phi = RiskMeasure::robust_entropic(space, laws, 2);
    std::mt19937_64 rng(77);
    for (int t = 0; t < 50; ++t) {
        auto f = random_function(3, rng);
        double expect = std::max(entropic_oracle({0.6, 0.2, 0.2}, 2, f),
                                 entropic_oracle({0.1, 0.1, 0.8}, 2, f));
        CHECK(phi(f) == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("shortfall measure agrees with the scalar shortfall of the pushforward") {
    auto space = FiniteMetricSpace::discrete(3);
    ProbabilityVector law({0.2, 0.5, 0.3});
    auto loss = LossExponent::power(2.0);
    auto phi = RiskMeasure::shortfall(space, law, loss, 4);
    CHECK(phi.horizon() == 4);
    std::mt19937_64 rng(31);
    for (int t = 0; t < 20; ++t) {
        auto f = random_function(3, rng);
        DiscreteLogLaw push{std::vector<double>(f.values().begin(), f.values().end()),
                            law.log_weights()};
        CHECK(phi(f) == shortfall_risk(push, loss, 4));
    }
}

TEST_CASE("linear shortfall coincides with the entropic measure") {
    auto space = FiniteMetricSpace::discrete(4);
    ProbabilityVector law({0.4, 0.3, 0.2, 0.1});
    for (int n : {1, 4, 16}) {
        auto sf = RiskMeasure::shortfall(space, law, LossExponent::linear(), n);
        std::mt19937_64 rng(static_cast<std::uint64_t>(n));
        for (int t = 0; t < 25; ++t) {
            auto f = random_function(4, rng, 3.0);
            CHECK(sf(f) ==
                  doctest::Approx(entropic_oracle({0.4, 0.3, 0.2, 0.1}, n, f)).epsilon(1e-8));
        }
    }
}

TEST_CASE("custom measures are normalization-checked once") {
    auto space = FiniteMetricSpace::discrete(2);
    CHECK_THROWS_AS(RiskMeasure::custom(
                        space, [](const BoundedFunction& f) { return f[0] + 1.0; }, "off_by_one"),
                    Error);
    auto ok = RiskMeasure::custom(
        space, [](const BoundedFunction& f) { return std::max(f[0], f[1]); }, "plain_max");
    CHECK(ok.kind() == RiskMeasure::Kind::custom);
    CHECK(ok.kind_name() == "plain_max");
    CHECK(ok(BoundedFunction({2.0, -1.0})) == 2.0);
    CHECK(ok.accepts(BoundedFunction({-1.0, -0.5})));
    CHECK_FALSE(ok.accepts(BoundedFunction({0.5, -0.5})));
}

TEST_CASE("kind guards") {
    auto space = FiniteMetricSpace::discrete(2);
    auto atom = RiskMeasure::atomic(space, {0.0, 1.0});
    CHECK_THROWS_AS(atom.horizon(), Error);
    auto ent = RiskMeasure::entropic(space, ProbabilityVector::uniform(2), 3);
    CHECK_THROWS_AS(ent.atom_penalties(), Error);
    CHECK_THROWS_AS(atom(BoundedFunction({1.0, 2.0, 3.0})), Error);
    CHECK(atom.default_tolerance() == 1e-12);
    CHECK(ent.default_tolerance() == 1e-9);
}

TEST_CASE("random test functions are deterministic and bounded") {
    std::mt19937_64 a(5), b(5);
    auto f = random_function(6, a, 2.5);
    auto g = random_function(6, b, 2.5);
    CHECK(f == g);
    for (int i = 0; i < f.size(); ++i) CHECK(std::fabs(f[i]) <= 2.5);
}
