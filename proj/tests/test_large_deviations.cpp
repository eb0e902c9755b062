#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "ldrisk/error.hpp"
#include "ldrisk/extended.hpp"
#include "ldrisk/families.hpp"
#include "ldrisk/large_deviations.hpp"
#include "ldrisk/maxitive.hpp"
#include "ldrisk/risk_measure.hpp"

using namespace ldrisk;

namespace {

RiskMeasure random_atomic(int k, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unif(0.0, 4.0);
    std::vector<double> gamma(static_cast<size_t>(k));
    for (auto& g : gamma) g = unif(rng);
    gamma[rng() % static_cast<size_t>(k)] = 0.0;
    if (k > 2) gamma[rng() % static_cast<size_t>(k)] = pos_inf;
    return RiskMeasure::atomic(FiniteMetricSpace::discrete(k), gamma);
}

// sub-probability family with log P_n({m}) = -n m^2 on the line {1..10};
// the tail mass beyond any prefix shrinks at an ever faster exponential
// rate, the signature of exponential tightness
DistributionSequence gaussian_tail_family() {
    auto space = FiniteMetricSpace::line({1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
    auto gen = [](int n) {
        LogLaw law;
        long double total = 0.0L;
        for (int m = 1; m <= 10; ++m) {
            double lw = -static_cast<double>(n) * m * m;
            law.log_weights.push_back(lw);
            total += std::exp(static_cast<long double>(lw));
        }
        law.mass_defect = static_cast<double>(1.0L - total);
        return law;
    };
    return DistributionSequence(space, gen, "gaussian_tail");
}

}  // namespace

TEST_CASE("ball rate of an atomic measure recovers the penalty exactly") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 30; ++trial) {
        int k = 2 + static_cast<int>(rng() % 7);
        auto phi = random_atomic(k, rng);
        auto rate = rate_from_balls(phi);
        REQUIRE(rate.size() == k);
        for (int x = 0; x < k; ++x) CHECK(rate.at(x) == phi.atom_penalties()[static_cast<size_t>(x)]);
    }
}

TEST_CASE("duality rate agrees with the ball rate on finite penalties") {
    auto space = FiniteMetricSpace::discrete(3);
    auto phi = RiskMeasure::atomic(space, {0.0, 1.0, 2.0});
    auto corpus = two_level_corpus(space, {0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0}, {-50.0});
    auto dual = rate_from_duality(phi, corpus);
    auto balls = rate_from_balls(phi);
    for (int x = 0; x < 3; ++x) CHECK(dual.at(x) == doctest::Approx(balls.at(x)).epsilon(1e-12));
}

TEST_CASE("rate function minima over subsets") {
    RateFunction rate{{0.0, 1.0, pos_inf}};
    CHECK(rate.min_over(Subset::of(3, {1, 2})) == 1.0);
    CHECK(rate.min_over(Subset::of(3, {2})) == pos_inf);
    CHECK(rate.min_over(Subset(3)) == pos_inf);
    CHECK(rate.min_over(Subset::full(3)) == 0.0);
}

TEST_CASE("exhaustive sandwich check on atomic measures") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 10; ++trial) {
        int k = 2 + static_cast<int>(rng() % 7);
        auto phi = random_atomic(k, rng);
        auto rate = rate_from_balls(phi);
        auto table = ConcentrationTable::from_risk(phi);
        auto verdict = ldp_check(table, rate, phi.space());
        CHECK(verdict.holds);
        CHECK(verdict.subsets_checked == (1L << k));
        CHECK(verdict.worst_lower_excess <= verdict.tolerance);
        CHECK(verdict.worst_upper_excess <= verdict.tolerance);

        // on a discrete space both bounds collapse to equality with -min I
        for (std::uint64_t bits = 0; bits < (std::uint64_t(1) << k); ++bits) {
            auto a = Subset::from_bits(k, bits);
            CHECK(abs_gap(table.at(a), -rate.min_over(a)) == 0.0);
        }
    }
}

TEST_CASE("perturbed rates break the sandwich in both directions") {
    auto space = FiniteMetricSpace::discrete(4);
    auto phi = RiskMeasure::atomic(space, {0.0, 0.5, 1.25, pos_inf});
    auto table = ConcentrationTable::from_risk(phi);
    auto rate = rate_from_balls(phi);

    auto up = rate;
    up.values[1] += 0.1;  // -min I on {x1} drops below J
    auto v_up = ldp_check(table, up, space);
    CHECK_FALSE(v_up.holds);

    auto down = rate;
    down.values[2] -= 0.1;
    auto v_down = ldp_check(table, down, space);
    CHECK_FALSE(v_down.holds);

    // the infinite atom admits no downward perturbation, but raising a
    // finite one by 0.1 must always be caught
    auto v_ok = ldp_check(table, rate, space);
    CHECK(v_ok.holds);
}

TEST_CASE("laplace values are pinned") {
    RateFunction rate{{0.0, 1.0, pos_inf}};
    CHECK(lp_value(BoundedFunction({1.0, 3.0, 100.0}), rate) == 2.0);
    CHECK(lp_value(BoundedFunction({-1.0, -1.0, -1.0}), rate) == -1.0);
    RateFunction all_inf{{pos_inf, pos_inf}};
    CHECK(lp_value(BoundedFunction({5.0, 5.0}), all_inf) == neg_inf);
}

TEST_CASE("laplace principle holds for atomic and fails for entropic") {
    std::mt19937_64 rng(31);
    auto phi = random_atomic(5, rng);
    auto rate = rate_from_balls(phi);
    auto verdict = lp_check(phi, rate, 300, 5, 1e-12);
    CHECK(verdict.holds);
    CHECK(verdict.worst_gap <= 1e-12);

    auto coin = RiskMeasure::entropic(FiniteMetricSpace::discrete(2),
                                      ProbabilityVector::uniform(2), 1);
    auto coin_rate = rate_from_balls(coin);  // log 2 at both points
    CHECK(coin_rate.at(0) == doctest::Approx(std::log(2.0)).epsilon(1e-10));
    auto bad = lp_check(coin, coin_rate, 300, 5, 1e-9);
    CHECK_FALSE(bad.holds);
    CHECK(bad.worst_gap > 0.1);
    REQUIRE(bad.witness_f.size() == 2);
    double lp = lp_value(BoundedFunction(bad.witness_f), coin_rate);
    CHECK(std::fabs(coin(BoundedFunction(bad.witness_f)) - lp) ==
          doctest::Approx(bad.worst_gap).epsilon(1e-12));
}

TEST_CASE("equivalence report on atomic measures") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 8; ++trial) {
        int k = 2 + static_cast<int>(rng() % 5);
        auto phi = random_atomic(k, rng);
        EquivalenceOptions opts;
        opts.tol = 1e-12;
        auto rep = varadhan_bryc_equivalence(phi, opts);
        CHECK(rep.holds);
        CHECK(rep.ldp.holds);
        CHECK(rep.lp.holds);
        CHECK(rep.uniqueness_ok);
        int finite_points = 0;
        for (double g : phi.atom_penalties())
            if (is_finite(g)) ++finite_points;
        // every finite-rate point admits at least the upward perturbation
        CHECK(rep.perturbations_tested >= finite_points);
        REQUIRE(rep.rate.size() == k);
        for (int x = 0; x < k; ++x)
            CHECK(rep.rate.at(x) == phi.atom_penalties()[static_cast<size_t>(x)]);
    }
}

TEST_CASE("equivalence rejects non-max-stable input") {
    auto coin = RiskMeasure::entropic(FiniteMetricSpace::discrete(2),
                                      ProbabilityVector::uniform(2), 1);
    try {
        varadhan_bryc_equivalence(coin);
        FAIL("expected NotMaxStable");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::not_max_stable);
    }
}

TEST_CASE("tightness evidence: gaussian tails grow without bound") {
    auto family = gaussian_tail_family();
    std::vector<Subset> candidates;
    for (int j = 1; j <= 9; ++j) {
        Subset s(10);
        for (int i = 0; i < j; ++i) s.add(i);
        candidates.push_back(s);
    }
    auto report = tightness_check(family, candidates, {8, 16, 32, 64});
    CHECK(report.evidence == TightnessEvidence::condition_a);
    // -J of the first complement is about (j+1)^2 = 4
    CHECK(report.neg_j_complement.front() == doctest::Approx(4.0).epsilon(1e-6));
    CHECK(report.neg_j_complement.back() == doctest::Approx(100.0).epsilon(1e-6));
}

TEST_CASE("tightness evidence: cycling masses level off") {
    auto family = counterexample_rationals(16);
    std::vector<Subset> candidates;
    for (int j = 1; j <= 12; ++j) {
        Subset s(16);
        for (int i = 0; i < j; ++i) s.add(i);
        candidates.push_back(s);
    }
    std::vector<int> horizons;
    for (int n = 1; n <= 16; ++n) horizons.push_back(n);
    TightnessOptions opts;
    opts.tail_window = 16;
    auto report = tightness_check(family, candidates, horizons, opts);
    CHECK(report.evidence == TightnessEvidence::condition_b);
    CHECK(report.i_infinity == 0.0);
}

TEST_CASE("tightness evidence: escaping diagonal mass supports neither condition") {
    auto family = counterexample_naturals(16);
    std::vector<Subset> candidates;
    for (int j = 1; j <= 8; ++j) {
        Subset s(16);
        for (int i = 0; i < j; ++i) s.add(i);
        candidates.push_back(s);
    }
    std::vector<int> horizons;
    for (int n = 1; n <= 16; ++n) horizons.push_back(n);
    TightnessOptions opts;
    opts.tail_window = 16;
    auto report = tightness_check(family, candidates, horizons, opts);
    // tails look level (the diagonal keeps escaping), but the ball rate at
    // small points exceeds the level, so neither condition is supported
    CHECK(report.evidence == TightnessEvidence::neither);
}

TEST_CASE("pair sandwich: identical pair is consistent") {
    auto space = FiniteMetricSpace::discrete(3);
    auto phi = RiskMeasure::atomic(space, {0.0, 1.0, 2.0});
    auto rate = rate_from_balls(phi);
    auto rep = pair_sandwich_check(phi, phi, rate, all_subsets(3));
    CHECK(rep.sandwich_holds);
    CHECK(rep.lp_side_holds);
    CHECK(rep.consistent);
    CHECK(rep.subsets_checked == 8);
}

TEST_CASE("pair sandwich: a genuinely wider pair fails both sides coherently") {
    auto space = FiniteMetricSpace::discrete(3);
    auto up = RiskMeasure::atomic(space, {0.0, 1.0, 2.0});
    auto lo = RiskMeasure::atomic(space, {0.0, 2.0, 4.0});  // larger penalties => smaller phi
    auto rate = rate_from_balls(up);
    auto rep = pair_sandwich_check(up, lo, rate, all_subsets(3));
    CHECK_FALSE(rep.sandwich_holds);
    CHECK_FALSE(rep.lp_side_holds);
    CHECK(rep.consistent);  // both sides of the equivalence agree on failure
    CHECK(rep.worst_agreement_gap > 0.5);
}

TEST_CASE("pair sandwich rejects a misordered pair") {
    auto space = FiniteMetricSpace::discrete(3);
    auto up = RiskMeasure::atomic(space, {0.0, 1.0, 2.0});
    auto lo = RiskMeasure::atomic(space, {0.0, 2.0, 4.0});
    try {
        pair_sandwich_check(lo, up, rate_from_balls(up), all_subsets(3));
        FAIL("expected OrderViolation");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::order_violation);
    }
}

TEST_CASE("local class report on an atomic measure") {
    auto space = FiniteMetricSpace::discrete(4);
    auto phi = RiskMeasure::atomic(space, {0.0, 0.5, 1.25, 2.0});
    auto k_set = Subset::of(4, {1, 3});
    auto rep = local_max_stability_report(phi, k_set, 200, 3);
    CHECK(rep.pass);
    CHECK(rep.stability.pass);
    REQUIRE(rep.rate_on_k.size() == 2);
    CHECK(rep.rate_on_k[0] == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(rep.rate_on_k[1] == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(rep.j_complement == 0.0);  // the complement contains the zero atom
    CHECK_THROWS_AS(local_max_stability_report(phi, Subset(4), 10), Error);
    CHECK_THROWS_AS(local_max_stability_report(phi, Subset::full(4), 10), Error);
}

TEST_CASE("subset enumeration") {
    CHECK(all_subsets(3).size() == 8);
    CHECK(all_subsets(0).size() == 1);
    CHECK_THROWS_AS(all_subsets(16), Error);
}
