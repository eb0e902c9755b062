#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <vector>

#include "doctest.h"
#include "ldrisk/cramer.hpp"
#include "ldrisk/error.hpp"
#include "ldrisk/extended.hpp"

using namespace ldrisk;

namespace {

double binomial_log_pmf(int n, int j, double p) {
    return std::lgamma(n + 1.0) - std::lgamma(j + 1.0) - std::lgamma(n - j + 1.0) +
           j * std::log(p) + (n - j) * std::log1p(-p);
}

}  // namespace

TEST_CASE("law construction sorts, merges and drops") {
    DiscreteRealLaw law({1.0, 0.0, 1.0}, {0.25, 0.5, 0.25});
    CHECK(law.size() == 2);
    CHECK(law.value(0) == 0.0);
    CHECK(law.value(1) == 1.0);
    CHECK(law.prob(0) == 0.5);
    CHECK(law.prob(1) == 0.5);

    DiscreteRealLaw dropped({0.0, 5.0, 1.0}, {0.5, 0.0, 0.5});
    CHECK(dropped.size() == 2);
    CHECK(dropped.max_value() == 1.0);
    CHECK(dropped.lattice_spacing() == 1.0);

    CHECK_THROWS_AS(DiscreteRealLaw({0.0, 1.0}, {0.6, 0.6}), Error);
    CHECK_THROWS_AS(DiscreteRealLaw({0.0, 1.0}, {1.5, -0.5}), Error);
    CHECK_THROWS_AS(DiscreteRealLaw({}, {}), Error);
}

TEST_CASE("lattice detection") {
    DiscreteRealLaw shifted({-1.0, 1.0}, {0.5, 0.5});
    CHECK(shifted.lattice_origin() == -1.0);
    CHECK(shifted.lattice_spacing() == 2.0);
    CHECK(shifted.lattice_steps() == std::vector<int>{0, 1});

    DiscreteRealLaw gappy({0.0, 2.0, 6.0}, {0.5, 0.25, 0.25});
    CHECK(gappy.lattice_spacing() == 2.0);
    CHECK(gappy.lattice_steps() == std::vector<int>{0, 1, 3});

    DiscreteRealLaw mixed({0.0, 2.0, 3.0}, {0.5, 0.25, 0.25});
    CHECK(mixed.lattice_spacing() == 1.0);
    CHECK(mixed.lattice_steps() == std::vector<int>{0, 2, 3});

    CHECK_THROWS_AS(DiscreteRealLaw({0.0, 1.0, std::sqrt(2.0)}, {0.4, 0.3, 0.3}), Error);
}

TEST_CASE("bernoulli factory and moments") {
    auto b = DiscreteRealLaw::bernoulli(0.3);
    CHECK(b.size() == 2);
    CHECK(b.prob(1) == 0.3);
    CHECK(b.mean() == doctest::Approx(0.3).epsilon(1e-15));
    CHECK_FALSE(b.degenerate());

    CHECK(DiscreteRealLaw::bernoulli(0.0).degenerate());
    CHECK(DiscreteRealLaw::bernoulli(1.0).degenerate());
    CHECK(DiscreteRealLaw::bernoulli(1.0).min_value() == 1.0);
    CHECK_THROWS_AS(DiscreteRealLaw::bernoulli(-0.1), Error);
    CHECK_THROWS_AS(DiscreteRealLaw::bernoulli(1.1), Error);
}

TEST_CASE("cumulant generating function") {
    auto law = DiscreteRealLaw({0.0, 1.0}, {0.3, 0.7});
    for (double y : {-3.0, -0.5, 0.0, 1.0, 4.0})
        CHECK(log_mgf(law, y) ==
              doctest::Approx(std::log(0.3 + 0.7 * std::exp(y))).epsilon(1e-14));
    CHECK(log_mgf(law, 0.0) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("legendre transform of the fair bit is pinned") {
    auto law = DiscreteRealLaw::bernoulli(0.5);
    // log 2 + x log x + (1-x) log(1-x) at x = 1/4, 20 digits
    CHECK(legendre_transform(law, 0.25) ==
          doctest::Approx(0.13081203594113695913).epsilon(1e-9));
    CHECK(legendre_transform(law, 0.75) ==
          doctest::Approx(0.13081203594113695913).epsilon(1e-9));
    CHECK(legendre_transform(law, 0.5) == doctest::Approx(0.0).epsilon(1e-10));
    // boundary points carry the exact point masses
    CHECK(legendre_transform(law, 0.0) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(legendre_transform(law, 1.0) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(legendre_transform(law, -0.01) == pos_inf);
    CHECK(legendre_transform(law, 1.01) == pos_inf);
}

TEST_CASE("legendre transform of an asymmetric law is pinned") {
    auto law = DiscreteRealLaw({0.0, 1.0}, {0.3, 0.7});
    CHECK(legendre_transform(law, 0.5) ==
          doctest::Approx(0.08717669357238887635).epsilon(1e-9));
    CHECK(legendre_transform(law, 0.25) ==
          doctest::Approx(0.42981319461032673891).epsilon(1e-9));
    CHECK(legendre_transform(law, 0.7) == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("legendre transform of a degenerate law is an indicator") {
    DiscreteRealLaw one({3.0}, {1.0});
    CHECK(one.degenerate());
    CHECK(legendre_transform(one, 3.0) == 0.0);
    CHECK(legendre_transform(one, 2.9) == pos_inf);
    CHECK(legendre_transform(one, 3.1) == pos_inf);
}

TEST_CASE("convolution matches hand-computed binomial tables") {
    auto law = DiscreteRealLaw::bernoulli(0.3);
    auto pmfs = sample_mean_pmfs(law, {2, 3, 16});
    REQUIRE(pmfs.size() == 3);

    const auto& two = pmfs[0];
    CHECK(two.n == 2);
    REQUIRE(two.logpmf.size() == 3);
    CHECK(two.logpmf[0] == doctest::Approx(std::log(0.49)).epsilon(1e-14));
    CHECK(two.logpmf[1] == doctest::Approx(std::log(0.42)).epsilon(1e-14));
    CHECK(two.logpmf[2] == doctest::Approx(std::log(0.09)).epsilon(1e-14));

    const auto& three = pmfs[1];
    REQUIRE(three.logpmf.size() == 4);
    CHECK(three.logpmf[0] == doctest::Approx(std::log(0.343)).epsilon(1e-13));
    CHECK(three.logpmf[1] == doctest::Approx(std::log(0.441)).epsilon(1e-13));
    CHECK(three.logpmf[2] == doctest::Approx(std::log(0.189)).epsilon(1e-13));
    CHECK(three.logpmf[3] == doctest::Approx(std::log(0.027)).epsilon(1e-13));

    const auto& sixteen = pmfs[2];
    REQUIRE(sixteen.logpmf.size() == 17);
    for (int j = 0; j <= 16; ++j)
        CHECK(sixteen.logpmf[static_cast<size_t>(j)] ==
              doctest::Approx(binomial_log_pmf(16, j, 0.3)).epsilon(1e-11));
}

TEST_CASE("sample mean lattice bookkeeping on a shifted law") {
    auto law = DiscreteRealLaw({-1.0, 1.0}, {0.5, 0.5});
    auto pmfs = sample_mean_pmfs(law, {4});
    REQUIRE(pmfs.size() == 1);
    const auto& pmf = pmfs[0];
    CHECK(pmf.n == 4);
    REQUIRE(pmf.logpmf.size() == 5);
    CHECK(pmf.mean_at(0) == -1.0);
    CHECK(pmf.mean_at(2) == 0.0);
    CHECK(pmf.mean_at(4) == 1.0);
    // binomial(4, 1/2) over the steps
    CHECK(pmf.logpmf[2] == doctest::Approx(std::log(0.375)).epsilon(1e-14));
}

TEST_CASE("ball probabilities use open intervals") {
    auto pmfs = sample_mean_pmfs(DiscreteRealLaw::bernoulli(0.5), {2});
    const auto& pmf = pmfs[0];
    // means 0, 1/2, 1 with probs 1/4, 1/2, 1/4; radius exactly 1/2 excludes
    // the endpoints
    CHECK(pmf.log_prob_in_ball(0.5, 0.5) == doctest::Approx(std::log(0.5)).epsilon(1e-14));
    CHECK(pmf.log_prob_in_ball(0.5, 0.5001) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(pmf.log_prob_in_ball(0.1, 0.05) == neg_inf);
    CHECK(pmf.log_prob_in_ball(0.0, 0.25) == doctest::Approx(std::log(0.25)).epsilon(1e-14));
}

TEST_CASE("horizon snapshots deduplicate and sort") {
    auto pmfs = sample_mean_pmfs(DiscreteRealLaw::bernoulli(0.5), {8, 2, 8, 4});
    REQUIRE(pmfs.size() == 3);
    CHECK(pmfs[0].n == 2);
    CHECK(pmfs[1].n == 4);
    CHECK(pmfs[2].n == 8);
    CHECK_THROWS_AS(sample_mean_pmfs(DiscreteRealLaw::bernoulli(0.5), {0}), Error);
    CHECK_THROWS_AS(sample_mean_pmfs(DiscreteRealLaw::bernoulli(0.5), {}), Error);
}

TEST_CASE("demo report closes the sandwich on the fair bit") {
    CramerOptions opts;  // defaults: probes 1/4, 1/2, 3/4; delta 0.05; 2^3..2^12
    auto report = cramer_demo(DiscreteRealLaw::bernoulli(0.5), opts);
    CHECK_FALSE(report.degenerate);
    REQUIRE(report.grid.size() == 99);
    REQUIRE(report.rate_numeric.size() == 99);
    REQUIRE(report.ball_rows.size() == 3);
    CHECK(report.sup_gap < 5e-2);
    for (const auto& row : report.ball_rows) {
        REQUIRE(row.values.size() == 10);
        CHECK(std::fabs(row.estimate - legendre_transform(DiscreteRealLaw::bernoulli(0.5),
                                                          row.x)) < 5e-2);
    }
}

TEST_CASE("demo handles a degenerate law") {
    CramerOptions opts;
    opts.probe_x = {3.0, 4.0};
    opts.horizons = {1, 2, 4};
    auto report = cramer_demo(DiscreteRealLaw({3.0}, {1.0}), opts);
    CHECK(report.degenerate);
    REQUIRE(report.grid.size() == 1);
    CHECK(report.rate_numeric[0] == 0.0);
    // all mass at 3: the ball at 3 has rate 0, the ball at 4 never fills
    CHECK(report.ball_rows[0].estimate == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(report.ball_rows[1].estimate == pos_inf);
    CHECK(report.sup_gap == 0.0);
}

TEST_CASE("aggregated sample-mean family matches the raw pmf masses") {
    auto law = DiscreteRealLaw::bernoulli(0.5);
    auto family = sample_mean_family(law, {0.25, 0.5, 0.75}, {2});
    CHECK(family.space().size() == 3);
    auto agg = family.law(2);
    // means 0 and 1/2 and 1 split around the midpoints 0.375 and 0.625
    CHECK(agg.log_weights[0] == doctest::Approx(std::log(0.25)).epsilon(1e-14));
    CHECK(agg.log_weights[1] == doctest::Approx(std::log(0.5)).epsilon(1e-14));
    CHECK(agg.log_weights[2] == doctest::Approx(std::log(0.25)).epsilon(1e-14));
    CHECK(agg.mass_defect == doctest::Approx(0.0).epsilon(1e-15));

    CHECK_THROWS_AS(sample_mean_family(law, {}, {1}), Error);
    CHECK_THROWS_AS(sample_mean_family(law, {0.5, 0.25}, {1}), Error);
}
