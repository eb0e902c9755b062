#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "ldrisk/error.hpp"
#include "ldrisk/extended.hpp"
#include "ldrisk/state_space.hpp"

using namespace ldrisk;

namespace {

Errc code_of(const std::function<void()>& op) {
    try {
        op();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an Error");
    return Errc::invalid_argument;
}

}  // namespace

TEST_CASE("metric axiom validation") {
    CHECK(code_of([] {
              FiniteMetricSpace({"a", "b"}, {{0, 1}, {2, 0}});
          }) == Errc::asymmetric_distance);
    CHECK(code_of([] {
              FiniteMetricSpace({"a", "b"}, {{0.5, 1}, {1, 0}});
          }) == Errc::nonzero_diagonal);
    // d(a,c) = 3 > 1 + 1 = d(a,b) + d(b,c)
    CHECK(code_of([] {
              FiniteMetricSpace({"a", "b", "c"}, {{0, 1, 3}, {1, 0, 1}, {3, 1, 0}});
          }) == Errc::triangle_violation);
    CHECK(code_of([] {
              FiniteMetricSpace({"a", "b"}, {{0, -1}, {-1, 0}});
          }) == Errc::invalid_argument);
    CHECK(code_of([] {
              FiniteMetricSpace({"a", "b"}, {{0, 1}});
          }) == Errc::invalid_argument);
    CHECK(code_of([] { FiniteMetricSpace({}, {}); }) == Errc::invalid_argument);
    // distinct points at distance zero would collapse the discrete topology
    CHECK(code_of([] {
              FiniteMetricSpace({"a", "b"}, {{0, 0}, {0, 0}});
          }) == Errc::invalid_argument);
}

TEST_CASE("random euclidean point clouds always validate") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> unif(-10.0, 10.0);
    for (int trial = 0; trial < 50; ++trial) {
        int k = 2 + static_cast<int>(rng() % 7);
        std::vector<double> xs(static_cast<size_t>(k)), ys(static_cast<size_t>(k));
        for (int i = 0; i < k; ++i) {
            xs[static_cast<size_t>(i)] = unif(rng);
            ys[static_cast<size_t>(i)] = unif(rng);
        }
        std::vector<std::vector<double>> d(static_cast<size_t>(k),
                                           std::vector<double>(static_cast<size_t>(k), 0.0));
        bool degenerate = false;
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) {
                double dx = xs[static_cast<size_t>(i)] - xs[static_cast<size_t>(j)];
                double dy = ys[static_cast<size_t>(i)] - ys[static_cast<size_t>(j)];
                d[static_cast<size_t>(i)][static_cast<size_t>(j)] = std::hypot(dx, dy);
                if (i != j && d[static_cast<size_t>(i)][static_cast<size_t>(j)] == 0.0)
                    degenerate = true;
            }
        if (degenerate) continue;
        std::vector<std::string> labels;
        for (int i = 0; i < k; ++i) labels.push_back("p" + std::to_string(i));
        FiniteMetricSpace space(labels, d);
        CHECK(space.size() == k);

        // corrupting one off-diagonal entry by x3 must break symmetry
        auto bad = d;
        bad[0][1] *= 3.0;
        CHECK_THROWS_AS(FiniteMetricSpace(labels, bad), Error);
    }
}

TEST_CASE("factories and lookup") {
    auto disc = FiniteMetricSpace::discrete(3);
    CHECK(disc.size() == 3);
    CHECK(disc.distance(0, 1) == 1.0);
    CHECK(disc.distance(2, 2) == 0.0);
    CHECK(disc.min_positive_distance() == 1.0);

    auto ln = FiniteMetricSpace::line({0.0, 1.0, 2.5, 3.0});
    CHECK(ln.distance(0, 2) == 2.5);
    CHECK(ln.distance(2, 3) == 0.5);
    CHECK(ln.min_positive_distance() == 0.5);

    auto named = FiniteMetricSpace::line({0.0, 1.0}, {"lo", "hi"});
    CHECK(named.index_of("hi") == 1);
    CHECK(named.label(0) == "lo");
    CHECK_THROWS_AS(named.index_of("nope"), Error);
}

TEST_CASE("open balls on a line") {
    auto ln = FiniteMetricSpace::line({0.0, 1.0, 2.5, 3.0});
    CHECK(ball(ln, 1, 1.2) == Subset::of(4, {0, 1}));       // |2.5-1|=1.5 excluded
    CHECK(ball(ln, 1, 1.6) == Subset::of(4, {0, 1, 2}));
    CHECK(ball(ln, 0, 0.5) == Subset::of(4, {0}));
    CHECK(ball(ln, 2, 10.0).is_full());
    CHECK_THROWS_AS(ball(ln, 0, 0.0), Error);
    CHECK_THROWS_AS(ball(ln, 9, 1.0), Error);
}

TEST_CASE("interior and closure are the identity on a finite metric space") {
    // every singleton is open (radius = half the min positive distance), so
    // the topology is discrete and int A = cl A = A; the computation still
    // goes through candidate radii, which this pins down.
    auto ln = FiniteMetricSpace::line({0.0, 0.25, 1.0, 4.0, 4.5});
    std::mt19937_64 rng(7);
    for (int t = 0; t < 40; ++t) {
        auto a = Subset::from_bits(5, rng() & 0x1fu);
        auto [in, cl] = interior_closure(ln, a);
        CHECK(in == a);
        CHECK(cl == a);
    }
}

TEST_CASE("subset operations") {
    auto a = Subset::of(6, {0, 2, 4});
    CHECK(a.count() == 3);
    CHECK(a.contains(2));
    CHECK_FALSE(a.contains(1));
    CHECK(a.complement() == Subset::of(6, {1, 3, 5}));
    CHECK(a.unite(Subset::of(6, {1, 2})) == Subset::of(6, {0, 1, 2, 4}));
    CHECK(a.intersect(Subset::of(6, {2, 3, 4})) == Subset::of(6, {2, 4}));
    CHECK(a.subset_of(Subset::full(6)));
    CHECK_FALSE(Subset::full(6).subset_of(a));
    CHECK(Subset(6).empty());
    CHECK(a.bits() == 0b010101u);
    CHECK(Subset::from_bits(6, 0b010101u) == a);
    CHECK(a.members() == std::vector<int>{0, 2, 4});
    CHECK_THROWS_AS(Subset::of(3, {5}), Error);
}

TEST_CASE("bounded functions") {
    BoundedFunction f({1.0, -2.0, 3.0});
    CHECK(f.size() == 3);
    CHECK(f[2] == 3.0);
    CHECK(BoundedFunction::constant(2, 5.0) == BoundedFunction({5.0, 5.0}));
    auto tl = BoundedFunction::two_level(Subset::of(3, {0, 2}), 1.0, -1.0);
    CHECK(tl == BoundedFunction({1.0, -1.0, 1.0}));

    BoundedFunction g({0.0, 7.0, 1.0});
    CHECK(pointwise_max(f, g) == BoundedFunction({1.0, 7.0, 3.0}));
    CHECK(shift(f, 2.0) == BoundedFunction({3.0, 0.0, 5.0}));
    CHECK(blend(f, g, 0.25) == BoundedFunction({0.25, 4.75, 1.5}));
    CHECK(sup_distance(f, g) == 9.0);

    CHECK_THROWS_AS(BoundedFunction({1.0, std::nan("")}), Error);
    CHECK_THROWS_AS(BoundedFunction({std::numeric_limits<double>::infinity()}), Error);
    CHECK_THROWS_AS(BoundedFunction(std::vector<double>{}), Error);
    CHECK_THROWS_AS(pointwise_max(f, BoundedFunction({1.0})), Error);
}

TEST_CASE("probability vectors") {
    auto u = ProbabilityVector::uniform(4);
    CHECK(u[3] == 0.25);
    auto pm = ProbabilityVector::point_mass(3, 1);
    CHECK(pm[0] == 0.0);
    CHECK(pm[1] == 1.0);
    CHECK(pm.mass(Subset::of(3, {0, 1})) == 1.0);
    auto lw = pm.log_weights();
    CHECK(lw[0] == neg_inf);
    CHECK(lw[1] == 0.0);

    ProbabilityVector p({0.5, 0.25, 0.25});
    CHECK(p.mass(Subset::of(3, {1, 2})) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK_THROWS_AS(ProbabilityVector({0.5, 0.6}), Error);
    CHECK_THROWS_AS(ProbabilityVector({1.5, -0.5}), Error);
    CHECK_THROWS_AS(ProbabilityVector(std::vector<double>{}), Error);
}
