#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "haarfht/chain.hpp"
#include "haarfht/errors.hpp"
#include "haarfht/synthetic.hpp"
#include "oracles.hpp"

using namespace haarfht;

TEST_SUITE("chain") {

TEST_CASE("heavy-edge matching on the balanced 8-cycle") {
    const Graph g = balanced_eight_graph();
    const auto step = coarsen_once(g, 42);
    CHECK(step.parent == std::vector<std::size_t>{0, 0, 1, 1, 2, 2, 3, 3});
    CHECK(step.coarser.n() == 4);

    const auto chain = build_chain(g, 1, 42);
    CHECK(chain.sizes() == std::vector<std::size_t>{1, 2, 4, 8});
    CHECK(chain.j0() == 0);
    CHECK(chain.j_max() == 3);
    CHECK(chain.level(2).parent == std::vector<std::size_t>{0, 0, 1, 1});
    CHECK(chain.level(1).parent == std::vector<std::size_t>{0, 0});
    CHECK(validate_filtration(chain).is_filtration);
}

TEST_CASE("leftover vertices join their heaviest neighbour's cluster") {
    // 1-2 is the heavy edge; 0 and 3 are left over and attach to it.
    const Graph g(4, std::vector<Edge>{{0, 1, 1.0}, {1, 2, 5.0}, {2, 3, 2.0}});
    const auto step = coarsen_once(g, 0);
    CHECK(step.parent == std::vector<std::size_t>{0, 0, 0, 0});

    // Star: the centre takes leaf 1, the other leaves join it.
    const Graph star(5, std::vector<Edge>{{0, 1, 1.0}, {0, 2, 1.0}, {0, 3, 1.0}, {0, 4, 1.0}});
    CHECK(coarsen_once(star, 0).parent == std::vector<std::size_t>{0, 0, 0, 0, 0});
}

TEST_CASE("isolated vertices pair up by id") {
    const Graph g(5, std::vector<Edge>{{1, 3, 1.0}});
    const auto step = coarsen_once(g, 0);
    // {1,3} matched; isolated 0,2 pair and 4 stays alone. Clusters numbered by smallest member.
    CHECK(step.parent == std::vector<std::size_t>{0, 1, 0, 1, 2});
}

TEST_CASE("tie-breaking prefers smaller ids") {
    const Graph g(3, std::vector<Edge>{{0, 1, 1.0}, {0, 2, 1.0}, {1, 2, 1.0}});
    // All degrees equal: 0 visits first and takes 1; 2 joins 0's cluster.
    CHECK(coarsen_once(g, 0).parent == std::vector<std::size_t>{0, 0, 0});
}

TEST_CASE("coarsening is deterministic and ignores the seed") {
    const Graph g = random_mixed_graph(200, 7);
    CHECK(build_chain(g, 1, 1) == build_chain(g, 1, 999));
}

TEST_CASE("contract sums crossing weights and drops internal edges") {
    const Graph g(4, std::vector<Edge>{{0, 1, 1.0}, {0, 2, 2.0}, {1, 3, 3.0}, {2, 3, 4.0}});
    const std::vector<std::size_t> parent{0, 0, 1, 1};
    const Graph c = contract(g, parent, 2);
    REQUIRE(c.edges().size() == 1);
    CHECK(c.edges()[0] == Edge{0, 1, 5.0});
}

TEST_CASE("single vertex and min_top") {
    const Graph one(1, std::vector<Edge>{});
    const auto chain = build_chain(one, 1, 0);
    CHECK(chain.num_levels() == 1);
    CHECK(chain.n() == 1);
    const auto stop = build_chain(random_regular_graph(64, 4, 3), 10, 0);
    CHECK(stop.size(stop.j0()) <= 10);
    CHECK_THROWS_AS(build_chain(one, 0, 0), ValidationError);
}

TEST_CASE("constructor rejects inconsistent chains") {
    CHECK_THROWS_AS(CoarseChain({2, 3}, {{0, 0, 2}}), ValidationError);
    CHECK_THROWS_AS(CoarseChain({2, 3}, {{0, 0, 0}}), ValidationError);
    CHECK_THROWS_AS(CoarseChain({2, 3}, {{0, 1}}), ValidationError);
    CHECK_THROWS_AS(CoarseChain({2, 3}, {}), ValidationError);
    const Graph g(4, std::vector<Edge>{});
    CHECK_THROWS_AS(CoarseChain({1, 3}, {{0, 0, 0}}, &g), ValidationError);
}

TEST_CASE("ancestors, child counts and cumulative weights match brute-force walks") {
    for (std::uint64_t seed = 0; seed < 24; ++seed) {
        const std::size_t n = 2 + (seed * 37) % 150;
        const Graph g = oracle::random_graph(n, seed);
        const auto chain = build_chain(g, 1, seed);
        const CumulativeWeights cw(chain);
        for (int j = chain.j0(); j <= chain.j_max(); ++j) {
            for (std::size_t k = 0; k < n; ++k) {
                REQUIRE(chain.ancestors(j)[k] == oracle::ancestor(chain, j, k));
                REQUIRE(std::abs(cw(j, k) - oracle::cumulative_weight(chain, j, k)) < 1e-15);
            }
            const auto& lv = chain.level(j);
            for (std::size_t v = 0; v < lv.size; ++v) {
                REQUIRE(lv.child_count[v] == oracle::child_count(chain, j, v));
                REQUIRE(lv.weight_factor[v] == doctest::Approx(1.0 / std::sqrt(double(lv.child_count[v]))));
            }
        }
        CHECK(cw.at_level(chain.j_max())[0] == 1.0);
    }
}

TEST_CASE("children are ordered by contracted degree, then id") {
    const Graph g = random_mixed_graph(120, 5);
    const auto chain = build_chain(g, 1, 5);
    // Rebuild each level's graph independently.
    std::vector<Graph> graphs{g};
    for (int j = chain.j_max(); j > chain.j0(); --j)
        graphs.push_back(contract(graphs.back(), chain.level(j).parent, chain.size(j - 1)));
    for (int j = chain.j0(); j < chain.j_max(); ++j) {
        const Graph& fine = graphs[static_cast<std::size_t>(chain.j_max() - (j + 1))];
        for (std::size_t v = 0; v < chain.size(j); ++v) {
            const auto kids = chain.level(j).children_of(v);
            REQUIRE(kids.size() == chain.level(j).child_count[v]);
            for (std::size_t i = 1; i < kids.size(); ++i) {
                const auto da = fine.degree(kids[i - 1]);
                const auto db = fine.degree(kids[i]);
                REQUIRE((da > db || (da == db && kids[i - 1] < kids[i])));
            }
        }
    }
}

TEST_CASE("filtration report names singleton clusters") {
    const CoarseChain chain({2, 3}, {{0, 0, 1}});
    const auto r = validate_filtration(chain);
    CHECK_FALSE(r.is_filtration);
    REQUIRE(r.offenders.size() == 1);
    CHECK(r.offenders[0].level == 0);
    CHECK(r.offenders[0].vertex == 1);
    CHECK(r.offenders[0].children == 1);
}

TEST_CASE("chains from random graphs shrink every level") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const Graph g = oracle::random_graph(2 + seed * 11, seed);
        const auto chain = build_chain(g, 1, seed);
        const auto s = chain.sizes();
        CHECK(s.back() == g.n());
        for (std::size_t i = 1; i < s.size(); ++i) CHECK(s[i - 1] < s[i]);
        CHECK(s.front() == 1);
    }
}

}
