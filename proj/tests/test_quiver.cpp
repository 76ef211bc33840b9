#include "doctest.h"

#include <algorithm>
#include <random>

#include "wald/quiver.hpp"

using namespace wald;

namespace {

Quiver make(std::vector<int> vs, std::vector<std::pair<int, int>> edges) {
    Quiver q;
    q.vertices = std::move(vs);
    int id = 0;
    for (auto [s, t] : edges) q.arrows.push_back({id++, s, t});
    return q;
}

const Quiver chain3 = make({1, 2, 3}, {{1, 2}, {2, 3}});
const Quiver fork_q = make({1, 2, 3}, {{1, 3}, {2, 3}});

}  // namespace

TEST_CASE("rooted sequence of the chain grows one vertex per stage") {
    auto rs = rooted_sequence(chain3);
    REQUIRE(rs.zeta == 3);
    CHECK(rs.stages[0].empty());
    CHECK(rs.stages[1] == std::vector<int>{1});
    CHECK(rs.stages[2] == std::vector<int>{1, 2});
    CHECK(rs.stages[3] == std::vector<int>{1, 2, 3});
    CHECK(rs.complete);
}

TEST_CASE("stage 1 is the set of vertices with no incoming arrow") {
    for (const Quiver& q :
         {chain3, fork_q, make({1, 2, 3, 4}, {{1, 2}, {3, 2}, {2, 4}, {4, 4}})}) {
        auto rs = rooted_sequence(q);
        std::vector<int> sources;
        for (int v : q.vertices)
            if (q.arrows_into(v).empty()) sources.push_back(v);
        REQUIRE(rs.stages.size() > 1);
        CHECK(rs.stages[1] == sources);
    }
}

TEST_CASE("a loop vertex never enters the sequence") {
    auto q = make({1}, {{1, 1}});
    auto rs = rooted_sequence(q);
    CHECK(rs.zeta == 0);
    CHECK(rs.stages.back().empty());
    CHECK_FALSE(is_left_rooted(q));
}

TEST_CASE("the fork_q is left rooted in two stages") {
    auto rs = rooted_sequence(fork_q);
    CHECK(rs.zeta == 2);
    CHECK(rs.stages[1] == std::vector<int>{1, 2});
    CHECK(rs.stages[2] == std::vector<int>{1, 2, 3});
    CHECK(is_left_rooted(fork_q));
}

TEST_CASE("a 3-cycle is not left rooted") {
    CHECK_FALSE(is_left_rooted(make({1, 2, 3}, {{1, 2}, {2, 3}, {3, 1}})));
}

TEST_CASE("the empty quiver is left rooted") {
    CHECK(is_left_rooted(make({}, {})));
}

TEST_CASE("subquiver stages") {
    auto rs = rooted_sequence(chain3);
    SUBCASE("stage 0 is empty") {
        auto q0 = subquiver(chain3, rs, 0);
        CHECK(q0.vertices.empty());
        CHECK(q0.arrows.empty());
    }
    SUBCASE("stage 2 of the chain is the arrow 1 -> 2") {
        auto q2 = subquiver(chain3, rs, 2);
        CHECK(q2.vertices == std::vector<int>{1, 2});
        REQUIRE(q2.arrows.size() == 1);
        CHECK(q2.arrows[0].src == 1);
        CHECK(q2.arrows[0].tgt == 2);
        CHECK(q2.arrows[0].id == 0);  // ambient arrow ids are kept
    }
    SUBCASE("the final stage is the whole quiver") {
        auto qz = subquiver(chain3, rs, rs.zeta);
        CHECK(qz.vertices == chain3.vertices);
        CHECK(qz.arrows.size() == chain3.arrows.size());
    }
    SUBCASE("out-of-range stage throws") {
        CHECK_THROWS_AS(subquiver(chain3, rs, 7), std::out_of_range);
    }
}

TEST_CASE("stage chain and arrow-source properties on random quivers") {
    std::mt19937 rng(20240817);
    for (int trial = 0; trial < 1000; ++trial) {
        int n = static_cast<int>(rng() % 9);
        Quiver q;
        for (int v = 0; v < n; ++v) q.vertices.push_back(v);
        int edges = n == 0 ? 0 : static_cast<int>(rng() % (2 * n + 1));
        for (int e = 0; e < edges; ++e)
            q.arrows.push_back({e, static_cast<int>(rng() % n),
                                static_cast<int>(rng() % n)});
        auto rs = rooted_sequence(q);
        for (std::size_t mu = 0; mu + 1 < rs.stages.size(); ++mu) {
            // V_mu inside V_{mu+1}
            for (int v : rs.stages[mu])
                CHECK(std::binary_search(rs.stages[mu + 1].begin(),
                                         rs.stages[mu + 1].end(), v));
            // arrows into V_{mu+1} start in V_mu
            for (const Arrow& a : q.arrows)
                if (std::binary_search(rs.stages[mu + 1].begin(),
                                       rs.stages[mu + 1].end(), a.tgt))
                    CHECK(std::binary_search(rs.stages[mu].begin(),
                                             rs.stages[mu].end(), a.src));
        }
        // left rooted iff acyclic, by an independent algorithm
        CHECK(is_left_rooted(q) == is_acyclic(q));
    }
}

TEST_CASE("parallel arrows are preserved") {
    auto q = make({1, 2}, {{1, 2}, {1, 2}});
    CHECK(q.arrows_into(2).size() == 2);
    auto rs = rooted_sequence(q);
    auto qz = subquiver(q, rs, rs.zeta);
    CHECK(qz.arrows.size() == 2);
    CHECK(is_left_rooted(q));
}
