#include <doctest.h>

#include <algorithm>
#include <vector>

#include "dagcollapse/dag.hpp"
#include "dagcollapse/errors.hpp"
#include "test_support.hpp"

using namespace dagcollapse;

TEST_CASE("build_dag sorts, deduplicates, and exposes adjacency") {
    // Diamond with a duplicate edge thrown in.
    auto dag = build_dag(4, {{0, 2}, {0, 1}, {1, 3}, {2, 3}, {0, 1}});
    CHECK(dag.node_count() == 4);
    CHECK(dag.edge_count() == 4);
    CHECK(dag.edge_list() == std::vector<Edge>{{0, 1}, {0, 2}, {1, 3}, {2, 3}});

    CHECK(dag.out_degree(0) == 2);
    CHECK(dag.in_degree(3) == 2);
    CHECK(dag.roots() == std::vector<NodeId>{0});
    CHECK(dag.leaves() == std::vector<NodeId>{3});

    const auto out0 = dag.out_neighbors(0);
    CHECK(std::vector<NodeId>(out0.begin(), out0.end()) == std::vector<NodeId>{1, 2});
    const auto in3 = dag.in_neighbors(3);
    CHECK(std::vector<NodeId>(in3.begin(), in3.end()) == std::vector<NodeId>{1, 2});
}

TEST_CASE("build_dag rejects bad input") {
    CHECK_THROWS_AS(build_dag(3, {{0, 3}}), NodeIdOutOfRange);
    CHECK_THROWS_AS(build_dag(3, {{5, 0}}), NodeIdOutOfRange);
    CHECK_THROWS_AS(build_dag(3, {{1, 1}}), CycleDetected);

    try {
        build_dag(3, {{0, 1}, {1, 2}, {2, 0}});
        FAIL("cycle not detected");
    } catch (const CycleDetected& e) {
        // The reported edge must be part of the actual cycle.
        const auto from = e.from;
        const auto to = e.to;
        CHECK(((from == 2 && to == 0) || (from == 1 && to == 2) || (from == 0 && to == 1)));
    }
}

TEST_CASE("degenerate graphs are still graphs") {
    const auto empty = build_dag(0, {});
    CHECK(empty.node_count() == 0);
    CHECK(empty.edge_count() == 0);
    CHECK_THROWS_AS(degree_stats(empty), EmptyGraph);

    const auto lonely = build_dag(1, {});
    CHECK(lonely.roots() == std::vector<NodeId>{0});
    CHECK(lonely.leaves() == std::vector<NodeId>{0});
    const auto stats = degree_stats(lonely);
    CHECK(stats.in_mean == 0.0);
    CHECK(stats.out_variance == 0.0);
}

TEST_CASE("isolated nodes count as both roots and leaves") {
    const auto dag = build_dag(3, {{0, 1}});
    CHECK(dag.roots() == std::vector<NodeId>{0, 2});
    CHECK(dag.leaves() == std::vector<NodeId>{1, 2});
}

TEST_CASE("equality is structural") {
    const auto a = build_dag(3, {{0, 1}, {1, 2}});
    const auto b = build_dag(3, {{1, 2}, {0, 1}, {0, 1}});
    const auto c = build_dag(3, {{0, 1}, {0, 2}});
    CHECK(a == b);
    CHECK(a != c);
    CHECK(a != build_dag(4, {{0, 1}, {1, 2}}));
}

TEST_CASE("topological order breaks ties by node id") {
    SUBCASE("edgeless graph is id order") {
        const auto order = topological_order(build_dag(4, {})).order;
        CHECK(order == std::vector<NodeId>{0, 1, 2, 3});
    }
    SUBCASE("diamond") {
        const auto topo = topological_order(build_dag(4, {{0, 1}, {0, 2}, {1, 3}, {2, 3}}));
        CHECK(topo.order == std::vector<NodeId>{0, 1, 2, 3});
        CHECK(topo.rank == std::vector<std::uint32_t>{0, 1, 2, 3});
    }
    SUBCASE("id order does not have to match edge order") {
        // 2 is a root and must come before 0's child 1 only if its id wins.
        const auto topo = topological_order(build_dag(3, {{2, 1}, {0, 1}}));
        CHECK(topo.order == std::vector<NodeId>{0, 2, 1});
        CHECK(topo.rank[1] == 2);
    }
}

TEST_CASE("topological order ranks every edge forward") {
    for (std::size_t index = 0; index < 60; ++index) {
        const auto dag = test_support::small_random_dag(index);
        const auto topo = topological_order(dag);
        REQUIRE(topo.order.size() == dag.node_count());
        for (const auto& [u, v] : dag.edge_list()) {
            CHECK(topo.rank[u] < topo.rank[v]);
        }
        // rank and order must be inverse views of each other.
        for (std::size_t i = 0; i < topo.order.size(); ++i) {
            CHECK(topo.rank[topo.order[i]] == i);
        }
    }
}

TEST_CASE("degree statistics match a direct recomputation") {
    for (std::size_t index = 0; index < 40; ++index) {
        const auto dag = test_support::small_random_dag(index);
        const auto stats = degree_stats(dag);
        const double n = static_cast<double>(dag.node_count());

        double in_sum = 0.0;
        double out_sum = 0.0;
        for (NodeId v = 0; v < dag.node_count(); ++v) {
            in_sum += static_cast<double>(dag.in_degree(v));
            out_sum += static_cast<double>(dag.out_degree(v));
        }
        CHECK(stats.in_mean == doctest::Approx(in_sum / n).epsilon(1e-12));
        CHECK(stats.out_mean == doctest::Approx(out_sum / n).epsilon(1e-12));
        CHECK(stats.in_mean == stats.out_mean);

        double in_var = 0.0;
        double out_var = 0.0;
        for (NodeId v = 0; v < dag.node_count(); ++v) {
            in_var += (dag.in_degree(v) - stats.in_mean) * (dag.in_degree(v) - stats.in_mean);
            out_var +=
                (dag.out_degree(v) - stats.out_mean) * (dag.out_degree(v) - stats.out_mean);
        }
        CHECK(stats.in_variance == doctest::Approx(in_var / n).epsilon(1e-12));
        CHECK(stats.out_variance == doctest::Approx(out_var / n).epsilon(1e-12));
    }
}

TEST_CASE("degree statistics on a hand-checked star") {
    // 0 -> {1,2,3,4}: out degrees 4,0,0,0,0 and in degrees 0,1,1,1,1.
    const auto dag = build_dag(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}});
    const auto stats = degree_stats(dag);
    CHECK(stats.in_mean == doctest::Approx(0.8));
    CHECK(stats.out_mean == doctest::Approx(0.8));
    CHECK(stats.in_variance == doctest::Approx(0.16));    // 4*(0.2)^2/5 + (0.8)^2/5
    CHECK(stats.out_variance == doctest::Approx(2.56));   // (4-0.8)^2/5 + 4*(0.8)^2/5
    CHECK(stats.max_in_degree == 1);
    CHECK(stats.max_out_degree == 4);
}

TEST_CASE("find_back_edges is empty on DAGs and curative on digraphs") {
    CHECK(find_back_edges(4, {{0, 1}, {1, 2}, {2, 3}}).empty());

    SUBCASE("simple cycle") {
        const std::vector<Edge> cyclic{{0, 1}, {1, 2}, {2, 0}};
        const auto back = find_back_edges(3, cyclic);
        REQUIRE(back.size() == 1);
        CHECK(back.front() == Edge{2, 0});
    }

    SUBCASE("self loop") {
        const auto back = find_back_edges(2, {{0, 1}, {1, 1}});
        REQUIRE(back.size() == 1);
        CHECK(back.front() == Edge{1, 1});
    }

    SUBCASE("random digraphs become acyclic after removal") {
        auto rng = dagcollapse::Rng::substream(0xbad, 0);
        for (int round = 0; round < 30; ++round) {
            const std::size_t n = 3 + rng.index(20);
            std::vector<Edge> edges;
            const std::size_t m = rng.index(3 * n);
            for (std::size_t i = 0; i < m; ++i) {
                edges.emplace_back(static_cast<NodeId>(rng.index(n)),
                                   static_cast<NodeId>(rng.index(n)));
            }
            std::sort(edges.begin(), edges.end());
            edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

            const auto back = find_back_edges(n, edges);
            std::vector<Edge> cleaned;
            for (const auto& e : edges) {
                if (std::find(back.begin(), back.end(), e) == back.end()) {
                    cleaned.push_back(e);
                }
            }
            CHECK_NOTHROW(build_dag(n, cleaned));
        }
    }
}
