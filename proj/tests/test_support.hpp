#pragma once

// Shared fixtures: deterministic graph families and an independent depth
// oracle the production code never touches.

#include <cstdint>
#include <deque>
#include <limits>
#include <vector>

#include "dagcollapse/dag.hpp"
#include "dagcollapse/generate.hpp"
#include "dagcollapse/rng.hpp"

namespace test_support {

// Breadth-first shortest-path depths from every root, written without any
// of the library's traversal helpers so it can arbitrate them.
inline std::vector<std::uint32_t> bfs_depths(const dagcollapse::Dag& dag) {
    constexpr auto unset = std::numeric_limits<std::uint32_t>::max();
    std::vector<std::uint32_t> depth(dag.node_count(), unset);
    std::deque<dagcollapse::NodeId> frontier;
    for (dagcollapse::NodeId v = 0; v < dag.node_count(); ++v) {
        if (dag.in_degree(v) == 0) {
            depth[v] = 0;
            frontier.push_back(v);
        }
    }
    while (!frontier.empty()) {
        const auto u = frontier.front();
        frontier.pop_front();
        for (const auto v : dag.out_neighbors(u)) {
            if (depth[v] == unset) {
                depth[v] = depth[u] + 1;
                frontier.push_back(v);
            } else if (depth[u] + 1 < depth[v]) {
                // BFS from all roots at once never revisits with a shorter
                // path, but keep the guard so the oracle stays obviously
                // correct rather than subtly analogous to the code under test.
                depth[v] = depth[u] + 1;
                frontier.push_back(v);
            }
        }
    }
    return depth;
}

// Fixed-shape layered DAG: `levels` layers of `width` nodes, each node
// feeding `fanout` nodes of the next layer. Every root-to-leaf walk has
// exactly levels - 1 edges, which makes it the canonical non-collapsed
// specimen.
inline dagcollapse::Dag layered_dag(std::size_t levels, std::size_t width,
                                    std::size_t fanout) {
    std::vector<dagcollapse::Edge> edges;
    edges.reserve((levels - 1) * width * fanout);
    for (std::size_t level = 0; level + 1 < levels; ++level) {
        for (std::size_t i = 0; i < width; ++i) {
            const auto u = static_cast<dagcollapse::NodeId>(level * width + i);
            for (std::size_t k = 0; k < fanout; ++k) {
                const auto v =
                    static_cast<dagcollapse::NodeId>((level + 1) * width + (i + k) % width);
                edges.emplace_back(u, v);
            }
        }
    }
    return dagcollapse::build_dag(levels * width, std::move(edges));
}

// Deterministic mixed family for property tests: case `index` cycles
// through the three generators with sizes derived from the index.
inline dagcollapse::Dag small_random_dag(std::size_t index, std::size_t max_nodes = 50) {
    auto rng = dagcollapse::Rng::substream(0x5eed5, index);
    const std::size_t n = 2 + rng.index(max_nodes - 1);
    switch (index % 3) {
        case 0: {
            const std::size_t legal = n * (n - 1) / 2;
            return dagcollapse::rank_random_dag(n, rng.index(legal + 1), rng.next());
        }
        case 1: {
            dagcollapse::GenerationConfig config;
            config.n = n;
            config.iterations = 1 + static_cast<std::uint32_t>(rng.index(3));
            config.epsilon = static_cast<double>(rng.index(4));
            config.seed = rng.next();
            return add_random_edges(dagcollapse::complete_binary_tree(n), config).first;
        }
        default: {
            const std::size_t legal = n * (n - 1) / 2;
            const auto base = dagcollapse::rank_random_dag(n, 1 + rng.index(legal), rng.next());
            return dagcollapse::matched_random(dagcollapse::profile_of(base), rng.next());
        }
    }
}

}  // namespace test_support
