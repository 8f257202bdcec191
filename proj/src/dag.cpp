#include "dagcollapse/dag.hpp"

#include <algorithm>
#include <queue>

#include "dagcollapse/errors.hpp"

namespace dagcollapse {

namespace {

// Sorted adjacency built straight from an edge list, independent of Dag.
std::vector<std::vector<NodeId>> raw_adjacency(std::size_t node_count,
                                               const std::vector<Edge>& edges) {
    std::vector<std::vector<NodeId>> adj(node_count);
    for (const auto& [u, v] : edges) {
        adj[u].push_back(v);
    }
    for (auto& targets : adj) {
        std::sort(targets.begin(), targets.end());
    }
    return adj;
}

}  // namespace

std::vector<Edge> Dag::edge_list() const {
    std::vector<Edge> edges;
    edges.reserve(edge_count());
    for (NodeId u = 0; u < node_count_; ++u) {
        for (NodeId v : out_neighbors(u)) {
            edges.emplace_back(u, v);
        }
    }
    return edges;
}

Dag build_dag(std::size_t node_count, std::vector<Edge> edges) {
    for (const auto& [u, v] : edges) {
        if (u >= node_count) {
            throw NodeIdOutOfRange(u, node_count);
        }
        if (v >= node_count) {
            throw NodeIdOutOfRange(v, node_count);
        }
        if (u == v) {
            throw CycleDetected(u, v, "self loop");
        }
    }

    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    Dag dag;
    dag.node_count_ = node_count;
    dag.out_offsets_.assign(node_count + 1, 0);
    dag.in_offsets_.assign(node_count + 1, 0);
    for (const auto& [u, v] : edges) {
        ++dag.out_offsets_[u + 1];
        ++dag.in_offsets_[v + 1];
    }
    for (std::size_t i = 0; i < node_count; ++i) {
        dag.out_offsets_[i + 1] += dag.out_offsets_[i];
        dag.in_offsets_[i + 1] += dag.in_offsets_[i];
    }
    dag.out_targets_.resize(edges.size());
    dag.in_sources_.resize(edges.size());
    {
        std::vector<std::size_t> next_in(dag.in_offsets_.begin(), dag.in_offsets_.end() - 1);
        std::size_t pos = 0;
        for (const auto& [u, v] : edges) {
            dag.out_targets_[pos++] = v;  // edges are (u, v)-sorted, so rows stay sorted
            dag.in_sources_[next_in[v]++] = u;
        }
    }
    // in_sources_ rows come out sorted as well: edges were scanned in
    // ascending source order, so each row receives its sources in order.

    // Acyclicity check: peel in-degree-zero nodes; leftovers mean a cycle.
    {
        std::vector<std::size_t> indegree(node_count);
        std::queue<NodeId> ready;
        for (NodeId v = 0; v < node_count; ++v) {
            indegree[v] = dag.in_degree(v);
            if (indegree[v] == 0) {
                ready.push(v);
            }
        }
        std::size_t processed = 0;
        while (!ready.empty()) {
            const NodeId u = ready.front();
            ready.pop();
            ++processed;
            for (NodeId v : dag.out_neighbors(u)) {
                if (--indegree[v] == 0) {
                    ready.push(v);
                }
            }
        }
        if (processed < node_count) {
            const auto back = find_back_edges(node_count, edges);
            // Non-empty by construction; report the first offender.
            throw CycleDetected(back.front().first, back.front().second);
        }
    }

    for (NodeId v = 0; v < node_count; ++v) {
        if (dag.in_degree(v) == 0) {
            dag.roots_.push_back(v);
        }
        if (dag.out_degree(v) == 0) {
            dag.leaves_.push_back(v);
        }
    }
    return dag;
}

TopologicalOrder topological_order(const Dag& dag) {
    const std::size_t n = dag.node_count();
    TopologicalOrder result;
    result.rank.resize(n);
    result.order.reserve(n);

    std::vector<std::size_t> indegree(n);
    std::priority_queue<NodeId, std::vector<NodeId>, std::greater<>> ready;
    for (NodeId v = 0; v < n; ++v) {
        indegree[v] = dag.in_degree(v);
        if (indegree[v] == 0) {
            ready.push(v);
        }
    }
    while (!ready.empty()) {
        const NodeId u = ready.top();
        ready.pop();
        result.rank[u] = static_cast<std::uint32_t>(result.order.size());
        result.order.push_back(u);
        for (NodeId v : dag.out_neighbors(u)) {
            if (--indegree[v] == 0) {
                ready.push(v);
            }
        }
    }
    return result;
}

DegreeStats degree_stats(const Dag& dag) {
    const std::size_t n = dag.node_count();
    if (n == 0) {
        throw EmptyGraph();
    }
    DegreeStats stats;
    const double mean = static_cast<double>(dag.edge_count()) / static_cast<double>(n);
    stats.in_mean = mean;
    stats.out_mean = mean;
    double in_sq = 0.0;
    double out_sq = 0.0;
    for (NodeId v = 0; v < n; ++v) {
        const double din = static_cast<double>(dag.in_degree(v)) - mean;
        const double dout = static_cast<double>(dag.out_degree(v)) - mean;
        in_sq += din * din;
        out_sq += dout * dout;
        stats.max_in_degree = std::max(stats.max_in_degree, dag.in_degree(v));
        stats.max_out_degree = std::max(stats.max_out_degree, dag.out_degree(v));
    }
    stats.in_variance = in_sq / static_cast<double>(n);
    stats.out_variance = out_sq / static_cast<double>(n);
    return stats;
}

std::vector<Edge> find_back_edges(std::size_t node_count, const std::vector<Edge>& edges) {
    for (const auto& [u, v] : edges) {
        if (u >= node_count) {
            throw NodeIdOutOfRange(u, node_count);
        }
        if (v >= node_count) {
            throw NodeIdOutOfRange(v, node_count);
        }
    }
    const auto adj = raw_adjacency(node_count, edges);

    enum : unsigned char { white, gray, black };
    std::vector<unsigned char> color(node_count, white);
    std::vector<Edge> back;

    // Explicit stack of (node, next neighbor index) frames.
    std::vector<std::pair<NodeId, std::size_t>> stack;
    for (NodeId start = 0; start < node_count; ++start) {
        if (color[start] != white) {
            continue;
        }
        color[start] = gray;
        stack.emplace_back(start, 0);
        while (!stack.empty()) {
            auto& [u, next] = stack.back();
            if (next < adj[u].size()) {
                const NodeId v = adj[u][next++];
                if (color[v] == gray) {
                    back.emplace_back(u, v);
                } else if (color[v] == white) {
                    color[v] = gray;
                    stack.emplace_back(v, 0);
                }
            } else {
                color[u] = black;
                stack.pop_back();
            }
        }
    }
    return back;
}

}  // namespace dagcollapse
