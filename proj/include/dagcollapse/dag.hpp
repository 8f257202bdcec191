#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace dagcollapse {

using NodeId = std::uint32_t;
using Edge = std::pair<NodeId, NodeId>;

// Immutable directed acyclic graph over nodes 0..node_count-1, stored as
// forward and reverse adjacency in compressed sparse row form. Construct
// through build_dag, which validates and deduplicates.
class Dag {
  public:
    Dag() = default;

    std::size_t node_count() const { return node_count_; }
    std::size_t edge_count() const { return out_targets_.size(); }

    std::span<const NodeId> out_neighbors(NodeId u) const {
        return {out_targets_.data() + out_offsets_[u],
                out_targets_.data() + out_offsets_[u + 1]};
    }

    std::span<const NodeId> in_neighbors(NodeId v) const {
        return {in_sources_.data() + in_offsets_[v],
                in_sources_.data() + in_offsets_[v + 1]};
    }

    std::size_t out_degree(NodeId u) const { return out_offsets_[u + 1] - out_offsets_[u]; }
    std::size_t in_degree(NodeId v) const { return in_offsets_[v + 1] - in_offsets_[v]; }

    // Nodes with no incoming / no outgoing edges, ascending. An isolated
    // node is both a root and a leaf.
    const std::vector<NodeId>& roots() const { return roots_; }
    const std::vector<NodeId>& leaves() const { return leaves_; }

    // Edges sorted by (source, target), no duplicates.
    std::vector<Edge> edge_list() const;

    bool operator==(const Dag& other) const {
        return node_count_ == other.node_count_ && out_offsets_ == other.out_offsets_ &&
               out_targets_ == other.out_targets_;
    }

  private:
    friend Dag build_dag(std::size_t node_count, std::vector<Edge> edges);

    std::size_t node_count_ = 0;
    std::vector<std::size_t> out_offsets_ = {0};
    std::vector<NodeId> out_targets_;
    std::vector<std::size_t> in_offsets_ = {0};
    std::vector<NodeId> in_sources_;
    std::vector<NodeId> roots_;
    std::vector<NodeId> leaves_;
};

// Validates ids, removes duplicate edges, rejects cycles (self loops
// included). Throws NodeIdOutOfRange or CycleDetected.
Dag build_dag(std::size_t node_count, std::vector<Edge> edges);

struct TopologicalOrder {
    // rank[v] = position of v in the order; order[i] = node at position i.
    std::vector<std::uint32_t> rank;
    std::vector<NodeId> order;
};

// Kahn's algorithm with ascending node id as the tie break, so the result
// is a pure function of the graph.
TopologicalOrder topological_order(const Dag& dag);

struct DegreeStats {
    double in_mean = 0.0;
    double in_variance = 0.0;   // population variance, divisor n
    double out_mean = 0.0;
    double out_variance = 0.0;
    std::size_t max_in_degree = 0;
    std::size_t max_out_degree = 0;

    bool operator==(const DegreeStats&) const = default;
};

// Throws EmptyGraph on node_count == 0. in_mean always equals out_mean.
DegreeStats degree_stats(const Dag& dag);

// Back edges found by an iterative depth-first scan that starts from node 0
// upward and visits neighbors in ascending order. Removing every returned
// edge from the input leaves an acyclic edge set; an empty result means the
// input is already acyclic. Self loops count as back edges.
std::vector<Edge> find_back_edges(std::size_t node_count, const std::vector<Edge>& edges);

}  // namespace dagcollapse
