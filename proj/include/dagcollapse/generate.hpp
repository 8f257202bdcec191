#pragma once

#include <cstdint>
#include <unordered_set>
#include <utility>
#include <vector>

#include "dagcollapse/dag.hpp"
#include "dagcollapse/rng.hpp"

namespace dagcollapse {

// Complete binary tree in heap layout: node i has children 2i+1 and 2i+2
// when those ids are < n, and tree depth floor(log2(i+1)). Ancestors of any
// node therefore occupy strictly smaller ids, and the nodes shallower than
// depth d are exactly the ids [0, 2^d - 1).
struct SeededTree {
    Dag dag;
    std::vector<std::uint32_t> td;  // tree depth per node, root at 0

    std::uint32_t max_depth() const { return td.empty() ? 0 : td.back(); }
};

SeededTree complete_binary_tree(std::size_t n);

struct GenerationConfig {
    std::size_t n = 0;
    std::uint32_t iterations = 1;
    // Edges per iteration are ceil(n * (1 + epsilon)). Negative means "use
    // the default log2(n) - 1", which makes the budget about n*log2(n).
    double epsilon = -1.0;
    std::uint64_t seed = 0;
    std::uint32_t max_resample_attempts = 100;

    double resolved_epsilon() const;
    std::size_t edge_budget() const;

    // Throws std::invalid_argument on n < 2, iterations < 1, or
    // max_resample_attempts < 1.
    void validate() const;
};

struct IterationStats {
    std::size_t iteration = 0;          // 1-based
    std::size_t targets_selected = 0;   // distinct non-roots drawn as a target
    std::size_t targets_unselected = 0; // eligible targets never drawn
    std::size_t edges_inserted = 0;
    std::size_t edges_skipped = 0;      // budget slots lost to exhausted resampling

    bool operator==(const IterationStats&) const = default;
};
using IterationLog = std::vector<IterationStats>;

// Iterated random edge insertion over a seeded tree. Each step draws
// edge_budget() edges: target v uniform over non-root nodes, source u
// uniform over the nodes strictly shallower than v. A draw that duplicates
// an existing edge is redrawn, up to max_resample_attempts times; slots
// still colliding after that are counted as skipped, which only happens
// near saturation. Every drawn target counts as selected, including draws
// that were later redrawn. The stepwise form exists so callers can snapshot
// the graph between iterations.
class TreeCollapseGenerator {
  public:
    TreeCollapseGenerator(SeededTree tree, const GenerationConfig& config);

    IterationStats step();
    std::uint32_t iterations_done() const { return iterations_done_; }
    const IterationLog& log() const { return log_; }
    const SeededTree& tree() const { return tree_; }

    // Validated snapshot of the accumulated graph.
    Dag current() const;

  private:
    SeededTree tree_;
    GenerationConfig config_;
    Rng rng_;
    std::uint32_t iterations_done_ = 0;
    IterationLog log_;
    std::vector<Edge> edges_;
    std::unordered_set<std::uint64_t> edge_keys_;
};

// Runs the generator for config.iterations steps.
std::pair<Dag, IterationLog> add_random_edges(SeededTree tree, const GenerationConfig& config);

// Uniform random DAG: nodes get a uniform random rank order and each edge
// joins a uniform pair, oriented low rank to high rank. Requires
// edge_count <= n(n-1)/2, else BudgetInfeasible.
Dag rank_random_dag(std::size_t n, std::size_t edge_count, std::uint64_t seed);

struct MatchProfile {
    std::size_t node_count = 0;
    std::size_t edge_count = 0;
    std::size_t root_count = 0;
    std::size_t leaf_count = 0;

    bool operator==(const MatchProfile&) const = default;
};

MatchProfile profile_of(const Dag& dag);

// Random counterpart matching a profile: under a uniform rank order the
// root_count lowest ranks never receive edges and the leaf_count highest
// ranks never emit them. Nodes left with degree zero are dropped and the
// survivors renumbered densely, so the result can be smaller than
// profile.node_count. Throws ProfileInfeasible when the counts cannot
// coexist and BudgetInfeasible when edge_count exceeds the legal pairs.
Dag matched_random(const MatchProfile& profile, std::uint64_t seed);

}  // namespace dagcollapse
