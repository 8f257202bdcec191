#pragma once

#include <cstdint>
#include <vector>

#include "dagcollapse/generate.hpp"
#include "dagcollapse/metrics.hpp"

namespace dagcollapse {

// One edge draw aimed at a node of tree depth `target_depth` picks its
// source uniformly among strictly shallower nodes. The trial estimates the
// probability that the source lies at least two levels above the target,
// the event that shortens the target's shortest path, and reports the exact
// level-counting probability next to the estimate. In a complete binary
// tree both level counts are powers of two minus one, so the exact value
// approaches 1/2 from below as the target deepens.
struct DepthReductionResult {
    std::uint32_t target_depth = 0;
    std::size_t eligible_sources = 0;   // nodes strictly shallower than the target
    std::size_t favorable_sources = 0;  // of those, at least two levels up
    std::size_t samples = 0;
    double exact_probability = 0.0;
    double empirical_probability = 0.0;
};

// Throws DepthOutOfRange unless 2 <= target_depth <= tree.max_depth().
DepthReductionResult depth_reduction_trial(const SeededTree& tree, std::uint32_t target_depth,
                                           std::size_t samples, std::uint64_t seed);

// Idealized selection process behind the generator: one iteration draws
// ceil(n * (1 + epsilon)) targets uniformly from all n nodes, and we count
// the nodes never drawn. Expectation in closed form: n(1 - 1/n)^(n(1+eps)).
struct SelectionTrialResult {
    std::size_t n = 0;
    double epsilon = 0.0;
    std::size_t draws_per_trial = 0;
    std::size_t trials = 0;
    std::vector<std::size_t> unselected_counts;  // one entry per trial
    double empirical_mean = 0.0;
    double predicted_mean = 0.0;
};

// Trial t draws from Rng::substream(seed, t).
SelectionTrialResult selection_trial(std::size_t n, double epsilon, std::size_t trials,
                                     std::uint64_t seed);

// Pr(at least gamma nodes unselected) <= C(n, gamma) (1 - 1/n)^(n gamma (1+eps)),
// evaluated in log space and clamped to 1.
double union_bound_unselected(std::size_t n, double epsilon, std::size_t gamma);

// Multiplicative Chernoff factor (e^d / (1+d)^(1+d))^mu for delta >= 0,
// also log-space, bounding Pr(X >= (1+delta) mu).
double chernoff_tail_factor(double mu, double delta);

struct BoundCurves {
    std::size_t n = 0;
    double epsilon = 0.0;
    double mu = 0.0;  // expected unselected count, the Chernoff center
    std::vector<std::pair<std::size_t, double>> union_bound;  // (gamma, bound)
    std::vector<std::pair<double, double>> chernoff;          // (delta, bound)
};

BoundCurves bound_curves(std::size_t n, double epsilon, const std::vector<std::size_t>& gammas,
                         const std::vector<double>& deltas);

// Full pipeline for one seed: grow a tree-collapse DAG and watch the depth
// distribution flatten. fraction_within_bound[i] is measured after
// iteration i+1 against the bound dd < max(2, td / 2^(i+1)).
struct CollapseTrace {
    std::uint64_t seed = 0;
    std::vector<double> fraction_within_bound;
    Histogram final_depths;       // dd over all nodes after the last iteration
    Histogram final_leaf_depths;  // dd over leaves only
    std::size_t exception_count = 0;  // nodes with dd > 2
    IterationLog log;
};

struct CollapseExperimentResult {
    std::size_t n = 0;
    std::uint32_t iterations = 0;
    double epsilon = 0.0;
    std::vector<CollapseTrace> traces;  // in seed order
    double median_exception_count = 0.0;
    // Comparison scale (log2 log2 n)^(log2 log2 n); the experiment passes
    // when the median exception count stays at or below it.
    double exception_threshold = 0.0;
    double min_leaf_fraction_shallow = 0.0;  // worst-seed share of leaves with dd <= 2
    bool within_threshold = false;
};

// epsilon < 0 selects the config default log2(n) - 1.
CollapseExperimentResult collapse_experiment(std::size_t n, std::uint32_t iterations,
                                             double epsilon,
                                             const std::vector<std::uint64_t>& seeds,
                                             unsigned workers = 1);

}  // namespace dagcollapse
