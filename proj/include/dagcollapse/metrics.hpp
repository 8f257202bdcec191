#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "dagcollapse/dag.hpp"

namespace dagcollapse {

// dd[v]: length of the shortest root-to-v path. Roots sit at 0; every node
// of a finite DAG is reachable from some root, so the map is total.
struct DepthMap {
    std::vector<std::uint32_t> dd;

    std::uint32_t max() const;
};

DepthMap depth_map(const Dag& dag);

// Sparse integer histogram. Bins stay sorted by value; statistics use the
// population convention (variance divisor N).
class Histogram {
  public:
    void add(std::int64_t value, std::uint64_t count = 1);
    void merge(const Histogram& other);

    const std::map<std::int64_t, std::uint64_t>& bins() const { return bins_; }
    std::uint64_t total() const { return total_; }
    bool empty() const { return total_ == 0; }

    // All of these throw EmptyHistogram when no samples were added.
    std::int64_t min() const;
    std::int64_t max() const;
    double mean() const;
    double variance() const;
    // Lower nearest-rank quantile: smallest value whose cumulative count
    // reaches ceil(q * total). q in [0, 1].
    std::int64_t quantile(double q) const;
    double fraction_below(std::int64_t threshold) const;  // strictly below
    std::uint64_t count_above(std::int64_t threshold) const;  // strictly above

    bool operator==(const Histogram&) const = default;

  private:
    std::map<std::int64_t, std::uint64_t> bins_;
    std::uint64_t total_ = 0;
};

enum class DepthScope { all_nodes, leaves };

Histogram depth_distribution(const Dag& dag, DepthScope scope = DepthScope::all_nodes);
Histogram in_degree_histogram(const Dag& dag);
Histogram out_degree_histogram(const Dag& dag);

// Random root-to-leaf walk lengths: start on a uniform root, follow
// uniform out-edges until a leaf, record edges traversed. Deterministic in
// (seed, workers); worker w draws from Rng::substream(seed, w). Throws
// EmptyGraph or ZeroWalks.
Histogram rrl_sample(const Dag& dag, std::size_t walks, std::uint64_t seed,
                     unsigned workers = 1);

// Exact distribution of the same walk process.
struct WalkDistribution {
    std::map<std::int64_t, double> mass;

    double total_mass() const;  // 1 up to float error
    double fraction_below(std::int64_t threshold) const;
    std::int64_t max() const;  // throws EmptyHistogram when empty
};

// Dynamic program over the topological order; cost grows with node count
// times walk-length support, so refuse graphs above node_cap.
WalkDistribution rrl_exact(const Dag& dag, std::size_t node_cap = 10000);

double total_variation(const Histogram& sampled, const WalkDistribution& exact);

struct CollapseVerdict {
    std::int64_t beta = 10;
    double threshold = 0.99;
    double fraction_below = 0.0;  // walks strictly shorter than beta
    std::uint64_t sample_count = 0;
    bool collapsed = false;

    bool operator==(const CollapseVerdict&) const = default;
};

// A graph counts as collapsed when at least `threshold` of the walk mass
// lies strictly below beta edges.
CollapseVerdict collapse_test(const Histogram& walk_lengths, std::int64_t beta = 10,
                              double threshold = 0.99);

struct GraphSummary {
    std::string name;
    std::size_t node_count = 0;
    std::size_t edge_count = 0;
    double edge_factor = 0.0;  // edges per node
    double root_factor = 0.0;  // roots per node
    double leaf_factor = 0.0;  // leaves per node
    DegreeStats degrees;

    bool operator==(const GraphSummary&) const = default;
};

GraphSummary summarize(const Dag& dag, std::string name);

struct AnalyzeOptions {
    std::size_t walks = 100000;
    std::uint64_t seed = 0;
    unsigned workers = 1;
    std::int64_t beta = 10;
    double threshold = 0.99;
};

struct GraphAnalysis {
    GraphSummary summary;
    Histogram in_degrees;
    Histogram out_degrees;
    Histogram depths;       // dd over all nodes
    Histogram leaf_depths;  // dd over leaves only
    Histogram walk_lengths;
    CollapseVerdict verdict;

    bool operator==(const GraphAnalysis&) const = default;
};

GraphAnalysis analyze(const Dag& dag, std::string name, const AnalyzeOptions& options);

struct CompareOptions {
    // A ratio at or beyond the factor (either direction) raises a flag.
    double variance_ratio_flag = 4.0;
    double walk_range_ratio_flag = 2.0;
};

struct ComparisonReport {
    GraphSummary real;
    GraphSummary random;
    double in_variance_ratio = 1.0;   // real over random, see safe_ratio
    double out_variance_ratio = 1.0;
    double max_in_degree_ratio = 1.0;
    double max_out_degree_ratio = 1.0;
    double walk_max_ratio = 1.0;
    std::int64_t walk_max_real = 0;
    std::int64_t walk_max_random = 0;
    CollapseVerdict real_verdict;
    CollapseVerdict random_verdict;
    std::vector<std::string> flags;

    bool operator==(const ComparisonReport&) const = default;
};

// 0/0 ratios read as 1, x/0 as infinity.
double safe_ratio(double numerator, double denominator);

ComparisonReport compare(const GraphAnalysis& real, const GraphAnalysis& random,
                         const CompareOptions& options = {});

}  // namespace dagcollapse
