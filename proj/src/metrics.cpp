#include "dagcollapse/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "dagcollapse/errors.hpp"
#include "dagcollapse/rng.hpp"

namespace dagcollapse {

std::uint32_t DepthMap::max() const {
    if (dd.empty()) {
        throw EmptyGraph();
    }
    return *std::max_element(dd.begin(), dd.end());
}

DepthMap depth_map(const Dag& dag) {
    const auto topo = topological_order(dag);
    DepthMap result;
    result.dd.assign(dag.node_count(), std::numeric_limits<std::uint32_t>::max());
    for (NodeId v : topo.order) {
        if (dag.in_degree(v) == 0) {
            result.dd[v] = 0;
            continue;
        }
        std::uint32_t best = std::numeric_limits<std::uint32_t>::max();
        for (NodeId u : dag.in_neighbors(v)) {
            best = std::min(best, result.dd[u] + 1);
        }
        result.dd[v] = best;
    }
    return result;
}

void Histogram::add(std::int64_t value, std::uint64_t count) {
    if (count == 0) {
        return;
    }
    bins_[value] += count;
    total_ += count;
}

void Histogram::merge(const Histogram& other) {
    for (const auto& [value, count] : other.bins_) {
        bins_[value] += count;
    }
    total_ += other.total_;
}

std::int64_t Histogram::min() const {
    if (empty()) {
        throw EmptyHistogram();
    }
    return bins_.begin()->first;
}

std::int64_t Histogram::max() const {
    if (empty()) {
        throw EmptyHistogram();
    }
    return bins_.rbegin()->first;
}

double Histogram::mean() const {
    if (empty()) {
        throw EmptyHistogram();
    }
    double sum = 0.0;
    for (const auto& [value, count] : bins_) {
        sum += static_cast<double>(value) * static_cast<double>(count);
    }
    return sum / static_cast<double>(total_);
}

double Histogram::variance() const {
    const double mu = mean();
    double sum = 0.0;
    for (const auto& [value, count] : bins_) {
        const double d = static_cast<double>(value) - mu;
        sum += d * d * static_cast<double>(count);
    }
    return sum / static_cast<double>(total_);
}

std::int64_t Histogram::quantile(double q) const {
    if (empty()) {
        throw EmptyHistogram();
    }
    if (q < 0.0 || q > 1.0) {
        throw std::invalid_argument("quantile outside [0, 1]");
    }
    const auto rank = static_cast<std::uint64_t>(
        std::max(1.0, std::ceil(q * static_cast<double>(total_))));
    std::uint64_t seen = 0;
    for (const auto& [value, count] : bins_) {
        seen += count;
        if (seen >= rank) {
            return value;
        }
    }
    return bins_.rbegin()->first;  // unreachable, q <= 1
}

double Histogram::fraction_below(std::int64_t threshold) const {
    if (empty()) {
        throw EmptyHistogram();
    }
    std::uint64_t below = 0;
    for (const auto& [value, count] : bins_) {
        if (value >= threshold) {
            break;
        }
        below += count;
    }
    return static_cast<double>(below) / static_cast<double>(total_);
}

std::uint64_t Histogram::count_above(std::int64_t threshold) const {
    std::uint64_t above = 0;
    for (auto it = bins_.upper_bound(threshold); it != bins_.end(); ++it) {
        above += it->second;
    }
    return above;
}

Histogram depth_distribution(const Dag& dag, DepthScope scope) {
    const auto depths = depth_map(dag);
    Histogram hist;
    if (scope == DepthScope::leaves) {
        for (NodeId v : dag.leaves()) {
            hist.add(depths.dd[v]);
        }
    } else {
        for (std::uint32_t d : depths.dd) {
            hist.add(d);
        }
    }
    return hist;
}

Histogram in_degree_histogram(const Dag& dag) {
    Histogram hist;
    for (NodeId v = 0; v < dag.node_count(); ++v) {
        hist.add(static_cast<std::int64_t>(dag.in_degree(v)));
    }
    return hist;
}

Histogram out_degree_histogram(const Dag& dag) {
    Histogram hist;
    for (NodeId v = 0; v < dag.node_count(); ++v) {
        hist.add(static_cast<std::int64_t>(dag.out_degree(v)));
    }
    return hist;
}

namespace {

Histogram sample_walks_single(const Dag& dag, std::size_t walks, Rng rng) {
    const auto& roots = dag.roots();
    Histogram hist;
    for (std::size_t w = 0; w < walks; ++w) {
        NodeId node = roots[rng.index(roots.size())];
        std::int64_t length = 0;
        for (;;) {
            const auto next = dag.out_neighbors(node);
            if (next.empty()) {
                break;
            }
            node = next[rng.index(next.size())];
            ++length;
        }
        hist.add(length);
    }
    return hist;
}

}  // namespace

Histogram rrl_sample(const Dag& dag, std::size_t walks, std::uint64_t seed, unsigned workers) {
    if (dag.node_count() == 0) {
        throw EmptyGraph();
    }
    if (walks == 0) {
        throw ZeroWalks();
    }
    workers = std::max(workers, 1u);

    // Worker w always owns substream w and a fixed share of the walks, so
    // the merged histogram depends only on (seed, workers).
    std::vector<Histogram> parts(workers);
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        const std::size_t share = walks / workers + (w < walks % workers ? 1 : 0);
        if (share == 0) {
            continue;
        }
        threads.emplace_back([&dag, &parts, share, seed, w] {
            parts[w] = sample_walks_single(dag, share, Rng::substream(seed, w));
        });
    }
    for (auto& t : threads) {
        t.join();
    }
    Histogram merged;
    for (const auto& part : parts) {
        merged.merge(part);
    }
    return merged;
}

double WalkDistribution::total_mass() const {
    double sum = 0.0;
    for (const auto& [length, p] : mass) {
        sum += p;
    }
    return sum;
}

double WalkDistribution::fraction_below(std::int64_t threshold) const {
    double sum = 0.0;
    for (const auto& [length, p] : mass) {
        if (length >= threshold) {
            break;
        }
        sum += p;
    }
    return sum;
}

std::int64_t WalkDistribution::max() const {
    if (mass.empty()) {
        throw EmptyHistogram();
    }
    return mass.rbegin()->first;
}

WalkDistribution rrl_exact(const Dag& dag, std::size_t node_cap) {
    if (dag.node_count() == 0) {
        throw EmptyGraph();
    }
    if (dag.node_count() > node_cap) {
        throw CapExceeded(dag.node_count(), node_cap);
    }

    // Push walk mass through the topological order. arriving[v] maps walk
    // length so far to the probability of standing on v with that length.
    std::vector<std::map<std::int64_t, double>> arriving(dag.node_count());
    const double per_root = 1.0 / static_cast<double>(dag.roots().size());
    for (NodeId r : dag.roots()) {
        arriving[r][0] = per_root;
    }

    WalkDistribution result;
    const auto topo = topological_order(dag);
    for (NodeId v : topo.order) {
        auto& mass = arriving[v];
        const auto next = dag.out_neighbors(v);
        if (next.empty()) {
            for (const auto& [length, p] : mass) {
                result.mass[length] += p;
            }
        } else {
            const double split = 1.0 / static_cast<double>(next.size());
            for (NodeId child : next) {
                for (const auto& [length, p] : mass) {
                    arriving[child][length + 1] += p * split;
                }
            }
        }
        mass.clear();
    }
    return result;
}

double total_variation(const Histogram& sampled, const WalkDistribution& exact) {
    if (sampled.empty()) {
        throw EmptyHistogram();
    }
    const double n = static_cast<double>(sampled.total());
    double distance = 0.0;
    auto it = sampled.bins().begin();
    auto jt = exact.mass.begin();
    while (it != sampled.bins().end() || jt != exact.mass.end()) {
        double p_hat = 0.0;
        double p = 0.0;
        if (jt == exact.mass.end() || (it != sampled.bins().end() && it->first < jt->first)) {
            p_hat = static_cast<double>(it->second) / n;
            ++it;
        } else if (it == sampled.bins().end() || jt->first < it->first) {
            p = jt->second;
            ++jt;
        } else {
            p_hat = static_cast<double>(it->second) / n;
            p = jt->second;
            ++it;
            ++jt;
        }
        distance += std::abs(p_hat - p);
    }
    return distance / 2.0;
}

CollapseVerdict collapse_test(const Histogram& walk_lengths, std::int64_t beta,
                              double threshold) {
    CollapseVerdict verdict;
    verdict.beta = beta;
    verdict.threshold = threshold;
    verdict.fraction_below = walk_lengths.fraction_below(beta);
    verdict.sample_count = walk_lengths.total();
    verdict.collapsed = verdict.fraction_below >= threshold;
    return verdict;
}

GraphSummary summarize(const Dag& dag, std::string name) {
    GraphSummary summary;
    summary.name = std::move(name);
    summary.node_count = dag.node_count();
    summary.edge_count = dag.edge_count();
    summary.degrees = degree_stats(dag);  // throws EmptyGraph first
    const double n = static_cast<double>(dag.node_count());
    summary.edge_factor = static_cast<double>(dag.edge_count()) / n;
    summary.root_factor = static_cast<double>(dag.roots().size()) / n;
    summary.leaf_factor = static_cast<double>(dag.leaves().size()) / n;
    return summary;
}

GraphAnalysis analyze(const Dag& dag, std::string name, const AnalyzeOptions& options) {
    GraphAnalysis analysis;
    analysis.summary = summarize(dag, std::move(name));
    analysis.in_degrees = in_degree_histogram(dag);
    analysis.out_degrees = out_degree_histogram(dag);
    analysis.depths = depth_distribution(dag, DepthScope::all_nodes);
    analysis.leaf_depths = depth_distribution(dag, DepthScope::leaves);
    analysis.walk_lengths = rrl_sample(dag, options.walks, options.seed, options.workers);
    analysis.verdict = collapse_test(analysis.walk_lengths, options.beta, options.threshold);
    return analysis;
}

double safe_ratio(double numerator, double denominator) {
    if (denominator != 0.0) {
        return numerator / denominator;
    }
    return numerator == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
}

namespace {

bool ratio_flagged(double ratio, double factor) {
    return ratio >= factor || ratio <= 1.0 / factor;
}

}  // namespace

ComparisonReport compare(const GraphAnalysis& real, const GraphAnalysis& random,
                         const CompareOptions& options) {
    ComparisonReport report;
    report.real = real.summary;
    report.random = random.summary;
    report.in_variance_ratio =
        safe_ratio(real.summary.degrees.in_variance, random.summary.degrees.in_variance);
    report.out_variance_ratio =
        safe_ratio(real.summary.degrees.out_variance, random.summary.degrees.out_variance);
    report.max_in_degree_ratio =
        safe_ratio(static_cast<double>(real.summary.degrees.max_in_degree),
                   static_cast<double>(random.summary.degrees.max_in_degree));
    report.max_out_degree_ratio =
        safe_ratio(static_cast<double>(real.summary.degrees.max_out_degree),
                   static_cast<double>(random.summary.degrees.max_out_degree));
    report.walk_max_real = real.walk_lengths.max();
    report.walk_max_random = random.walk_lengths.max();
    report.walk_max_ratio = safe_ratio(static_cast<double>(report.walk_max_real),
                                       static_cast<double>(report.walk_max_random));
    report.real_verdict = real.verdict;
    report.random_verdict = random.verdict;

    if (ratio_flagged(report.in_variance_ratio, options.variance_ratio_flag)) {
        report.flags.push_back("in_degree_variance");
    }
    if (ratio_flagged(report.out_variance_ratio, options.variance_ratio_flag)) {
        report.flags.push_back("out_degree_variance");
    }
    if (ratio_flagged(report.walk_max_ratio, options.walk_range_ratio_flag)) {
        report.flags.push_back("walk_length_range");
    }
    if (report.real_verdict.collapsed != report.random_verdict.collapsed) {
        report.flags.push_back("collapse_verdict");
    }
    return report;
}

}  // namespace dagcollapse
