#include "dagcollapse/theory.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "dagcollapse/errors.hpp"

namespace dagcollapse {

DepthReductionResult depth_reduction_trial(const SeededTree& tree, std::uint32_t target_depth,
                                           std::size_t samples, std::uint64_t seed) {
    if (target_depth < 2 || target_depth > tree.max_depth()) {
        throw DepthOutOfRange(target_depth, tree.max_depth());
    }
    if (samples == 0) {
        throw std::invalid_argument("need at least one sample");
    }
    const std::size_t n = tree.dag.node_count();
    DepthReductionResult result;
    result.target_depth = target_depth;
    result.samples = samples;
    // Heap layout: ids [0, 2^d - 1) hold every node shallower than depth d.
    result.eligible_sources = std::min(n, (std::size_t{1} << target_depth) - 1);
    result.favorable_sources = std::min(n, (std::size_t{1} << (target_depth - 1)) - 1);
    result.exact_probability = static_cast<double>(result.favorable_sources) /
                               static_cast<double>(result.eligible_sources);

    Rng rng(seed);
    std::size_t favorable = 0;
    for (std::size_t s = 0; s < samples; ++s) {
        if (rng.index(result.eligible_sources) < result.favorable_sources) {
            ++favorable;
        }
    }
    result.empirical_probability =
        static_cast<double>(favorable) / static_cast<double>(samples);
    return result;
}

SelectionTrialResult selection_trial(std::size_t n, double epsilon, std::size_t trials,
                                     std::uint64_t seed) {
    if (n < 1) {
        throw std::invalid_argument("need at least one node");
    }
    if (epsilon < 0.0) {
        throw std::invalid_argument("epsilon must be non-negative");
    }
    if (trials == 0) {
        throw std::invalid_argument("need at least one trial");
    }
    SelectionTrialResult result;
    result.n = n;
    result.epsilon = epsilon;
    result.trials = trials;
    const double exponent = static_cast<double>(n) * (1.0 + epsilon);
    result.draws_per_trial = static_cast<std::size_t>(std::ceil(exponent));
    result.predicted_mean =
        static_cast<double>(n) * std::exp(exponent * std::log1p(-1.0 / static_cast<double>(n)));

    result.unselected_counts.reserve(trials);
    std::vector<char> drawn(n);
    std::uint64_t total_unselected = 0;
    for (std::size_t t = 0; t < trials; ++t) {
        std::fill(drawn.begin(), drawn.end(), 0);
        Rng rng = Rng::substream(seed, t);
        std::size_t distinct = 0;
        for (std::size_t d = 0; d < result.draws_per_trial; ++d) {
            const std::size_t v = rng.index(n);
            if (!drawn[v]) {
                drawn[v] = 1;
                ++distinct;
            }
        }
        const std::size_t unselected = n - distinct;
        result.unselected_counts.push_back(unselected);
        total_unselected += unselected;
    }
    result.empirical_mean =
        static_cast<double>(total_unselected) / static_cast<double>(trials);
    return result;
}

double union_bound_unselected(std::size_t n, double epsilon, std::size_t gamma) {
    if (n < 2 || gamma > n) {
        throw std::invalid_argument("need n >= 2 and gamma <= n");
    }
    const double nd = static_cast<double>(n);
    const double gd = static_cast<double>(gamma);
    const double log_choose =
        std::lgamma(nd + 1.0) - std::lgamma(gd + 1.0) - std::lgamma(nd - gd + 1.0);
    const double log_miss = nd * gd * (1.0 + epsilon) * std::log1p(-1.0 / nd);
    return std::min(1.0, std::exp(log_choose + log_miss));
}

double chernoff_tail_factor(double mu, double delta) {
    if (mu <= 0.0 || delta < 0.0) {
        throw std::invalid_argument("need mu > 0 and delta >= 0");
    }
    const double log_factor = mu * (delta - (1.0 + delta) * std::log1p(delta));
    return std::min(1.0, std::exp(log_factor));
}

BoundCurves bound_curves(std::size_t n, double epsilon, const std::vector<std::size_t>& gammas,
                         const std::vector<double>& deltas) {
    BoundCurves curves;
    curves.n = n;
    curves.epsilon = epsilon;
    const double nd = static_cast<double>(n);
    curves.mu = nd * std::exp(nd * (1.0 + epsilon) * std::log1p(-1.0 / nd));
    curves.union_bound.reserve(gammas.size());
    for (std::size_t gamma : gammas) {
        curves.union_bound.emplace_back(gamma, union_bound_unselected(n, epsilon, gamma));
    }
    curves.chernoff.reserve(deltas.size());
    for (double delta : deltas) {
        curves.chernoff.emplace_back(delta, chernoff_tail_factor(curves.mu, delta));
    }
    return curves;
}

namespace {

CollapseTrace run_trace(std::size_t n, std::uint32_t iterations, double epsilon,
                        std::uint64_t seed) {
    GenerationConfig config;
    config.n = n;
    config.iterations = iterations;
    config.epsilon = epsilon;
    config.seed = seed;

    CollapseTrace trace;
    trace.seed = seed;
    TreeCollapseGenerator generator(complete_binary_tree(n), config);
    const auto& td = generator.tree().td;

    Dag snapshot;
    for (std::uint32_t i = 1; i <= iterations; ++i) {
        generator.step();
        snapshot = generator.current();
        const auto depths = depth_map(snapshot);
        std::size_t within = 0;
        const double scale = std::exp2(-static_cast<double>(i));
        for (std::size_t v = 0; v < n; ++v) {
            const double bound = std::max(2.0, static_cast<double>(td[v]) * scale);
            if (static_cast<double>(depths.dd[v]) < bound) {
                ++within;
            }
        }
        trace.fraction_within_bound.push_back(static_cast<double>(within) /
                                              static_cast<double>(n));
    }

    trace.final_depths = depth_distribution(snapshot, DepthScope::all_nodes);
    trace.final_leaf_depths = depth_distribution(snapshot, DepthScope::leaves);
    trace.exception_count = trace.final_depths.count_above(2);
    trace.log = generator.log();
    return trace;
}

double median_of(std::vector<std::size_t> values) {
    std::sort(values.begin(), values.end());
    const std::size_t mid = values.size() / 2;
    if (values.size() % 2 == 1) {
        return static_cast<double>(values[mid]);
    }
    return (static_cast<double>(values[mid - 1]) + static_cast<double>(values[mid])) / 2.0;
}

}  // namespace

CollapseExperimentResult collapse_experiment(std::size_t n, std::uint32_t iterations,
                                             double epsilon,
                                             const std::vector<std::uint64_t>& seeds,
                                             unsigned workers) {
    if (seeds.empty()) {
        throw std::invalid_argument("need at least one seed");
    }
    GenerationConfig probe;
    probe.n = n;
    probe.iterations = iterations;
    probe.epsilon = epsilon;
    probe.validate();

    CollapseExperimentResult result;
    result.n = n;
    result.iterations = iterations;
    result.epsilon = probe.resolved_epsilon();
    result.traces.resize(seeds.size());

    workers = std::max(1u, std::min(workers, static_cast<unsigned>(seeds.size())));
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        threads.emplace_back([&, w] {
            for (std::size_t i = w; i < seeds.size(); i += workers) {
                result.traces[i] = run_trace(n, iterations, epsilon, seeds[i]);
            }
        });
    }
    for (auto& t : threads) {
        t.join();
    }

    std::vector<std::size_t> exceptions;
    exceptions.reserve(result.traces.size());
    result.min_leaf_fraction_shallow = 1.0;
    for (const auto& trace : result.traces) {
        exceptions.push_back(trace.exception_count);
        const auto& leaves = trace.final_leaf_depths;
        const double shallow =
            1.0 - static_cast<double>(leaves.count_above(2)) / static_cast<double>(leaves.total());
        result.min_leaf_fraction_shallow = std::min(result.min_leaf_fraction_shallow, shallow);
    }
    result.median_exception_count = median_of(std::move(exceptions));
    const double ll = std::log2(std::log2(static_cast<double>(n)));
    result.exception_threshold = std::pow(ll, ll);
    result.within_threshold = result.median_exception_count <= result.exception_threshold;
    return result;
}

}  // namespace dagcollapse
