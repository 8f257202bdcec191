#include "dagcollapse/generate.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "dagcollapse/errors.hpp"

namespace dagcollapse {

namespace {

using u128 = unsigned __int128;

std::uint64_t pair_key(std::uint64_t u, std::uint64_t v, std::uint64_t n) {
    return u * n + v;
}

// Ranks strictly below the source cutoff and at or above the target floor
// can pair up; count the (ru, rv) pairs with ru < rv that respect both.
u128 legal_pair_count(std::size_t n, std::size_t target_floor, std::size_t source_cutoff) {
    u128 total = 0;
    for (std::size_t rv = target_floor; rv < n; ++rv) {
        total += std::min(rv, source_cutoff);
    }
    return total;
}

}  // namespace

SeededTree complete_binary_tree(std::size_t n) {
    if (n < 1) {
        throw std::invalid_argument("tree needs at least one node");
    }
    SeededTree tree;
    tree.td.resize(n);
    std::vector<Edge> edges;
    edges.reserve(n > 0 ? n - 1 : 0);
    for (std::size_t i = 0; i < n; ++i) {
        tree.td[i] = static_cast<std::uint32_t>(std::bit_width(i + 1) - 1);
        for (std::size_t child : {2 * i + 1, 2 * i + 2}) {
            if (child < n) {
                edges.emplace_back(static_cast<NodeId>(i), static_cast<NodeId>(child));
            }
        }
    }
    tree.dag = build_dag(n, std::move(edges));
    return tree;
}

double GenerationConfig::resolved_epsilon() const {
    return epsilon < 0.0 ? std::log2(static_cast<double>(n)) - 1.0 : epsilon;
}

std::size_t GenerationConfig::edge_budget() const {
    const double budget = std::ceil(static_cast<double>(n) * (1.0 + resolved_epsilon()));
    return static_cast<std::size_t>(budget);
}

void GenerationConfig::validate() const {
    if (n < 2) {
        throw std::invalid_argument("need n >= 2");
    }
    if (iterations < 1) {
        throw std::invalid_argument("need at least one iteration");
    }
    if (max_resample_attempts < 1) {
        throw std::invalid_argument("need at least one resample attempt");
    }
}

TreeCollapseGenerator::TreeCollapseGenerator(SeededTree tree, const GenerationConfig& config)
    : tree_(std::move(tree)), config_(config), rng_(config.seed) {
    config_.validate();
    if (tree_.dag.node_count() != config_.n) {
        throw std::invalid_argument("config.n does not match the seeded tree");
    }
    edges_ = tree_.dag.edge_list();
    edge_keys_.reserve(edges_.size() + config_.edge_budget());
    const std::uint64_t n = config_.n;
    for (const auto& [u, v] : edges_) {
        edge_keys_.insert(pair_key(u, v, n));
    }
}

IterationStats TreeCollapseGenerator::step() {
    const std::uint64_t n = config_.n;
    IterationStats stats;
    stats.iteration = ++iterations_done_;

    std::vector<char> drawn(n, 0);
    std::size_t distinct_targets = 0;
    const std::size_t budget = config_.edge_budget();
    edge_keys_.reserve(edge_keys_.size() + budget);

    for (std::size_t slot = 0; slot < budget; ++slot) {
        bool inserted = false;
        for (std::uint32_t attempt = 0; attempt < config_.max_resample_attempts; ++attempt) {
            const std::uint64_t v = 1 + rng_.below(n - 1);  // any non-root
            if (!drawn[v]) {
                drawn[v] = 1;
                ++distinct_targets;
            }
            // Nodes strictly shallower than v are exactly [0, 2^td(v) - 1).
            const std::uint64_t shallow = (std::uint64_t{1} << tree_.td[v]) - 1;
            const std::uint64_t u = rng_.below(shallow);
            if (edge_keys_.insert(pair_key(u, v, n)).second) {
                edges_.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(v));
                inserted = true;
                break;
            }
        }
        if (!inserted) {
            ++stats.edges_skipped;
        }
    }
    stats.targets_selected = distinct_targets;
    stats.targets_unselected = (n - 1) - distinct_targets;
    stats.edges_inserted = budget - stats.edges_skipped;
    log_.push_back(stats);
    return stats;
}

Dag TreeCollapseGenerator::current() const {
    return build_dag(config_.n, edges_);
}

std::pair<Dag, IterationLog> add_random_edges(SeededTree tree, const GenerationConfig& config) {
    TreeCollapseGenerator generator(std::move(tree), config);
    for (std::uint32_t i = 0; i < config.iterations; ++i) {
        generator.step();
    }
    return {generator.current(), generator.log()};
}

namespace {

// Draw `count` distinct legal rank pairs. Rejection sampling is fast while
// the request is a minority of the legal pairs; past half we materialize
// the legal pairs once and take a partial Fisher-Yates prefix, which keeps
// near-saturated requests from coupon-collector stalls.
std::vector<Edge> sample_rank_pairs(std::size_t n, std::size_t count, std::size_t target_floor,
                                    std::size_t source_cutoff, u128 legal, Rng& rng) {
    std::vector<Edge> pairs;
    pairs.reserve(count);
    if (count == 0) {
        return pairs;
    }
    if (u128(count) * 2 > legal) {
        std::vector<Edge> all;
        all.reserve(static_cast<std::size_t>(legal));
        for (std::size_t rv = target_floor; rv < n; ++rv) {
            const std::size_t hi = std::min(rv, source_cutoff);
            for (std::size_t ru = 0; ru < hi; ++ru) {
                all.emplace_back(static_cast<NodeId>(ru), static_cast<NodeId>(rv));
            }
        }
        for (std::size_t k = 0; k < count; ++k) {
            std::swap(all[k], all[k + rng.index(all.size() - k)]);
        }
        all.resize(count);
        return all;
    }

    std::unordered_set<std::uint64_t> seen;
    seen.reserve(count * 2);
    while (pairs.size() < count) {
        const std::uint64_t ru = rng.below(source_cutoff);
        const std::uint64_t rv = target_floor + rng.below(n - target_floor);
        if (ru >= rv) {
            continue;
        }
        if (seen.insert(pair_key(ru, rv, n)).second) {
            pairs.emplace_back(static_cast<NodeId>(ru), static_cast<NodeId>(rv));
        }
    }
    return pairs;
}

}  // namespace

Dag rank_random_dag(std::size_t n, std::size_t edge_count, std::uint64_t seed) {
    if (n < 1) {
        throw std::invalid_argument("need at least one node");
    }
    const u128 legal = u128(n) * (n - 1) / 2;
    if (u128(edge_count) > legal) {
        throw BudgetInfeasible("requested " + std::to_string(edge_count) + " edges, only " +
                               std::to_string(static_cast<unsigned long long>(legal)) +
                               " distinct pairs");
    }
    Rng rng(seed);
    const auto rank_of = rng.permutation(n);  // rank_of[node] = its rank
    std::vector<NodeId> node_at(n);
    for (std::size_t v = 0; v < n; ++v) {
        node_at[rank_of[v]] = static_cast<NodeId>(v);
    }

    auto rank_pairs = sample_rank_pairs(n, edge_count, 1, n - 1, legal, rng);
    std::vector<Edge> edges;
    edges.reserve(rank_pairs.size());
    for (const auto& [ru, rv] : rank_pairs) {
        edges.emplace_back(node_at[ru], node_at[rv]);
    }
    return build_dag(n, std::move(edges));
}

MatchProfile profile_of(const Dag& dag) {
    return {dag.node_count(), dag.edge_count(), dag.roots().size(), dag.leaves().size()};
}

Dag matched_random(const MatchProfile& profile, std::uint64_t seed) {
    const std::size_t n = profile.node_count;
    if (n < 1) {
        throw ProfileInfeasible("profile has no nodes");
    }
    if (profile.root_count < 1 || profile.leaf_count < 1) {
        throw ProfileInfeasible("every finite DAG has a root and a leaf");
    }
    if (profile.root_count > n || profile.leaf_count > n) {
        throw ProfileInfeasible("root or leaf count exceeds node count");
    }
    if (u128(profile.edge_count) > u128(n) * (n - 1) / 2) {
        throw BudgetInfeasible("edge count exceeds the distinct pairs of " + std::to_string(n) +
                               " nodes");
    }

    // Forced roots are the root_count lowest ranks (never a target), forced
    // leaves the leaf_count highest (never a source).
    const std::size_t target_floor = profile.root_count;
    const std::size_t source_cutoff = n - profile.leaf_count;
    const u128 legal =
        target_floor >= n ? 0 : legal_pair_count(n, target_floor, source_cutoff);
    if (u128(profile.edge_count) > legal) {
        throw ProfileInfeasible("root/leaf counts leave too few legal pairs for " +
                                std::to_string(profile.edge_count) + " edges");
    }

    Rng rng(seed);
    const auto rank_of = rng.permutation(n);
    std::vector<NodeId> node_at(n);
    for (std::size_t v = 0; v < n; ++v) {
        node_at[rank_of[v]] = static_cast<NodeId>(v);
    }

    const auto rank_pairs =
        sample_rank_pairs(n, profile.edge_count, target_floor, source_cutoff, legal, rng);

    // Drop untouched nodes and renumber the rest densely, keeping id order.
    std::vector<char> touched(n, 0);
    for (const auto& [ru, rv] : rank_pairs) {
        touched[node_at[ru]] = 1;
        touched[node_at[rv]] = 1;
    }
    std::vector<NodeId> dense_id(n, 0);
    std::size_t kept = 0;
    for (std::size_t v = 0; v < n; ++v) {
        if (touched[v]) {
            dense_id[v] = static_cast<NodeId>(kept++);
        }
    }
    std::vector<Edge> edges;
    edges.reserve(rank_pairs.size());
    for (const auto& [ru, rv] : rank_pairs) {
        edges.emplace_back(dense_id[node_at[ru]], dense_id[node_at[rv]]);
    }
    return build_dag(kept, std::move(edges));
}

}  // namespace dagcollapse
