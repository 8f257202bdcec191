#include "dagcollapse/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "dagcollapse/errors.hpp"
#include "dagcollapse/version.hpp"

namespace dagcollapse {

namespace {

constexpr std::uint64_t kMaxNodeId = std::numeric_limits<NodeId>::max();

bool integer_token(const std::string& token) {
    if (token.empty()) {
        return false;
    }
    return std::all_of(token.begin(), token.end(),
                       [](unsigned char c) { return std::isdigit(c) != 0; });
}

NodeId parse_id(const std::string& token, std::size_t line) {
    if (!integer_token(token)) {
        throw ParseError(line, "expected a non-negative integer id, got '" + token + "'");
    }
    std::uint64_t value = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size() || value > kMaxNodeId) {
        throw ParseError(line, "id too large: " + token);
    }
    return static_cast<NodeId>(value);
}

}  // namespace

ReadResult read_edge_list(std::istream& in, const ReadOptions& options) {
    LabelMode mode = options.labels;
    ReadResult result;
    std::vector<Edge> edges;
    std::unordered_map<std::string, NodeId> label_ids;

    const auto intern = [&](const std::string& token) {
        const auto [it, fresh] =
            label_ids.try_emplace(token, static_cast<NodeId>(result.labels.size()));
        if (fresh) {
            result.labels.push_back(token);
        }
        return it->second;
    };

    std::string line;
    std::size_t line_no = 0;
    std::uint64_t max_id = 0;
    bool saw_edge = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        std::istringstream tokens(line);
        std::string a;
        if (!(tokens >> a) || a.front() == '#') {
            continue;
        }
        std::string b;
        std::string extra;
        if (!(tokens >> b) || (tokens >> extra)) {
            throw ParseError(line_no, "expected exactly two tokens per edge");
        }
        if (mode == LabelMode::automatic) {
            mode = integer_token(a) && integer_token(b) ? LabelMode::integer_ids
                                                        : LabelMode::labeled;
        }
        Edge edge;
        if (mode == LabelMode::integer_ids) {
            edge = {parse_id(a, line_no), parse_id(b, line_no)};
        } else {
            edge = {intern(a), intern(b)};
        }
        max_id = std::max({max_id, std::uint64_t{edge.first}, std::uint64_t{edge.second}});
        saw_edge = true;
        edges.push_back(edge);
    }

    std::size_t node_count = 0;
    if (mode == LabelMode::labeled || (mode == LabelMode::automatic && !options.node_count)) {
        if (options.node_count) {
            throw std::invalid_argument("node_count override requires integer ids");
        }
        node_count = result.labels.size();
    } else if (options.node_count) {
        node_count = *options.node_count;
        if (saw_edge && max_id >= node_count) {
            throw NodeIdOutOfRange(static_cast<std::size_t>(max_id), node_count);
        }
    } else if (saw_edge) {
        node_count = static_cast<std::size_t>(max_id) + 1;
    }

    std::sort(edges.begin(), edges.end());
    const auto unique_end = std::unique(edges.begin(), edges.end());
    result.duplicate_edges = static_cast<std::size_t>(edges.end() - unique_end);
    edges.erase(unique_end, edges.end());

    if (options.on_cycle == CycleHandling::drop_back_edges) {
        const auto back = find_back_edges(node_count, edges);
        if (!back.empty()) {
            std::unordered_set<std::uint64_t> doomed;
            doomed.reserve(back.size());
            for (const auto& [u, v] : back) {
                doomed.insert(std::uint64_t{u} * node_count + v);
            }
            std::erase_if(edges, [&](const Edge& e) {
                return doomed.contains(std::uint64_t{e.first} * node_count + e.second);
            });
            result.dropped_back_edges = back.size();
        }
    }

    result.dag = build_dag(node_count, std::move(edges));
    return result;
}

std::string write_edge_list(const Dag& dag) {
    std::string out;
    out.reserve(dag.edge_count() * 12);
    for (const auto& [u, v] : dag.edge_list()) {
        out += std::to_string(u);
        out += ' ';
        out += std::to_string(v);
        out += '\n';
    }
    return out;
}

std::string export_dot(const Dag& dag, const DotOptions& options) {
    if (dag.node_count() > options.node_cap) {
        throw CapExceeded(dag.node_count(), options.node_cap);
    }
    std::string out = "digraph " + options.graph_name + " {\n";
    for (NodeId v = 0; v < dag.node_count(); ++v) {
        if (dag.in_degree(v) == 0 && dag.out_degree(v) == 0) {
            out += "  " + std::to_string(v) + ";\n";
        }
    }
    for (const auto& [u, v] : dag.edge_list()) {
        out += "  " + std::to_string(u) + " -> " + std::to_string(v) + ";\n";
    }
    out += "}\n";
    return out;
}

std::string histogram_csv(const Histogram& hist) {
    std::string out = "value,count\n";
    for (const auto& [value, count] : hist.bins()) {
        out += std::to_string(value);
        out += ',';
        out += std::to_string(count);
        out += '\n';
    }
    return out;
}

std::string iteration_log_csv(const IterationLog& log) {
    std::string out = "iteration,targets_selected,targets_unselected,edges_inserted,edges_skipped\n";
    for (const auto& s : log) {
        out += std::to_string(s.iteration) + ',' + std::to_string(s.targets_selected) + ',' +
               std::to_string(s.targets_unselected) + ',' + std::to_string(s.edges_inserted) +
               ',' + std::to_string(s.edges_skipped) + '\n';
    }
    return out;
}

namespace {

// Non-finite doubles have no JSON number form; nlohmann would emit null on
// dump anyway, so make the mapping explicit and reversible.
json finite_or_null(double value) {
    if (std::isfinite(value)) {
        return value;
    }
    return nullptr;
}

double double_from(const json& j) {
    if (j.is_null()) {
        return std::numeric_limits<double>::infinity();
    }
    return j.get<double>();
}

const json& field(const json& j, const char* key) {
    const auto it = j.find(key);
    if (it == j.end()) {
        throw SerializationError(std::string("missing field '") + key + "'");
    }
    return *it;
}

}  // namespace

json to_json(const Histogram& hist) {
    json bins = json::array();
    for (const auto& [value, count] : hist.bins()) {
        bins.push_back({value, count});
    }
    return {{"total", hist.total()}, {"bins", std::move(bins)}};
}

Histogram histogram_from_json(const json& j) {
    Histogram hist;
    for (const auto& bin : field(j, "bins")) {
        hist.add(bin.at(0).get<std::int64_t>(), bin.at(1).get<std::uint64_t>());
    }
    if (hist.total() != field(j, "total").get<std::uint64_t>()) {
        throw SerializationError("histogram bins do not add up to the declared total");
    }
    return hist;
}

json to_json(const DegreeStats& stats) {
    return {{"in_mean", stats.in_mean},
            {"in_variance", stats.in_variance},
            {"out_mean", stats.out_mean},
            {"out_variance", stats.out_variance},
            {"max_in_degree", stats.max_in_degree},
            {"max_out_degree", stats.max_out_degree}};
}

namespace {

DegreeStats degree_stats_from_json(const json& j) {
    DegreeStats stats;
    stats.in_mean = field(j, "in_mean").get<double>();
    stats.in_variance = field(j, "in_variance").get<double>();
    stats.out_mean = field(j, "out_mean").get<double>();
    stats.out_variance = field(j, "out_variance").get<double>();
    stats.max_in_degree = field(j, "max_in_degree").get<std::size_t>();
    stats.max_out_degree = field(j, "max_out_degree").get<std::size_t>();
    return stats;
}

}  // namespace

json to_json(const GraphSummary& summary) {
    return {{"name", summary.name},
            {"node_count", summary.node_count},
            {"edge_count", summary.edge_count},
            {"edge_factor", summary.edge_factor},
            {"root_factor", summary.root_factor},
            {"leaf_factor", summary.leaf_factor},
            {"degrees", to_json(summary.degrees)}};
}

GraphSummary summary_from_json(const json& j) {
    GraphSummary summary;
    summary.name = field(j, "name").get<std::string>();
    summary.node_count = field(j, "node_count").get<std::size_t>();
    summary.edge_count = field(j, "edge_count").get<std::size_t>();
    summary.edge_factor = field(j, "edge_factor").get<double>();
    summary.root_factor = field(j, "root_factor").get<double>();
    summary.leaf_factor = field(j, "leaf_factor").get<double>();
    summary.degrees = degree_stats_from_json(field(j, "degrees"));
    return summary;
}

json to_json(const CollapseVerdict& verdict) {
    return {{"beta", verdict.beta},
            {"threshold", verdict.threshold},
            {"fraction_below", verdict.fraction_below},
            {"sample_count", verdict.sample_count},
            {"collapsed", verdict.collapsed}};
}

CollapseVerdict verdict_from_json(const json& j) {
    CollapseVerdict verdict;
    verdict.beta = field(j, "beta").get<std::int64_t>();
    verdict.threshold = field(j, "threshold").get<double>();
    verdict.fraction_below = field(j, "fraction_below").get<double>();
    verdict.sample_count = field(j, "sample_count").get<std::uint64_t>();
    verdict.collapsed = field(j, "collapsed").get<bool>();
    return verdict;
}

json to_json(const GraphAnalysis& analysis) {
    return {{"summary", to_json(analysis.summary)},
            {"in_degrees", to_json(analysis.in_degrees)},
            {"out_degrees", to_json(analysis.out_degrees)},
            {"depths", to_json(analysis.depths)},
            {"leaf_depths", to_json(analysis.leaf_depths)},
            {"walk_lengths", to_json(analysis.walk_lengths)},
            {"verdict", to_json(analysis.verdict)}};
}

GraphAnalysis analysis_from_json(const json& j) {
    GraphAnalysis analysis;
    analysis.summary = summary_from_json(field(j, "summary"));
    analysis.in_degrees = histogram_from_json(field(j, "in_degrees"));
    analysis.out_degrees = histogram_from_json(field(j, "out_degrees"));
    analysis.depths = histogram_from_json(field(j, "depths"));
    analysis.leaf_depths = histogram_from_json(field(j, "leaf_depths"));
    analysis.walk_lengths = histogram_from_json(field(j, "walk_lengths"));
    analysis.verdict = verdict_from_json(field(j, "verdict"));
    return analysis;
}

json to_json(const ComparisonReport& report) {
    return {{"real", to_json(report.real)},
            {"random", to_json(report.random)},
            {"in_variance_ratio", finite_or_null(report.in_variance_ratio)},
            {"out_variance_ratio", finite_or_null(report.out_variance_ratio)},
            {"max_in_degree_ratio", finite_or_null(report.max_in_degree_ratio)},
            {"max_out_degree_ratio", finite_or_null(report.max_out_degree_ratio)},
            {"walk_max_ratio", finite_or_null(report.walk_max_ratio)},
            {"walk_max_real", report.walk_max_real},
            {"walk_max_random", report.walk_max_random},
            {"real_verdict", to_json(report.real_verdict)},
            {"random_verdict", to_json(report.random_verdict)},
            {"flags", report.flags}};
}

ComparisonReport comparison_from_json(const json& j) {
    ComparisonReport report;
    report.real = summary_from_json(field(j, "real"));
    report.random = summary_from_json(field(j, "random"));
    report.in_variance_ratio = double_from(field(j, "in_variance_ratio"));
    report.out_variance_ratio = double_from(field(j, "out_variance_ratio"));
    report.max_in_degree_ratio = double_from(field(j, "max_in_degree_ratio"));
    report.max_out_degree_ratio = double_from(field(j, "max_out_degree_ratio"));
    report.walk_max_ratio = double_from(field(j, "walk_max_ratio"));
    report.walk_max_real = field(j, "walk_max_real").get<std::int64_t>();
    report.walk_max_random = field(j, "walk_max_random").get<std::int64_t>();
    report.real_verdict = verdict_from_json(field(j, "real_verdict"));
    report.random_verdict = verdict_from_json(field(j, "random_verdict"));
    report.flags = field(j, "flags").get<std::vector<std::string>>();
    return report;
}

json to_json(const MatchProfile& profile) {
    return {{"node_count", profile.node_count},
            {"edge_count", profile.edge_count},
            {"root_count", profile.root_count},
            {"leaf_count", profile.leaf_count}};
}

json to_json(const IterationStats& stats) {
    return {{"iteration", stats.iteration},
            {"targets_selected", stats.targets_selected},
            {"targets_unselected", stats.targets_unselected},
            {"edges_inserted", stats.edges_inserted},
            {"edges_skipped", stats.edges_skipped}};
}

json to_json(const DepthReductionResult& result) {
    return {{"target_depth", result.target_depth},
            {"eligible_sources", result.eligible_sources},
            {"favorable_sources", result.favorable_sources},
            {"samples", result.samples},
            {"exact_probability", result.exact_probability},
            {"empirical_probability", result.empirical_probability}};
}

json to_json(const SelectionTrialResult& result) {
    return {{"n", result.n},
            {"epsilon", result.epsilon},
            {"draws_per_trial", result.draws_per_trial},
            {"trials", result.trials},
            {"predicted_mean", result.predicted_mean},
            {"empirical_mean", result.empirical_mean},
            {"unselected_counts", result.unselected_counts}};
}

json to_json(const BoundCurves& curves) {
    json union_points = json::array();
    for (const auto& [gamma, bound] : curves.union_bound) {
        union_points.push_back({gamma, bound});
    }
    json chernoff_points = json::array();
    for (const auto& [delta, bound] : curves.chernoff) {
        chernoff_points.push_back({delta, bound});
    }
    return {{"n", curves.n},
            {"epsilon", curves.epsilon},
            {"mu", curves.mu},
            {"union_bound", std::move(union_points)},
            {"chernoff", std::move(chernoff_points)}};
}

json to_json(const CollapseTrace& trace) {
    json iterations = json::array();
    for (const auto& stats : trace.log) {
        iterations.push_back(to_json(stats));
    }
    return {{"seed", trace.seed},
            {"fraction_within_bound", trace.fraction_within_bound},
            {"exception_count", trace.exception_count},
            {"final_depths", to_json(trace.final_depths)},
            {"final_leaf_depths", to_json(trace.final_leaf_depths)},
            {"iterations", std::move(iterations)}};
}

json to_json(const CollapseExperimentResult& result) {
    json traces = json::array();
    for (const auto& trace : result.traces) {
        traces.push_back(to_json(trace));
    }
    return {{"n", result.n},
            {"iterations", result.iterations},
            {"epsilon", result.epsilon},
            {"median_exception_count", result.median_exception_count},
            {"exception_threshold", result.exception_threshold},
            {"min_leaf_fraction_shallow", result.min_leaf_fraction_shallow},
            {"within_threshold", result.within_threshold},
            {"traces", std::move(traces)}};
}

namespace {

void validate_report(const AnalysisReport& report) {
    for (const auto& graph : report.graphs) {
        const auto n = graph.summary.node_count;
        if (graph.in_degrees.total() != n || graph.out_degrees.total() != n ||
            graph.depths.total() != n) {
            throw SerializationError("graph '" + graph.summary.name +
                                     "': histogram totals disagree with the node count");
        }
        if (graph.walk_lengths.total() != graph.verdict.sample_count) {
            throw SerializationError("graph '" + graph.summary.name +
                                     "': verdict sample count disagrees with the walk histogram");
        }
    }
}

}  // namespace

json to_json(const AnalysisReport& report) {
    json graphs = json::array();
    for (const auto& graph : report.graphs) {
        graphs.push_back(to_json(graph));
    }
    return {{"schema_version", kReportSchemaVersion},
            {"tool", {{"name", kToolName}, {"version", report.tool_version}}},
            {"metadata", report.metadata},
            {"graphs", std::move(graphs)}};
}

AnalysisReport report_from_json(const json& j) {
    if (field(j, "schema_version").get<int>() != kReportSchemaVersion) {
        throw SerializationError("unsupported report schema version");
    }
    AnalysisReport report;
    report.tool_version = field(field(j, "tool"), "version").get<std::string>();
    report.metadata = field(j, "metadata");
    for (const auto& graph : field(j, "graphs")) {
        report.graphs.push_back(analysis_from_json(graph));
    }
    return report;
}

void write_report(std::ostream& out, const AnalysisReport& report) {
    validate_report(report);
    out << to_json(report).dump(2) << '\n';
}

AnalysisReport read_report(std::istream& in) {
    json j;
    try {
        j = json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw SerializationError(std::string("bad report JSON: ") + e.what());
    }
    return report_from_json(j);
}

MatchProfile read_profile(std::istream& in) {
    json j;
    try {
        j = json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw SerializationError(std::string("bad profile JSON: ") + e.what());
    }
    MatchProfile profile;
    profile.node_count = field(j, "node_count").get<std::size_t>();
    profile.edge_count = field(j, "edge_count").get<std::size_t>();
    profile.root_count = field(j, "root_count").get<std::size_t>();
    profile.leaf_count = field(j, "leaf_count").get<std::size_t>();
    return profile;
}

void write_profile(std::ostream& out, const MatchProfile& profile) {
    out << to_json(profile).dump(2) << '\n';
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot write " + path.string());
    }
    out << content;
    if (!out) {
        throw Error("write failed for " + path.string());
    }
}

}  // namespace dagcollapse
