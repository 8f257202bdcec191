// Command line front end: generate DAGs, measure their collapse behaviour,
// compare real graphs against random counterparts, and re-run recorded
// configurations. Every run that writes files gets a manifest.json holding
// the exact configuration, so `replay` can reproduce it byte for byte.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dagcollapse/errors.hpp"
#include "dagcollapse/generate.hpp"
#include "dagcollapse/io.hpp"
#include "dagcollapse/metrics.hpp"
#include "dagcollapse/theory.hpp"
#include "dagcollapse/version.hpp"

namespace fs = std::filesystem;
using dagcollapse::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitError = 2;

struct OutputSink {
    std::optional<fs::path> dir;
    std::vector<std::string> written;

    bool to_files() const { return dir.has_value(); }

    void write(const std::string& name, const std::string& content) {
        if (!dir) {
            return;
        }
        dagcollapse::write_text_file(*dir / name, content);
        written.push_back(name);
    }
};

std::string fixed(double value, int digits = 6) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(digits) << value;
    return out.str();
}

std::string percent(double fraction) {
    return fixed(fraction * 100.0, 2) + "%";
}

dagcollapse::ReadOptions read_options_from(const json& config) {
    dagcollapse::ReadOptions options;
    if (config.value("lenient", false)) {
        options.on_cycle = dagcollapse::CycleHandling::drop_back_edges;
    }
    const std::string labels = config.value("labels", "auto");
    if (labels == "integer") {
        options.labels = dagcollapse::LabelMode::integer_ids;
    } else if (labels == "labeled") {
        options.labels = dagcollapse::LabelMode::labeled;
    }
    if (config.contains("nodes") && !config["nodes"].is_null()) {
        options.node_count = config["nodes"].get<std::size_t>();
    }
    return options;
}

dagcollapse::ReadResult read_graph(const std::string& path, const json& config) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw dagcollapse::Error("cannot open " + path);
    }
    return dagcollapse::read_edge_list(in, read_options_from(config));
}

dagcollapse::MatchProfile profile_from_config(const json& j) {
    dagcollapse::MatchProfile profile;
    profile.node_count = j.at("node_count").get<std::size_t>();
    profile.edge_count = j.at("edge_count").get<std::size_t>();
    profile.root_count = j.at("root_count").get<std::size_t>();
    profile.leaf_count = j.at("leaf_count").get<std::size_t>();
    return profile;
}

std::string verdict_line(const dagcollapse::CollapseVerdict& v) {
    std::ostringstream out;
    out << (v.collapsed ? "collapsed" : "not collapsed") << ": " << percent(v.fraction_below)
        << " of " << v.sample_count << " walks ran strictly below " << v.beta << " edges"
        << " (needs " << percent(v.threshold) << ")";
    return out.str();
}

// ---------------------------------------------------------------------------
// generate

int run_generate(const json& config, OutputSink& sink) {
    const std::string model = config.at("model").get<std::string>();
    const auto seed = config.at("seed").get<std::uint64_t>();

    dagcollapse::Dag dag;
    std::string detail;
    if (model == "tree-collapse") {
        dagcollapse::GenerationConfig gc;
        gc.n = config.at("nodes").get<std::size_t>();
        gc.iterations = config.at("iterations").get<std::uint32_t>();
        gc.epsilon = config.at("epsilon").is_null() ? -1.0 : config["epsilon"].get<double>();
        gc.seed = seed;
        gc.max_resample_attempts = config.at("max_resample_attempts").get<std::uint32_t>();
        auto [built, log] = add_random_edges(dagcollapse::complete_binary_tree(gc.n), gc);
        dag = std::move(built);
        sink.write("iteration_log.csv", dagcollapse::iteration_log_csv(log));
        std::size_t skipped = 0;
        for (const auto& stats : log) {
            skipped += stats.edges_skipped;
        }
        std::ostringstream d;
        d << gc.iterations << " iterations of " << gc.edge_budget() << " edge draws"
          << " (epsilon " << fixed(gc.resolved_epsilon(), 4) << ", " << skipped
          << " draws skipped)";
        detail = d.str();
    } else if (model == "rank-random") {
        dag = dagcollapse::rank_random_dag(config.at("nodes").get<std::size_t>(),
                                           config.at("edges").get<std::size_t>(), seed);
        detail = "uniform rank order";
    } else if (model == "matched") {
        const auto profile = profile_from_config(config.at("profile"));
        dag = dagcollapse::matched_random(profile, seed);
        std::ostringstream d;
        d << "matched profile of " << profile.node_count << " nodes, kept " << dag.node_count()
          << " after dropping isolated ones";
        detail = d.str();
    } else {
        throw dagcollapse::Error("unknown model '" + model + "'");
    }

    const std::string edges_text = dagcollapse::write_edge_list(dag);
    sink.write("edges.txt", edges_text);

    std::ostream& info = sink.to_files() ? std::cout : std::cerr;
    info << "generated " << model << " graph: " << dag.node_count() << " nodes, "
         << dag.edge_count() << " edges, " << dag.roots().size() << " roots, "
         << dag.leaves().size() << " leaves" << '\n';
    if (!detail.empty()) {
        info << "  " << detail << '\n';
    }
    if (!sink.to_files()) {
        std::cout << edges_text;
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// analyze

int run_analyze(const json& config, OutputSink& sink) {
    const auto read = read_graph(config.at("input").get<std::string>(), config);

    dagcollapse::AnalyzeOptions options;
    options.walks = config.at("walks").get<std::size_t>();
    options.seed = config.at("seed").get<std::uint64_t>();
    options.workers = config.at("workers").get<unsigned>();
    options.beta = config.at("beta").get<std::int64_t>();
    options.threshold = config.at("threshold").get<double>();

    const auto analysis =
        dagcollapse::analyze(read.dag, config.at("name").get<std::string>(), options);

    dagcollapse::AnalysisReport report;
    report.tool_version = std::string(dagcollapse::kToolVersion);
    report.metadata = {{"input", config.at("input")},
                       {"seed", options.seed},
                       {"walks", options.walks},
                       {"workers", options.workers},
                       {"duplicate_edges", read.duplicate_edges},
                       {"dropped_back_edges", read.dropped_back_edges}};
    report.graphs.push_back(analysis);

    std::ostringstream report_text;
    dagcollapse::write_report(report_text, report);
    sink.write("report.json", report_text.str());

    std::ostringstream profile_text;
    dagcollapse::write_profile(profile_text, dagcollapse::profile_of(read.dag));
    sink.write("profile.json", profile_text.str());

    sink.write("depth.csv", dagcollapse::histogram_csv(analysis.depths));
    sink.write("leaf_depth.csv", dagcollapse::histogram_csv(analysis.leaf_depths));
    sink.write("rrl.csv", dagcollapse::histogram_csv(analysis.walk_lengths));
    sink.write("in_degree.csv", dagcollapse::histogram_csv(analysis.in_degrees));
    sink.write("out_degree.csv", dagcollapse::histogram_csv(analysis.out_degrees));

    const auto& s = analysis.summary;
    std::cout << s.name << ": " << s.node_count << " nodes, " << s.edge_count
              << " edges (factor " << fixed(s.edge_factor, 2) << "), depth max "
              << analysis.depths.max() << ", walk max " << analysis.walk_lengths.max() << '\n';
    if (read.duplicate_edges > 0 || read.dropped_back_edges > 0) {
        std::cout << "  input cleanup: " << read.duplicate_edges << " duplicate edges, "
                  << read.dropped_back_edges << " back edges dropped" << '\n';
    }
    std::cout << "  " << verdict_line(analysis.verdict) << '\n';
    if (!sink.to_files()) {
        std::cout << dagcollapse::to_json(report).dump(2) << '\n';
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// compare

int run_compare(const json& config, OutputSink& sink) {
    const std::string input = config.at("input").get<std::string>();
    const std::string against = config.at("against").get<std::string>();
    const auto seed = config.at("seed").get<std::uint64_t>();

    dagcollapse::AnalyzeOptions options;
    options.walks = config.at("walks").get<std::size_t>();
    options.seed = seed;
    options.workers = config.at("workers").get<unsigned>();
    options.beta = config.at("beta").get<std::int64_t>();
    options.threshold = config.at("threshold").get<double>();

    const auto read = read_graph(input, config);
    const std::string name = config.at("name").get<std::string>();
    const auto real = dagcollapse::analyze(read.dag, name, options);

    dagcollapse::GraphAnalysis random;
    if (against == "matched-random") {
        const auto counterpart =
            dagcollapse::matched_random(dagcollapse::profile_of(read.dag), seed);
        random = dagcollapse::analyze(counterpart, name + "-rand", options);
        sink.write("counterpart_edges.txt", dagcollapse::write_edge_list(counterpart));
    } else {
        const auto other = read_graph(against, config);
        random = dagcollapse::analyze(other.dag, fs::path(against).stem().string(), options);
    }

    const auto report = dagcollapse::compare(real, random);
    const json document = {{"schema_version", dagcollapse::kReportSchemaVersion},
                           {"tool",
                            {{"name", dagcollapse::kToolName},
                             {"version", dagcollapse::kToolVersion}}},
                           {"metadata",
                            {{"input", input}, {"against", against}, {"seed", seed},
                             {"walks", options.walks}}},
                           {"comparison", to_json(report)}};
    sink.write("comparison.json", document.dump(2) + "\n");

    std::cout << report.real.name << " vs " << report.random.name << ":\n";
    std::cout << "  in-degree variance " << fixed(report.real.degrees.in_variance, 4) << " vs "
              << fixed(report.random.degrees.in_variance, 4) << " (ratio "
              << fixed(report.in_variance_ratio, 3) << ")\n";
    std::cout << "  walk length max " << report.walk_max_real << " vs "
              << report.walk_max_random << " (ratio " << fixed(report.walk_max_ratio, 3)
              << ")\n";
    std::cout << "  " << report.real.name << " " << verdict_line(report.real_verdict) << '\n';
    std::cout << "  " << report.random.name << " " << verdict_line(report.random_verdict)
              << '\n';
    if (report.flags.empty()) {
        std::cout << "  no structural flags raised" << '\n';
    } else {
        std::cout << "  flags:";
        for (const auto& flag : report.flags) {
            std::cout << ' ' << flag;
        }
        std::cout << '\n';
    }
    if (!sink.to_files()) {
        std::cout << document.dump(2) << '\n';
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// verify

struct Check {
    std::string name;
    bool pass;
    std::string detail;
};

int report_checks(const std::string& experiment, const json& config, const json& result,
                  const std::vector<Check>& checks, OutputSink& sink) {
    bool all_pass = true;
    json check_list = json::array();
    for (const auto& check : checks) {
        all_pass = all_pass && check.pass;
        std::cout << (check.pass ? "[PASS] " : "[FAIL] ") << check.name << ": " << check.detail
                  << '\n';
        check_list.push_back({{"name", check.name}, {"pass", check.pass},
                              {"detail", check.detail}});
    }
    const json document = {{"schema_version", dagcollapse::kReportSchemaVersion},
                           {"tool",
                            {{"name", dagcollapse::kToolName},
                             {"version", dagcollapse::kToolVersion}}},
                           {"experiment", experiment},
                           {"config", config},
                           {"pass", all_pass},
                           {"checks", std::move(check_list)},
                           {"result", result}};
    sink.write("report.json", document.dump(2) + "\n");
    if (!sink.to_files()) {
        std::cout << document.dump(2) << '\n';
    }
    return all_pass ? kExitOk : kExitCheckFailed;
}

int run_verify_lemma1(const json& config, OutputSink& sink) {
    const auto depth = config.at("depth").get<std::uint32_t>();
    std::size_t nodes = config.contains("nodes") && !config["nodes"].is_null()
                            ? config["nodes"].get<std::size_t>()
                            : (std::size_t{1} << (depth + 1)) - 1;
    const auto tree = dagcollapse::complete_binary_tree(nodes);
    const auto result = dagcollapse::depth_reduction_trial(
        tree, depth, config.at("samples").get<std::size_t>(),
        config.at("seed").get<std::uint64_t>());

    const double gap = std::abs(result.empirical_probability - result.exact_probability);
    const double tolerance = config.at("tolerance").get<double>();
    std::ostringstream detail;
    detail << "empirical " << fixed(result.empirical_probability) << " vs exact "
           << fixed(result.exact_probability) << " (" << result.favorable_sources << " of "
           << result.eligible_sources << " sources favorable), gap " << fixed(gap)
           << " within " << fixed(tolerance, 4);
    std::vector<Check> checks = {
        {"depth-reduction probability", gap <= tolerance, detail.str()}};
    return report_checks("lemma1", config, to_json(result), checks, sink);
}

int run_verify_selection(const json& config, OutputSink& sink) {
    const auto result = dagcollapse::selection_trial(
        config.at("n").get<std::size_t>(), config.at("epsilon").get<double>(),
        config.at("trials").get<std::size_t>(), config.at("seed").get<std::uint64_t>());

    // Pass band: the 5% relative tolerance, widened to four standard errors
    // when the expectation is so small that single trials dominate.
    double variance = 0.0;
    for (const auto count : result.unselected_counts) {
        const double d = static_cast<double>(count) - result.empirical_mean;
        variance += d * d;
    }
    variance /= static_cast<double>(result.trials);
    const double stderr_mean = std::sqrt(variance / static_cast<double>(result.trials));
    const double band = std::max(0.05 * result.predicted_mean, 4.0 * stderr_mean);
    const double gap = std::abs(result.empirical_mean - result.predicted_mean);

    std::ostringstream detail;
    detail << "empirical mean " << fixed(result.empirical_mean, 4) << " vs predicted "
           << fixed(result.predicted_mean, 4) << " over " << result.trials << " trials, gap "
           << fixed(gap, 4) << " within " << fixed(band, 4);
    std::vector<Check> checks = {{"unselected-node count", gap <= band, detail.str()}};
    return report_checks("selection", config, to_json(result), checks, sink);
}

int run_verify_bounds(const json& config, OutputSink& sink) {
    std::vector<std::size_t> gammas;
    for (std::size_t g = config.at("gamma_from").get<std::size_t>();
         g <= config.at("gamma_to").get<std::size_t>();
         g += config.at("gamma_step").get<std::size_t>()) {
        gammas.push_back(g);
    }
    std::vector<double> deltas;
    const double step = config.at("delta_step").get<double>();
    for (double d = config.at("delta_from").get<double>();
         d <= config.at("delta_to").get<double>() + 1e-12; d += step) {
        deltas.push_back(d);
    }
    const auto curves = dagcollapse::bound_curves(config.at("n").get<std::size_t>(),
                                                  config.at("epsilon").get<double>(), gammas,
                                                  deltas);
    std::ostringstream detail;
    detail << gammas.size() << " union-bound points, " << deltas.size()
           << " tail-factor points, mu " << fixed(curves.mu, 6);
    std::vector<Check> checks = {{"bound tabulation", true, detail.str()}};
    return report_checks("bounds", config, to_json(curves), checks, sink);
}

int run_verify_collapse(const json& config, OutputSink& sink) {
    const auto seed_count = config.at("seeds").get<std::size_t>();
    const auto base = config.at("seed").get<std::uint64_t>();
    std::vector<std::uint64_t> seeds(seed_count);
    for (std::size_t i = 0; i < seed_count; ++i) {
        seeds[i] = base + i;
    }
    const auto result = dagcollapse::collapse_experiment(
        config.at("n").get<std::size_t>(), config.at("iterations").get<std::uint32_t>(),
        config.at("epsilon").is_null() ? -1.0 : config["epsilon"].get<double>(), seeds,
        config.at("workers").get<unsigned>());

    std::ostringstream detail;
    detail << "median nodes deeper than 2: " << fixed(result.median_exception_count, 1)
           << " across " << seeds.size() << " seeds, threshold "
           << fixed(result.exception_threshold, 2) << ", worst leaf share at depth <= 2 "
           << percent(result.min_leaf_fraction_shallow);
    std::vector<Check> checks = {
        {"depth collapse", result.within_threshold, detail.str()}};
    return report_checks("collapse", config, to_json(result), checks, sink);
}

// ---------------------------------------------------------------------------
// export-dot

int run_export_dot(const json& config, OutputSink& sink) {
    const auto read = read_graph(config.at("input").get<std::string>(), config);
    dagcollapse::DotOptions options;
    options.graph_name = config.at("graph_name").get<std::string>();
    options.node_cap = config.at("cap").get<std::size_t>();
    const std::string dot = dagcollapse::export_dot(read.dag, options);
    sink.write("graph.dot", dot);
    if (!sink.to_files()) {
        std::cout << dot;
    } else {
        std::cout << "wrote " << read.dag.node_count() << " nodes, " << read.dag.edge_count()
                  << " edges as Graphviz text" << '\n';
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// dispatch + manifest

int dispatch(const std::string& command, const json& config, OutputSink& sink) {
    if (command == "generate") {
        return run_generate(config, sink);
    }
    if (command == "analyze") {
        return run_analyze(config, sink);
    }
    if (command == "compare") {
        return run_compare(config, sink);
    }
    if (command == "export-dot") {
        return run_export_dot(config, sink);
    }
    if (command == "verify-lemma1") {
        return run_verify_lemma1(config, sink);
    }
    if (command == "verify-selection") {
        return run_verify_selection(config, sink);
    }
    if (command == "verify-bounds") {
        return run_verify_bounds(config, sink);
    }
    if (command == "verify-collapse") {
        return run_verify_collapse(config, sink);
    }
    throw dagcollapse::Error("manifest names unknown command '" + command + "'");
}

int run_with_manifest(const std::string& command, const json& config,
                      const std::optional<fs::path>& out_dir) {
    OutputSink sink;
    if (out_dir) {
        fs::create_directories(*out_dir);
        sink.dir = out_dir;
    }
    const auto started = std::chrono::steady_clock::now();
    const int code = dispatch(command, config, sink);
    const auto elapsed = std::chrono::steady_clock::now() - started;

    if (sink.to_files()) {
        const json manifest = {
            {"schema_version", dagcollapse::kReportSchemaVersion},
            {"tool",
             {{"name", dagcollapse::kToolName}, {"version", dagcollapse::kToolVersion}}},
            {"command", command},
            {"config", config},
            {"outputs", sink.written},
            {"duration_ms",
             std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count()}};
        dagcollapse::write_text_file(*sink.dir / "manifest.json", manifest.dump(2) + "\n");
        std::cout << "outputs in " << sink.dir->string() << " (manifest.json records the run)"
                  << '\n';
    }
    return code;
}

int run_replay(const fs::path& manifest_path, const fs::path& out_dir) {
    json manifest;
    try {
        manifest = json::parse(dagcollapse::read_text_file(manifest_path));
    } catch (const nlohmann::json::exception& e) {
        throw dagcollapse::Error("bad manifest: " + std::string(e.what()));
    }
    const std::string command = manifest.at("command").get<std::string>();
    std::cout << "replaying " << command << " from " << manifest_path.string() << '\n';
    return run_with_manifest(command, manifest.at("config"), out_dir);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Random DAG generation and collapse measurement"};
    app.require_subcommand(1);

    std::string out_dir;
    std::string input;
    std::string name;
    std::uint64_t seed = 1;
    std::size_t walks = 100000;
    unsigned workers = 1;
    std::int64_t beta = 10;
    double threshold = 0.99;
    bool lenient = false;
    std::string labels = "auto";
    std::size_t nodes_override = 0;

    const auto add_out = [&](CLI::App* cmd) {
        cmd->add_option("--out", out_dir,
                        "output directory; omit to print to stdout instead of files");
    };
    const auto add_read_flags = [&](CLI::App* cmd) {
        cmd->add_option("--input", input, "edge list file, one 'source target' pair per line")
            ->required();
        cmd->add_flag("--lenient", lenient,
                      "drop back edges found in cyclic input instead of failing");
        cmd->add_option("--labels", labels, "id interpretation (default auto)")
            ->check(CLI::IsMember({"auto", "integer", "labeled"}));
        cmd->add_option("--nodes", nodes_override,
                        "declared node count for integer inputs with isolated trailing nodes");
    };
    const auto add_walk_flags = [&](CLI::App* cmd) {
        cmd->add_option("--walks", walks, "random root-to-leaf walks to sample");
        cmd->add_option("--workers", workers, "sampling threads (deterministic per count)");
        cmd->add_option("--beta", beta, "walk length the collapse test compares against");
        cmd->add_option("--threshold", threshold,
                        "required fraction of walks strictly below beta");
    };
    const auto read_config_json = [&]() {
        json j = {{"lenient", lenient}, {"labels", labels}};
        j["nodes"] = nodes_override > 0 ? json(nodes_override) : json(nullptr);
        return j;
    };

    // generate
    auto* generate = app.add_subcommand("generate", "Build a DAG and write its edge list");
    std::string model;
    std::size_t gen_nodes = 0;
    std::size_t gen_edges = 0;
    std::uint32_t iterations = 1;
    double epsilon = -1.0;
    std::uint32_t max_resample = 100;
    std::string profile_path;
    generate->add_option("--model", model, "tree-collapse, rank-random, or matched")
        ->required()
        ->check(CLI::IsMember({"tree-collapse", "rank-random", "matched"}));
    generate->add_option("--nodes", gen_nodes, "node count");
    generate->add_option("--edges", gen_edges, "edge count (rank-random)");
    generate->add_option("--iterations", iterations, "edge insertion rounds (tree-collapse)");
    generate->add_option("--epsilon", epsilon,
                         "edge budget scale: budget = ceil(n*(1+epsilon)); "
                         "default log2(n) - 1");
    generate->add_option("--max-resample", max_resample,
                         "draw retries before a duplicate edge slot is skipped");
    generate->add_option("--profile", profile_path, "profile JSON to match (matched)");
    generate->add_option("--seed", seed, "random seed")->required();
    add_out(generate);

    // analyze
    auto* analyze = app.add_subcommand(
        "analyze", "Measure degrees, depths, and walk lengths of an edge list");
    add_read_flags(analyze);
    analyze->add_option("--name", name, "graph name used in the report (default: file stem)");
    analyze->add_option("--seed", seed, "random seed for walk sampling")->required();
    add_walk_flags(analyze);
    add_out(analyze);

    // compare
    auto* compare = app.add_subcommand(
        "compare", "Compare a graph against another graph or its matched-random counterpart");
    add_read_flags(compare);
    std::string against;
    compare->add_option("--against", against,
                        "second edge list, or 'matched-random' to generate the counterpart")
        ->required();
    compare->add_option("--name", name, "name for the first graph (default: file stem)");
    compare->add_option("--seed", seed, "random seed for walks and the counterpart")
        ->required();
    add_walk_flags(compare);
    add_out(compare);

    // verify
    auto* verify = app.add_subcommand(
        "verify", "Run a named statistical experiment and check its tolerance");
    verify->require_subcommand(1);
    std::uint32_t depth = 15;
    std::size_t samples = 100000;
    double tolerance = 0.01;
    std::size_t vn = 0;
    std::size_t trials = 200;
    std::size_t seed_count = 30;
    double v_epsilon = -1.0;
    std::size_t gamma_from = 1;
    std::size_t gamma_to = 16;
    std::size_t gamma_step = 1;
    double delta_from = 0.0;
    double delta_to = 4.0;
    double delta_step = 0.5;
    std::size_t tree_nodes = 0;

    auto* lemma1 = verify->add_subcommand(
        "lemma1", "Estimate the chance a random edge source sits two levels above its target");
    lemma1->add_option("--depth", depth, "target tree depth (>= 2)")->required();
    lemma1->add_option("--samples", samples, "source draws");
    lemma1->add_option("--tolerance", tolerance, "allowed |empirical - exact| gap");
    lemma1->add_option("--tree-nodes", tree_nodes,
                       "tree size (default: complete tree of the target depth)");
    lemma1->add_option("--seed", seed, "random seed");
    add_out(lemma1);

    auto* selection = verify->add_subcommand(
        "selection", "Count never-drawn targets against the closed-form expectation");
    selection->add_option("--n", vn, "node count")->required();
    selection->add_option("--epsilon", v_epsilon, "draws per trial = ceil(n*(1+epsilon))")
        ->required();
    selection->add_option("--trials", trials, "independent trials");
    selection->add_option("--seed", seed, "random seed");
    add_out(selection);

    auto* bounds = verify->add_subcommand(
        "bounds", "Tabulate the union and Chernoff tail bounds on unselected nodes");
    bounds->add_option("--n", vn, "node count")->required();
    bounds->add_option("--epsilon", v_epsilon, "edge budget scale")->required();
    bounds->add_option("--gamma-from", gamma_from, "first unselected-count bound point");
    bounds->add_option("--gamma-to", gamma_to, "last unselected-count bound point");
    bounds->add_option("--gamma-step", gamma_step, "gamma stride");
    bounds->add_option("--delta-from", delta_from, "first tail-factor deviation");
    bounds->add_option("--delta-to", delta_to, "last tail-factor deviation");
    bounds->add_option("--delta-step", delta_step, "delta stride");
    add_out(bounds);

    auto* collapse = verify->add_subcommand(
        "collapse", "Grow tree-collapse DAGs over several seeds and check the depth flattening");
    collapse->add_option("--n", vn, "node count")->required();
    collapse->add_option("--iterations", iterations, "edge insertion rounds");
    collapse->add_option("--epsilon", v_epsilon, "edge budget scale (default log2(n) - 1)");
    collapse->add_option("--seeds", seed_count, "number of consecutive seeds to run");
    collapse->add_option("--seed", seed, "first seed");
    collapse->add_option("--workers", workers, "seeds run in parallel");
    add_out(collapse);

    // export-dot
    auto* export_dot = app.add_subcommand("export-dot", "Write a graph as Graphviz text");
    add_read_flags(export_dot);
    std::string graph_name = "dag";
    std::size_t cap = 5000;
    export_dot->add_option("--graph-name", graph_name, "digraph name in the output");
    export_dot->add_option("--cap", cap, "refuse graphs with more nodes than this");
    add_out(export_dot);

    // replay
    auto* replay = app.add_subcommand("replay", "Re-run a recorded manifest configuration");
    std::string manifest_path;
    replay->add_option("--manifest", manifest_path, "manifest.json of an earlier run")
        ->required();
    replay->add_option("--out", out_dir, "output directory for the re-run")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        const std::optional<fs::path> out =
            out_dir.empty() ? std::nullopt : std::optional<fs::path>(out_dir);

        if (*generate) {
            json config = {{"model", model}, {"seed", seed}};
            if (model == "tree-collapse") {
                if (gen_nodes == 0) {
                    throw dagcollapse::Error("tree-collapse needs --nodes");
                }
                config["nodes"] = gen_nodes;
                config["iterations"] = iterations;
                config["epsilon"] = epsilon < 0.0 ? json(nullptr) : json(epsilon);
                config["max_resample_attempts"] = max_resample;
            } else if (model == "rank-random") {
                if (gen_nodes == 0 || generate->count("--edges") == 0) {
                    throw dagcollapse::Error("rank-random needs --nodes and --edges");
                }
                config["nodes"] = gen_nodes;
                config["edges"] = gen_edges;
            } else {
                if (profile_path.empty()) {
                    throw dagcollapse::Error("matched needs --profile");
                }
                std::ifstream in(profile_path, std::ios::binary);
                if (!in) {
                    throw dagcollapse::Error("cannot open " + profile_path);
                }
                config["profile"] = to_json(dagcollapse::read_profile(in));
                config["profile_path"] = profile_path;
            }
            return run_with_manifest("generate", config, out);
        }
        if (*analyze) {
            json config = read_config_json();
            config["input"] = input;
            config["name"] = name.empty() ? fs::path(input).stem().string() : name;
            config["seed"] = seed;
            config["walks"] = walks;
            config["workers"] = workers;
            config["beta"] = beta;
            config["threshold"] = threshold;
            return run_with_manifest("analyze", config, out);
        }
        if (*compare) {
            json config = read_config_json();
            config["input"] = input;
            config["against"] = against;
            config["name"] = name.empty() ? fs::path(input).stem().string() : name;
            config["seed"] = seed;
            config["walks"] = walks;
            config["workers"] = workers;
            config["beta"] = beta;
            config["threshold"] = threshold;
            return run_with_manifest("compare", config, out);
        }
        if (*export_dot) {
            json config = read_config_json();
            config["input"] = input;
            config["graph_name"] = graph_name;
            config["cap"] = cap;
            return run_with_manifest("export-dot", config, out);
        }
        if (*verify) {
            if (*lemma1) {
                json config = {{"depth", depth},
                               {"samples", samples},
                               {"tolerance", tolerance},
                               {"seed", seed}};
                config["nodes"] = tree_nodes > 0 ? json(tree_nodes) : json(nullptr);
                return run_with_manifest("verify-lemma1", config, out);
            }
            if (*selection) {
                const json config = {{"n", vn},
                                     {"epsilon", v_epsilon},
                                     {"trials", trials},
                                     {"seed", seed}};
                return run_with_manifest("verify-selection", config, out);
            }
            if (*bounds) {
                const json config = {{"n", vn},           {"epsilon", v_epsilon},
                                     {"gamma_from", gamma_from}, {"gamma_to", gamma_to},
                                     {"gamma_step", gamma_step}, {"delta_from", delta_from},
                                     {"delta_to", delta_to},     {"delta_step", delta_step}};
                return run_with_manifest("verify-bounds", config, out);
            }
            json config = {{"n", vn},
                           {"iterations", iterations},
                           {"seeds", seed_count},
                           {"seed", seed},
                           {"workers", workers}};
            config["epsilon"] = v_epsilon < 0.0 ? json(nullptr) : json(v_epsilon);
            return run_with_manifest("verify-collapse", config, out);
        }
        if (*replay) {
            return run_replay(manifest_path, out_dir);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    }
    return kExitOk;
}
