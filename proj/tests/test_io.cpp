#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>

#include "dagcollapse/errors.hpp"
#include "dagcollapse/generate.hpp"
#include "dagcollapse/io.hpp"
#include "dagcollapse/metrics.hpp"
#include "test_support.hpp"

using namespace dagcollapse;

namespace {

ReadResult read_text(const std::string& text, const ReadOptions& options = {}) {
    std::istringstream in(text);
    return read_edge_list(in, options);
}

}  // namespace

TEST_CASE("edge list reader handles comments, blanks and CRLF") {
    const auto result = read_text(
        "# a comment\n"
        "\n"
        "0 1\r\n"
        "   # indented comment\n"
        "1 2\n"
        "\t\n"
        "0\t2\n");
    CHECK(result.dag.node_count() == 3);
    CHECK(result.dag.edge_count() == 3);
    CHECK(result.duplicate_edges == 0);
    CHECK(result.labels.empty());
}

TEST_CASE("edge list reader counts duplicates once") {
    const auto result = read_text("0 1\n0 1\n1 2\n0 1\n");
    CHECK(result.dag.edge_count() == 2);
    CHECK(result.duplicate_edges == 2);
}

TEST_CASE("edge list reader infers node count from the largest id") {
    const auto result = read_text("0 7\n");
    CHECK(result.dag.node_count() == 8);
    CHECK(result.dag.roots().size() == 7);  // 1..6 are isolated, also roots
}

TEST_CASE("node count override keeps trailing isolated nodes") {
    ReadOptions options;
    options.node_count = 10;
    const auto result = read_text("0 1\n", options);
    CHECK(result.dag.node_count() == 10);

    // Ids must fit under the declared count.
    CHECK_THROWS_AS(read_text("0 10\n", options), NodeIdOutOfRange);

    // The override is meaningless for labeled input.
    options.labels = LabelMode::labeled;
    CHECK_THROWS_AS(read_text("a b\n", options), std::invalid_argument);
}

TEST_CASE("empty input yields an empty graph") {
    const auto result = read_text("# nothing but comments\n\n");
    CHECK(result.dag.node_count() == 0);
    CHECK(result.dag.edge_count() == 0);
}

TEST_CASE("automatic mode goes labeled on the first non-integer line") {
    const auto result = read_text("alpha beta\nbeta gamma\nalpha gamma\n");
    REQUIRE(result.labels.size() == 3);
    CHECK(result.labels[0] == "alpha");
    CHECK(result.labels[1] == "beta");
    CHECK(result.labels[2] == "gamma");
    CHECK(result.dag.node_count() == 3);
    CHECK(result.dag.edge_count() == 3);

    // A minus sign is not part of an id, so this is a label too.
    const auto negative = read_text("-1 2\n");
    CHECK(negative.labels.size() == 2);
    CHECK(negative.labels[0] == "-1");
}

TEST_CASE("automatic mode locks to integers on the first line") {
    // Once the first data line reads as integer ids, a later label is a
    // parse error, reported with its 1-based line number.
    try {
        read_text("0 1\n# fine\nnode2 node3\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line == 3);
    }
}

TEST_CASE("malformed lines report their line numbers") {
    try {
        read_text("0 1\n2\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line == 2);
    }
    try {
        read_text("0 1\n1 2 3\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line == 2);
    }
    // Trailing comments are not supported; the line must be exactly two tokens.
    CHECK_THROWS_AS(read_text("0 1 # shortcut\n"), ParseError);
    // Ids beyond 32 bits are rejected rather than truncated.
    CHECK_THROWS_AS(read_text("0 4294967296\n"), ParseError);
}

TEST_CASE("integer ids are forced when requested") {
    ReadOptions options;
    options.labels = LabelMode::integer_ids;
    CHECK_THROWS_AS(read_text("a b\n", options), ParseError);
}

TEST_CASE("strict mode rejects cycles, lenient mode drops back edges") {
    const std::string cyclic = "0 1\n1 2\n2 0\n3 0\n";
    CHECK_THROWS_AS(read_text(cyclic), CycleDetected);

    ReadOptions lenient;
    lenient.on_cycle = CycleHandling::drop_back_edges;
    const auto result = read_text(cyclic, lenient);
    CHECK(result.dropped_back_edges == 1);
    CHECK(result.dag.edge_count() == 3);
    CHECK(result.dag.node_count() == 4);

    // A self loop is a back edge too.
    const auto self = read_text("0 1\n1 1\n", lenient);
    CHECK(self.dropped_back_edges == 1);
    CHECK(self.dag.edge_count() == 1);
}

TEST_CASE("integer edge lists round trip") {
    for (std::size_t i = 0; i < 20; ++i) {
        const auto dag = test_support::small_random_dag(i);
        ReadOptions options;
        options.node_count = dag.node_count();  // protects isolated nodes
        const auto back = read_text(write_edge_list(dag), options);
        CHECK(back.dag == dag);
    }
}

TEST_CASE("labeled graphs come back with the same structure") {
    const auto labeled = read_text("load parse\nparse check\nload check\ncheck emit\n");
    const auto relisted = read_text(write_edge_list(labeled.dag));
    CHECK(relisted.dag == labeled.dag);
}

TEST_CASE("dot export lists isolated nodes and edges") {
    const auto dag = build_dag(3, {{0, 1}});
    CHECK(export_dot(dag) ==
          "digraph dag {\n"
          "  2;\n"
          "  0 -> 1;\n"
          "}\n");

    DotOptions options;
    options.graph_name = "g";
    options.node_cap = 2;
    CHECK_THROWS_AS(export_dot(dag, options), CapExceeded);
    CHECK(export_dot(build_dag(2, {{0, 1}}), options) ==
          "digraph g {\n"
          "  0 -> 1;\n"
          "}\n");
}

TEST_CASE("csv writers produce stable text") {
    Histogram hist;
    hist.add(2, 3);
    hist.add(0, 1);
    CHECK(histogram_csv(hist) == "value,count\n0,1\n2,3\n");

    IterationLog log;
    log.push_back({1, 10, 2, 9, 1});
    log.push_back({2, 12, 0, 12, 0});
    CHECK(iteration_log_csv(log) ==
          "iteration,targets_selected,targets_unselected,edges_inserted,edges_skipped\n"
          "1,10,2,9,1\n"
          "2,12,0,12,0\n");
}

TEST_CASE("histogram json round trips and checks its total") {
    Histogram hist;
    hist.add(-3, 2);
    hist.add(5, 7);
    const auto j = to_json(hist);
    CHECK(histogram_from_json(j) == hist);

    auto tampered = j;
    tampered["total"] = 4;
    CHECK_THROWS_AS(histogram_from_json(tampered), SerializationError);
    CHECK_THROWS_AS(histogram_from_json(json::object()), SerializationError);
}

TEST_CASE("analysis json round trips") {
    const auto dag = test_support::small_random_dag(4);
    AnalyzeOptions options;
    options.walks = 2000;
    options.seed = 11;
    const auto analysis = analyze(dag, "specimen", options);

    const auto j = to_json(analysis);
    CHECK(analysis_from_json(j) == analysis);
    CHECK(summary_from_json(to_json(analysis.summary)) == analysis.summary);
    CHECK(verdict_from_json(to_json(analysis.verdict)) == analysis.verdict);
}

TEST_CASE("comparison json round trips including infinite ratios") {
    const auto real = build_dag(3, {{0, 1}, {0, 2}});
    const auto random = matched_random(profile_of(real), 5);
    AnalyzeOptions options;
    options.walks = 1000;
    options.seed = 3;
    const auto report =
        compare(analyze(real, "real", options), analyze(random, "random", options));
    CHECK(comparison_from_json(to_json(report)) == report);

    // A zero-variance random side makes ratios infinite; JSON has no
    // infinity literal, so they travel as null.
    ComparisonReport edgy = report;
    edgy.in_variance_ratio = std::numeric_limits<double>::infinity();
    const auto j = to_json(edgy);
    CHECK(j["in_variance_ratio"].is_null());
    const auto back = comparison_from_json(j);
    CHECK(std::isinf(back.in_variance_ratio));
    CHECK(back == edgy);
}

TEST_CASE("report writer validates histogram totals") {
    const auto dag = build_dag(4, {{0, 1}, {0, 2}, {1, 3}, {2, 3}});
    AnalyzeOptions options;
    options.walks = 500;
    options.seed = 2;

    AnalysisReport report;
    report.tool_version = "0.0.0-test";
    report.metadata = {{"seed", 2}};
    report.graphs.push_back(analyze(dag, "diamond", options));

    std::ostringstream out;
    write_report(out, report);

    std::istringstream in(out.str());
    const auto back = read_report(in);
    CHECK(back.tool_version == report.tool_version);
    CHECK(back.metadata == report.metadata);
    REQUIRE(back.graphs.size() == 1);
    CHECK(back.graphs[0] == report.graphs[0]);

    // Corrupt the population and the writer must refuse.
    report.graphs[0].depths.add(99, 5);
    std::ostringstream sink;
    CHECK_THROWS_AS(write_report(sink, report), SerializationError);
}

TEST_CASE("report reader rejects foreign schemas and bad json") {
    AnalysisReport report;
    report.tool_version = "0.0.0-test";
    auto j = to_json(report);
    j["schema_version"] = 999;
    std::istringstream in(j.dump());
    CHECK_THROWS_AS(read_report(in), SerializationError);

    std::istringstream garbage("{not json");
    CHECK_THROWS_AS(read_report(garbage), SerializationError);
}

TEST_CASE("profiles round trip through json text") {
    const MatchProfile profile{120, 340, 7, 15};
    std::ostringstream out;
    write_profile(out, profile);
    std::istringstream in(out.str());
    CHECK(read_profile(in) == profile);

    std::istringstream partial("{\"node_count\": 5}");
    CHECK_THROWS_AS(read_profile(partial), SerializationError);
}

TEST_CASE("theory results serialize with their inputs") {
    const auto tree = complete_binary_tree(127);
    const auto depth = depth_reduction_trial(tree, 4, 500, 9);
    auto j = to_json(depth);
    CHECK(j["eligible_sources"] == 15);
    CHECK(j["favorable_sources"] == 7);

    const auto selection = selection_trial(64, 0.5, 3, 21);
    j = to_json(selection);
    CHECK(j["draws_per_trial"] == 96);
    CHECK(j["unselected_counts"].size() == 3);

    const auto curves = bound_curves(128, 1.0, {1, 2}, {0.5});
    j = to_json(curves);
    CHECK(j["union_bound"].size() == 2);
    CHECK(j["chernoff"].size() == 1);

    const auto experiment = collapse_experiment(63, 2, -1.0, {1, 2});
    j = to_json(experiment);
    CHECK(j["traces"].size() == 2);
    CHECK(j["traces"][0]["iterations"].size() == 2);
    CHECK(j["traces"][0]["final_depths"]["total"] == 63);
}

TEST_CASE("text file helpers write and read back") {
    namespace fs = std::filesystem;
    const auto path = fs::temp_directory_path() / "dagcollapse_io_test.txt";
    write_text_file(path, "round\ntrip\n");
    CHECK(read_text_file(path) == "round\ntrip\n");
    fs::remove(path);

    CHECK_THROWS_AS(read_text_file(path), Error);
    CHECK_THROWS_AS(write_text_file(path / "nodir" / "x", "y"), Error);
}
