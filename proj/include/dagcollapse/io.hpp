#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dagcollapse/dag.hpp"
#include "dagcollapse/generate.hpp"
#include "dagcollapse/metrics.hpp"
#include "dagcollapse/theory.hpp"

namespace dagcollapse {

using json = nlohmann::ordered_json;

enum class CycleHandling {
    strict,           // any cycle aborts the read with CycleDetected
    drop_back_edges,  // drop the depth-first back edges and report how many
};

enum class LabelMode {
    automatic,    // integer_ids when the first data line is two integers
    integer_ids,  // tokens must be non-negative integers, used as node ids
    labeled,      // tokens are opaque labels, numbered by first appearance
};

struct ReadOptions {
    CycleHandling on_cycle = CycleHandling::strict;
    LabelMode labels = LabelMode::automatic;
    // Integer mode only: declare the node count instead of inferring
    // max id + 1, so trailing isolated nodes survive a round trip.
    std::optional<std::size_t> node_count;
};

struct ReadResult {
    Dag dag;
    std::vector<std::string> labels;  // empty in integer mode
    std::size_t duplicate_edges = 0;
    std::size_t dropped_back_edges = 0;
};

// Edge list text: one "source target" pair per line, whitespace separated.
// Blank lines and lines starting with '#' are skipped; anything else
// malformed raises ParseError with its 1-based line number.
ReadResult read_edge_list(std::istream& in, const ReadOptions& options = {});

// Inverse of the integer-id read: "u v\n" per edge, sorted by (u, v).
// Label names are not part of the format; labeled graphs are written by id.
std::string write_edge_list(const Dag& dag);

struct DotOptions {
    std::string graph_name = "dag";
    // Rendering anything bigger than this is pointless; CapExceeded.
    std::size_t node_cap = 5000;
};

// Graphviz text. Isolated nodes get bare statements so the node count is
// recoverable from the output.
std::string export_dot(const Dag& dag, const DotOptions& options = {});

// "value,count" rows in ascending value order, with that header line.
std::string histogram_csv(const Histogram& hist);
std::string iteration_log_csv(const IterationLog& log);

json to_json(const Histogram& hist);
json to_json(const DegreeStats& stats);
json to_json(const GraphSummary& summary);
json to_json(const CollapseVerdict& verdict);
json to_json(const GraphAnalysis& analysis);
json to_json(const ComparisonReport& report);
json to_json(const MatchProfile& profile);
json to_json(const IterationStats& stats);
json to_json(const DepthReductionResult& result);
json to_json(const SelectionTrialResult& result);
json to_json(const BoundCurves& curves);
json to_json(const CollapseTrace& trace);
json to_json(const CollapseExperimentResult& result);

Histogram histogram_from_json(const json& j);
GraphSummary summary_from_json(const json& j);
CollapseVerdict verdict_from_json(const json& j);
GraphAnalysis analysis_from_json(const json& j);
ComparisonReport comparison_from_json(const json& j);

// Top-level analysis document. metadata carries run configuration (seed,
// walk count, sources); graphs carry the measured distributions.
struct AnalysisReport {
    std::string tool_version;
    json metadata = json::object();
    std::vector<GraphAnalysis> graphs;
};

// Serializes with schema_version and tool info. Throws SerializationError
// when a histogram total contradicts its graph's declared population, so a
// malformed report never reaches disk.
json to_json(const AnalysisReport& report);
AnalysisReport report_from_json(const json& j);

void write_report(std::ostream& out, const AnalysisReport& report);
AnalysisReport read_report(std::istream& in);

MatchProfile read_profile(std::istream& in);
void write_profile(std::ostream& out, const MatchProfile& profile);

// Small file helpers shared by the CLI and tests.
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace dagcollapse
