#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mto/access.hpp"
#include "mto/generators.hpp"
#include "mto/graph.hpp"
#include "mto/samplers.hpp"

namespace mto {

/// A graph named by a source string:
///   barbell:<m>
///   latent:n=<n>,a=<a>,b=<b>,r=<r>,alpha=<alpha|inf>,seed=<s>
///   <path>            (SNAP edge list)
struct LoadedGraph {
    Graph graph;
    AttributeTable attributes;
    std::vector<Point2> coords;
    std::string description;
};

/// `giant_component` restricts the result to its largest component (the
/// coordinates and attributes are remapped accordingly).
LoadedGraph load_graph_source(const std::string& source, EdgeListMode mode,
                              const std::string& attributes_path, bool giant_component);

/// Mean of `attribute` over all nodes (degree is always available).
double population_mean(const LoadedGraph& g, const std::string& attribute);

struct ExperimentSpec {
    std::string graph = "barbell:11";
    EdgeListMode mode = EdgeListMode::Undirected;
    std::string attributes_path;
    bool giant_component = true;
    std::vector<Scheme> schemes{Scheme::Srw, Scheme::MtoBoth};
    std::string attribute = kDegreeAttribute;
    /// Thresholds to run; a single entry unless sweeping.
    std::vector<double> geweke_thresholds{0.1};
    std::size_t runs = 20;
    std::uint64_t seed = 1;
    std::size_t sample_size = 100;
    double jump_prob = 0.5;
    double replace_prob = 0.5;
    std::optional<std::size_t> budget;
    std::size_t max_steps = 1'000'000;
    /// Use each run's final estimate as ground truth instead of the
    /// population mean.
    bool presumptive_truth = false;
    /// KL divergence is reported only up to this many nodes.
    std::size_t kl_node_limit = 1000;
    std::size_t threads = 1;
    std::filesystem::path out_dir;

    void validate() const;
    /// Applies one "key=value" setting using the CLI flag names
    /// (graph, scheme, runs, seed, geweke-threshold, ...). Throws DomainError
    /// for unknown keys.
    void apply_setting(const std::string& key, const std::string& value);
};

/// Reads flat "key=value" lines ('#' comments) into `spec`.
void apply_config(std::istream& in, ExperimentSpec& spec);

struct RunRecord {
    Scheme scheme = Scheme::Srw;
    double threshold = 0.1;
    std::size_t run = 0;
    std::uint64_t seed = 0;
    std::size_t steps = 0;
    std::size_t unique_queries = 0;
    /// Unique queries when the first sample was taken (first convergence).
    std::size_t queries_at_first_convergence = 0;
    double estimate = 0.0;
    double truth = 0.0;
    double relative_error = 0.0;
    double geweke_z = 0.0;
    std::optional<double> kl;
    std::string error;
    /// (unique_queries, estimate, relative_error, geweke_z) after each sample.
    struct Point {
        std::size_t n = 0;
        std::size_t unique_queries = 0;
        double estimate = 0.0;
        double relative_error = 0.0;
        double geweke_z = 0.0;
    };
    std::vector<Point> points;
};

struct ExperimentReport {
    std::vector<RunRecord> runs;
    bool partial_failure = false;
};

/// Relative-error levels at which query cost is summarised.
const std::vector<double>& error_levels();

/// Per run: the largest unique-query count at which the running estimate
/// still had relative error above `level` (0 when never above).
std::size_t query_cost_at_level(const RunRecord& run, double level);

/// Executes every scheme x threshold x run (runs share seeds across schemes,
/// so comparisons are paired) and, when spec.out_dir is set, writes
/// measurements.csv, runs.csv and summary.json there.
ExperimentReport run_experiment(const ExperimentSpec& spec);

void write_measurements_csv(std::ostream& out, const ExperimentSpec& spec,
                            const ExperimentReport& report);
void write_runs_csv(std::ostream& out, const ExperimentReport& report);
void write_summary_json(std::ostream& out, const ExperimentSpec& spec,
                        const ExperimentReport& report);

struct OverlayVerification {
    std::size_t base_edges = 0;
    std::size_t overlay_edges = 0;
    std::size_t steps = 0;
    std::size_t unique_queries = 0;
    bool overlay_connected = false;
    std::optional<double> phi_base;
    std::optional<double> phi_overlay;
    double slem_base = 0.0;
    double slem_overlay = 0.0;
    double mixing_base = 0.0;
    double mixing_overlay = 0.0;
    Graph overlay;
};

struct VerifySpec {
    std::string graph = "barbell:11";
    EdgeListMode mode = EdgeListMode::Undirected;
    Scheme scheme = Scheme::MtoBoth;
    bool removals = true;
    bool replacements = true;
    double replace_prob = 0.5;
    std::uint64_t seed = 1;
    std::size_t max_steps = 1'000'000;
    std::filesystem::path out_dir;
};

/// Runs the chosen MTO variant until every node has been visited, then
/// compares base and overlay: exact conductance (<= 24 nodes), SLEM and
/// connectivity. Writes overlay.edgelist and verify.json when out_dir is
/// set. Throws CoverageTimeout.
OverlayVerification verify_overlay(const VerifySpec& spec);
OverlayVerification verify_overlay(const Graph& base, const VerifySpec& spec);

void write_verification_json(std::ostream& out, const OverlayVerification& v);

/// {phi, cut, slem, mixing_time, delta_series}; phi and cut are null above
/// the exact-cut size limit.
void write_spectral_json(std::ostream& out, const Graph& g, std::size_t series_length);

} // namespace mto
