#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mto/access.hpp"
#include "mto/estimation.hpp"
#include "mto/overlay.hpp"
#include "mto/random.hpp"
#include "mto/rewiring.hpp"

namespace mto {

/// Walk schemes. MtoBoth removes and replaces edges; MtoRemove and
/// MtoReplace enable one rewiring rule each.
enum class Scheme { Srw, Mhrw, Rj, MtoBoth, MtoRemove, MtoReplace };

const char* to_string(Scheme s);
/// Accepts SRW, MHRW, RJ, MTO / MTO_Both, MTO_RM, MTO_RP (case-insensitive).
Scheme parse_scheme(const std::string& name);
bool is_mto(Scheme s) noexcept;

struct SamplerConfig {
    Scheme scheme = Scheme::Srw;
    double jump_prob = 0.5;
    double replace_prob = 0.5;
    double geweke_threshold = 0.1;
    std::size_t sample_size = 1;
    /// Diagnostic attribute observed by the convergence monitor.
    std::string attribute = kDegreeAttribute;
    std::size_t check_interval = 100;
    double burn_in_fraction = 0.1;
    /// Per-sample step cap before ConvergenceTimeout.
    std::size_t max_steps = 1'000'000;
    /// Neighbours audited per overlay-degree estimate (capped by degree).
    std::size_t degree_sample = 5;
    /// Walk start; drawn with random_node() when unset and the id space is
    /// exposed, otherwise node 0.
    std::optional<NodeId> start;
    /// Extra switches on top of the MTO scheme; both off makes MTO a plain
    /// walk on the base graph.
    bool removals = true;
    bool replacements = true;

    void validate() const;
};

enum class StepAction { Start, Move, Stay, Jump, MoveAfterReplace, MoveAfterAdd };

const char* to_string(StepAction a);

struct TraceEntry {
    NodeId node = 0;
    double value = 0.0;
    StepAction action = StepAction::Start;
    std::size_t unique_queries = 0;
};

/// Chain position and history; trace.size() == steps + 1 and the last trace
/// entry is `current`.
struct WalkState {
    NodeId current = 0;
    std::size_t steps = 0;
    std::vector<TraceEntry> trace;
    std::uint64_t rng_seed = 0;
};

/// One overlay mutation, reported after it has been applied.
struct RewireEvent {
    enum class Kind { Removal, Replacement, Addition } kind;
    EdgeKey old_edge;
    EdgeKey new_edge;
};

using RewireObserver = std::function<void(const RewireEvent&, const OverlayLedger&)>;

/// Everything a step needs besides the state. `audit` and `observer` are
/// optional.
struct WalkContext {
    QueryLedger& access;
    OverlayLedger& overlay;
    Rng& rng;
    const SamplerConfig& config;
    DecisionAudit* audit = nullptr;
    RewireObserver observer;
};

/// Starts a walk at `start` (queries it).
WalkState start_walk(NodeId start, WalkContext& ctx, std::uint64_t seed);

/// Uniform move to a base neighbour.
void srw_step(WalkState& state, WalkContext& ctx);
/// Uniform proposal accepted with min(1, k_current / k_proposal).
void mhrw_step(WalkState& state, WalkContext& ctx);
/// With jump_prob, teleport to random_node(); otherwise an MHRW step.
void rj_step(WalkState& state, WalkContext& ctx);
/// One move of the rewiring walk on the overlay (see samplers.cpp).
void mto_step(WalkState& state, WalkContext& ctx);
/// Dispatches on ctx.config.scheme.
void walk_step(WalkState& state, WalkContext& ctx);

struct WalkResult {
    SampleSet samples;
    WalkState state;
    OverlayLedger overlay;
    DecisionAudit audit;
    /// Geweke Z at the firing check for each sample.
    std::vector<double> geweke_z;
    /// Unique queries when the monitor fired for each sample (before the
    /// weight estimate probes any neighbours).
    std::vector<std::size_t> unique_queries;
};

struct RunOptions {
    bool keep_audit = false;
    RewireObserver observer;
};

/// Walks until the Geweke monitor fires, records the current node, and
/// repeats (monitor reset) for config.sample_size samples. Weights are
/// 1/k for SRW, 1 for MHRW/RJ and 1/k*_estimate for MTO variants.
/// Throws ConvergenceTimeout when a sample needs more than max_steps.
WalkResult run_walk(const SamplerConfig& config, QueryLedger& access, std::uint64_t seed,
                    const RunOptions& options = {});

/// Runs MTO until every node of the id space has been visited at least once.
/// Throws CoverageTimeout after `max_steps` moves.
WalkResult run_to_coverage(const SamplerConfig& config, QueryLedger& access, std::uint64_t seed,
                           std::size_t max_steps, const RunOptions& options = {});

/// "step,node,action,unique_queries"
void write_trace_csv(std::ostream& out, const WalkState& state);
/// "sample_idx,node,weight,<attr>..." with the attribute columns given.
void write_samples_csv(std::ostream& out, const SampleSet& samples,
                       const std::vector<std::string>& attributes);

} // namespace mto
