#include "mto/samplers.hpp"

#include <algorithm>
#include <cctype>
#include <ostream>
#include <unordered_set>

#include "mto/errors.hpp"

namespace mto {

const char* to_string(Scheme s) {
    switch (s) {
        case Scheme::Srw: return "SRW";
        case Scheme::Mhrw: return "MHRW";
        case Scheme::Rj: return "RJ";
        case Scheme::MtoBoth: return "MTO_Both";
        case Scheme::MtoRemove: return "MTO_RM";
        case Scheme::MtoReplace: return "MTO_RP";
    }
    return "?";
}

Scheme parse_scheme(const std::string& name) {
    std::string up;
    for (char c : name) up.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    if (up == "SRW") return Scheme::Srw;
    if (up == "MHRW") return Scheme::Mhrw;
    if (up == "RJ") return Scheme::Rj;
    if (up == "MTO" || up == "MTO_BOTH") return Scheme::MtoBoth;
    if (up == "MTO_RM") return Scheme::MtoRemove;
    if (up == "MTO_RP") return Scheme::MtoReplace;
    throw DomainError("unknown scheme " + name);
}

bool is_mto(Scheme s) noexcept {
    return s == Scheme::MtoBoth || s == Scheme::MtoRemove || s == Scheme::MtoReplace;
}

const char* to_string(StepAction a) {
    switch (a) {
        case StepAction::Start: return "start";
        case StepAction::Move: return "move";
        case StepAction::Stay: return "stay";
        case StepAction::Jump: return "jump";
        case StepAction::MoveAfterReplace: return "replace";
        case StepAction::MoveAfterAdd: return "add";
    }
    return "?";
}

void SamplerConfig::validate() const {
    auto in_unit = [](double p) { return p >= 0.0 && p <= 1.0; };
    if (!in_unit(jump_prob)) throw DomainError("jump_prob must lie in [0,1]");
    if (!in_unit(replace_prob)) throw DomainError("replace_prob must lie in [0,1]");
    if (!(geweke_threshold > 0.0)) throw DomainError("geweke_threshold must be positive");
    if (!(burn_in_fraction >= 0.0 && burn_in_fraction < 1.0)) {
        throw DomainError("burn_in_fraction must lie in [0,1)");
    }
    if (check_interval == 0 || max_steps == 0 || degree_sample == 0) {
        throw DomainError("check_interval, max_steps and degree_sample must be positive");
    }
}

namespace {

double observed_value(const NeighborhoodView& view, const std::string& attribute) {
    auto v = view.attribute(attribute);
    if (!v) {
        throw AttributeMissing("node " + std::to_string(view.node) + " lacks attribute " + attribute);
    }
    return *v;
}

void move_to(WalkState& state, WalkContext& ctx, NodeId target, StepAction action) {
    const auto& view = ctx.access.query(target);
    state.current = target;
    ++state.steps;
    state.trace.push_back({target, observed_value(view, ctx.config.attribute), action,
                           ctx.access.unique_count()});
}

void notify(WalkContext& ctx, RewireEvent::Kind kind, EdgeKey old_edge, EdgeKey new_edge) {
    if (ctx.observer) ctx.observer(RewireEvent{kind, old_edge, new_edge}, ctx.overlay);
}

} // namespace

WalkState start_walk(NodeId start, WalkContext& ctx, std::uint64_t seed) {
    const auto& view = ctx.access.query(start);
    WalkState state;
    state.current = start;
    state.rng_seed = seed;
    state.trace.push_back({start, observed_value(view, ctx.config.attribute), StepAction::Start,
                           ctx.access.unique_count()});
    return state;
}

void srw_step(WalkState& state, WalkContext& ctx) {
    const auto& view = ctx.access.query(state.current);
    if (view.neighbors.empty()) {
        throw IsolatedNode("node " + std::to_string(state.current) + " has no neighbours");
    }
    move_to(state, ctx, view.neighbors[uniform_index(ctx.rng, view.neighbors.size())],
            StepAction::Move);
}

void mhrw_step(WalkState& state, WalkContext& ctx) {
    const auto& view = ctx.access.query(state.current);
    if (view.neighbors.empty()) {
        throw IsolatedNode("node " + std::to_string(state.current) + " has no neighbours");
    }
    const NodeId proposal = view.neighbors[uniform_index(ctx.rng, view.neighbors.size())];
    const auto& proposed = ctx.access.query(proposal);
    const double accept =
        std::min(1.0, static_cast<double>(view.degree()) / static_cast<double>(proposed.degree()));
    if (coin(ctx.rng, accept)) {
        move_to(state, ctx, proposal, StepAction::Move);
    } else {
        move_to(state, ctx, state.current, StepAction::Stay);
    }
}

void rj_step(WalkState& state, WalkContext& ctx) {
    if (coin(ctx.rng, ctx.config.jump_prob)) {
        move_to(state, ctx, ctx.access.random_node(ctx.rng), StepAction::Jump);
    } else {
        mhrw_step(state, ctx);
    }
}

// Inner loop of the rewiring walk. At node u:
//   pick v uniformly from u's overlay neighbours and query it;
//   if (u,v) passes the removal test, drop it and pick again;
//   else if k*_v == 3 and a replacement target w exists, either replace
//     (u,v) by (u,w) and carry on with v := w, or add (u,w) and move to v or
//     w with equal probability;
//   then move to v with probability 1/2, otherwise pick again.
void mto_step(WalkState& state, WalkContext& ctx) {
    const Scheme scheme = ctx.config.scheme;
    const bool removals =
        ctx.config.removals && (scheme == Scheme::MtoBoth || scheme == Scheme::MtoRemove);
    const bool replacements =
        ctx.config.replacements && (scheme == Scheme::MtoBoth || scheme == Scheme::MtoReplace);
    const NodeId u = state.current;
    const auto& u_view = ctx.access.query(u);

    while (true) {
        auto candidates = ctx.overlay.resolve(u, u_view.neighbors);
        if (candidates.empty()) {
            throw IsolatedNode("node " + std::to_string(u) + " has no overlay neighbours");
        }
        NodeId v = candidates[uniform_index(ctx.rng, candidates.size())];
        const NeighborhoodView* v_view = &ctx.access.query(v);
        EdgeKey key = EdgeKey::of(u, v);
        StepAction action = StepAction::Move;

        if (removals && !ctx.overlay.decision(key)) {
            auto v_nbrs = ctx.overlay.resolve(v, v_view->neighbors);
            auto known = known_overlay_degrees(intersect_sorted(candidates, v_nbrs), ctx.access,
                                               ctx.overlay);
            auto verdict = is_removable_with_degrees(u_view, *v_view, known, ctx.overlay, ctx.access);
            if (verdict.removable) {
                apply_removal(key, ctx.overlay);
                if (ctx.audit) ctx.audit->log(key, verdict, "remove");
                notify(ctx, RewireEvent::Kind::Removal, key, key);
                continue;
            }
            apply_keep(key, ctx.overlay);
            if (ctx.audit) ctx.audit->log(key, verdict, "keep");
        }

        if (replacements) {
            if (auto w = replacement_candidate(*v_view, u_view, ctx.overlay, ctx.rng)) {
                const EdgeKey new_key = EdgeKey::of(u, *w);
                if (coin(ctx.rng, ctx.config.replace_prob)) {
                    apply_replacement(key, new_key, ctx.overlay);
                    if (ctx.audit) ctx.audit->log(key, "degree_three", "replace:" + to_string(new_key));
                    notify(ctx, RewireEvent::Kind::Replacement, key, new_key);
                    v = *w;
                    v_view = &ctx.access.query(v);
                    key = new_key;
                    action = StepAction::MoveAfterReplace;
                } else {
                    apply_addition(new_key, ctx.overlay);
                    if (ctx.audit) ctx.audit->log(new_key, "degree_three", "add");
                    notify(ctx, RewireEvent::Kind::Addition, new_key, new_key);
                    move_to(state, ctx, coin(ctx.rng, 0.5) ? v : *w, StepAction::MoveAfterAdd);
                    return;
                }
            }
        }

        if (coin(ctx.rng, 0.5)) {
            move_to(state, ctx, v, action);
            return;
        }
    }
}

void walk_step(WalkState& state, WalkContext& ctx) {
    switch (ctx.config.scheme) {
        case Scheme::Srw: srw_step(state, ctx); return;
        case Scheme::Mhrw: mhrw_step(state, ctx); return;
        case Scheme::Rj: rj_step(state, ctx); return;
        case Scheme::MtoBoth:
        case Scheme::MtoRemove:
        case Scheme::MtoReplace: mto_step(state, ctx); return;
    }
}

namespace {

NodeId choose_start(const SamplerConfig& config, const QueryLedger& access, Rng& rng) {
    if (config.start) return *config.start;
    if (access.options().expose_id_space) return access.random_node(rng);
    return 0;
}

double sample_weight(const SamplerConfig& config, NodeId node, QueryLedger& access,
                     const OverlayLedger& overlay, Rng& rng, SampleEntry& entry) {
    const auto& view = access.query(node);
    switch (config.scheme) {
        case Scheme::Srw: return 1.0 / static_cast<double>(view.degree());
        case Scheme::Mhrw:
        case Scheme::Rj: return 1.0;
        default: break;
    }
    const std::size_t m = std::min(view.degree(), config.degree_sample);
    double k_star = overlay_degree_estimate(node, m, access, overlay, rng);
    entry.attributes["overlay_degree_estimate"] = k_star;
    // A zero estimate means every sampled edge looked removable; fall back to
    // the smallest possible overlay degree so the weight stays finite.
    return 1.0 / std::max(1.0, k_star);
}

} // namespace

WalkResult run_walk(const SamplerConfig& config, QueryLedger& access, std::uint64_t seed,
                    const RunOptions& options) {
    config.validate();
    WalkResult result;
    result.samples.scheme = to_string(config.scheme);
    Rng rng(seed);
    WalkContext ctx{access, result.overlay, rng, config,
                    options.keep_audit ? &result.audit : nullptr, options.observer};

    result.state = start_walk(choose_start(config, access, rng), ctx, seed);
    GewekeMonitor monitor(config.geweke_threshold, config.check_interval, config.burn_in_fraction);

    for (std::size_t i = 0; i < config.sample_size; ++i) {
        monitor.reset();
        monitor.observe(result.state.trace.back().value);
        std::size_t taken = 0;
        while (true) {
            if (taken >= config.max_steps) {
                throw ConvergenceTimeout("no convergence within " + std::to_string(config.max_steps) +
                                         " steps for sample " + std::to_string(i));
            }
            walk_step(result.state, ctx);
            ++taken;
            if (monitor.observe(result.state.trace.back().value)) break;
        }
        const std::size_t queries_at_convergence = access.unique_count();
        SampleEntry entry;
        entry.node = result.state.current;
        entry.attributes = access.query(entry.node).attributes;
        entry.weight = sample_weight(config, entry.node, access, result.overlay, rng, entry);
        result.samples.entries.push_back(std::move(entry));
        result.geweke_z.push_back(monitor.last_z());
        result.unique_queries.push_back(queries_at_convergence);
    }
    return result;
}

WalkResult run_to_coverage(const SamplerConfig& config, QueryLedger& access, std::uint64_t seed,
                           std::size_t max_steps, const RunOptions& options) {
    config.validate();
    WalkResult result;
    result.samples.scheme = to_string(config.scheme);
    Rng rng(seed);
    WalkContext ctx{access, result.overlay, rng, config,
                    options.keep_audit ? &result.audit : nullptr, options.observer};

    result.state = start_walk(choose_start(config, access, rng), ctx, seed);
    std::unordered_set<NodeId> visited{result.state.current};
    const std::size_t target = access.id_space_size();
    while (visited.size() < target) {
        if (result.state.steps >= max_steps) {
            throw CoverageTimeout("visited " + std::to_string(visited.size()) + " of " +
                                  std::to_string(target) + " nodes in " + std::to_string(max_steps) +
                                  " steps");
        }
        walk_step(result.state, ctx);
        visited.insert(result.state.current);
    }
    return result;
}

void write_trace_csv(std::ostream& out, const WalkState& state) {
    out << "step,node,action,unique_queries\n";
    for (std::size_t i = 0; i < state.trace.size(); ++i) {
        const auto& t = state.trace[i];
        out << i << ',' << t.node << ',' << to_string(t.action) << ',' << t.unique_queries << '\n';
    }
}

void write_samples_csv(std::ostream& out, const SampleSet& samples,
                       const std::vector<std::string>& attributes) {
    out << "sample_idx,node,weight";
    for (const auto& a : attributes) out << ',' << a;
    out << '\n';
    for (std::size_t i = 0; i < samples.entries.size(); ++i) {
        const auto& e = samples.entries[i];
        out << i << ',' << e.node << ',' << e.weight;
        for (const auto& a : attributes) {
            out << ',';
            if (auto it = e.attributes.find(a); it != e.attributes.end()) out << it->second;
        }
        out << '\n';
    }
}

} // namespace mto
