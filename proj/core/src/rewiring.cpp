#include "mto/rewiring.hpp"

#include <algorithm>
#include <ostream>

#include "mto/errors.hpp"

namespace mto {

const char* to_string(RemovalRule r) {
    switch (r) {
        case RemovalRule::CommonNeighbor: return "common_neighbor";
        case RemovalRule::KnownDegree: return "known_degree";
        case RemovalRule::Guarded: return "guarded";
    }
    return "?";
}

namespace {

struct OverlayPair {
    std::vector<NodeId> u_nbrs;
    std::vector<NodeId> v_nbrs;
    std::vector<NodeId> common;
};

OverlayPair resolve_pair(const NeighborhoodView& u_view, const NeighborhoodView& v_view,
                         const OverlayLedger& ledger) {
    if (u_view.node == v_view.node) throw InvalidPair("edge endpoints must differ");
    OverlayPair p;
    p.u_nbrs = ledger.resolve(u_view.node, u_view.neighbors);
    if (!std::binary_search(p.u_nbrs.begin(), p.u_nbrs.end(), v_view.node)) {
        throw EdgeAbsent("edge " + to_string(EdgeKey::of(u_view.node, v_view.node)) +
                         " is not in the overlay");
    }
    p.v_nbrs = ledger.resolve(v_view.node, v_view.neighbors);
    p.common = intersect_sorted(p.u_nbrs, p.v_nbrs);
    return p;
}

// Works in doubled units so every comparison is on integers.
RemovalVerdict evaluate(const OverlayPair& p, std::size_t n_star, std::size_t bonus_twice) {
    const std::size_t n = p.common.size();
    const std::size_t k_max = std::max(p.u_nbrs.size(), p.v_nbrs.size());
    const std::size_t rest = n - n_star;
    const std::size_t lhs_twice = 2 * ((rest + 1) / 2 + 1) + bonus_twice;

    RemovalVerdict verdict;
    verdict.lhs = static_cast<double>(lhs_twice) / 2.0;
    verdict.rhs = static_cast<double>(k_max) / 2.0;
    verdict.rule = n_star == 0 ? RemovalRule::CommonNeighbor : RemovalRule::KnownDegree;
    if (std::min(p.u_nbrs.size(), p.v_nbrs.size()) <= 1) {
        verdict.rule = RemovalRule::Guarded;
        verdict.removable = false;
        return verdict;
    }
    verdict.removable = lhs_twice > k_max;
    return verdict;
}

} // namespace

RemovalVerdict is_removable(const NeighborhoodView& u_view, const NeighborhoodView& v_view,
                            const OverlayLedger& ledger) {
    return evaluate(resolve_pair(u_view, v_view, ledger), 0, 0);
}

RemovalVerdict is_removable_with_degrees(const NeighborhoodView& u_view,
                                         const NeighborhoodView& v_view,
                                         const KnownDegrees& known_degrees,
                                         const OverlayLedger& ledger, const QueryLedger& cache) {
    for (const auto& [node, degree] : known_degrees) {
        if (!cache.is_cached(node)) {
            throw ProvenanceViolation("degree of node " + std::to_string(node) +
                                      " was not obtained from a prior query");
        }
    }
    auto pair = resolve_pair(u_view, v_view, ledger);
    std::size_t n_star = 0;
    std::size_t bonus_twice = 0;
    for (NodeId w : pair.common) {
        auto it = known_degrees.find(w);
        if (it == known_degrees.end()) continue;
        if (it->second >= 2 && it->second <= 3) {
            ++n_star;
            bonus_twice += 4 - it->second;
        }
    }
    return evaluate(pair, n_star, bonus_twice);
}

KnownDegrees known_overlay_degrees(const std::vector<NodeId>& nodes, const QueryLedger& cache,
                                   const OverlayLedger& ledger) {
    KnownDegrees out;
    for (NodeId w : nodes) {
        if (const auto* view = cache.cached(w)) {
            out.emplace(w, ledger.resolve(w, view->neighbors).size());
        }
    }
    return out;
}

std::optional<NodeId> replacement_candidate(const NeighborhoodView& v_view,
                                            const NeighborhoodView& u_view,
                                            const OverlayLedger& ledger, Rng& rng) {
    const NodeId u = u_view.node;
    const NodeId v = v_view.node;
    auto v_nbrs = ledger.resolve(v, v_view.neighbors);
    if (!std::binary_search(v_nbrs.begin(), v_nbrs.end(), u)) {
        throw EdgeAbsent("edge " + to_string(EdgeKey::of(u, v)) + " is not in the overlay");
    }
    if (v_nbrs.size() != 3) return std::nullopt;

    auto u_nbrs = ledger.resolve(u, u_view.neighbors);
    std::vector<NodeId> eligible;
    for (NodeId w : v_nbrs) {
        if (w == u) continue;
        if (std::binary_search(u_nbrs.begin(), u_nbrs.end(), w)) continue;
        if (ledger.decision(EdgeKey::of(u, w))) continue;
        eligible.push_back(w);
    }
    if (eligible.empty()) return std::nullopt;
    return eligible[uniform_index(rng, eligible.size())];
}

void apply_removal(EdgeKey edge, OverlayLedger& ledger) {
    if (ledger.decision(edge) == Decision::Removable) return;
    ledger.record(edge, Decision::Removable);
    ledger.drop_edge(edge);
}

void apply_replacement(EdgeKey old_edge, EdgeKey new_edge, OverlayLedger& ledger) {
    const bool shares = old_edge.contains(new_edge.lo) || old_edge.contains(new_edge.hi);
    if (!shares || old_edge == new_edge) {
        throw InvalidPair("replacement " + to_string(old_edge) + " -> " + to_string(new_edge) +
                          " must keep exactly one endpoint");
    }
    if (ledger.decision(old_edge) == Decision::Replaced && ledger.is_added(new_edge)) return;
    ledger.record(old_edge, Decision::Replaced);
    ledger.drop_edge(old_edge);
    ledger.add_edge(new_edge);
}

void apply_addition(EdgeKey edge, OverlayLedger& ledger) { ledger.add_edge(edge); }

void apply_keep(EdgeKey edge, OverlayLedger& ledger) { ledger.record(edge, Decision::NotRemovable); }

void DecisionAudit::log(EdgeKey edge, const RemovalVerdict& verdict, std::string action) {
    entries_.push_back({edge, to_string(verdict.rule), verdict.lhs, verdict.rhs, std::move(action)});
}

void DecisionAudit::log(EdgeKey edge, std::string rule, std::string action) {
    entries_.push_back({edge, std::move(rule), 0.0, 0.0, std::move(action)});
}

void DecisionAudit::write_csv(std::ostream& out) const {
    out << "edge,rule,lhs,rhs,action\n";
    for (const auto& e : entries_) {
        out << e.edge.lo << '-' << e.edge.hi << ',' << e.rule << ',' << e.lhs << ',' << e.rhs
            << ',' << e.action << '\n';
    }
}

} // namespace mto
