#include "mto/overlay.hpp"

#include <algorithm>
#include <iterator>

#include "mto/errors.hpp"

namespace mto {

const char* to_string(Decision d) {
    switch (d) {
        case Decision::Removable: return "removable";
        case Decision::NotRemovable: return "not_removable";
        case Decision::Replaced: return "replaced";
    }
    return "?";
}

std::optional<Decision> OverlayLedger::decision(EdgeKey e) const {
    auto it = decisions_.find(e);
    if (it == decisions_.end()) return std::nullopt;
    return it->second;
}

void OverlayLedger::record(EdgeKey e, Decision d) {
    auto [it, inserted] = decisions_.try_emplace(e, d);
    if (inserted || it->second == d) return;
    if (it->second == Decision::NotRemovable && d == Decision::Replaced) {
        it->second = d;
        return;
    }
    throw DecisionConflict("edge " + to_string(e) + " already decided " + to_string(it->second) +
                           ", cannot become " + to_string(d));
}

void OverlayLedger::insert_sorted(std::vector<NodeId>& v, NodeId x) {
    auto it = std::lower_bound(v.begin(), v.end(), x);
    if (it == v.end() || *it != x) v.insert(it, x);
}

void OverlayLedger::erase_sorted(std::vector<NodeId>& v, NodeId x) {
    auto it = std::lower_bound(v.begin(), v.end(), x);
    if (it != v.end() && *it == x) v.erase(it);
}

void OverlayLedger::drop_edge(EdgeKey e) {
    if (added_.erase(e) > 0) {
        erase_sorted(added_adj_[e.lo], e.hi);
        erase_sorted(added_adj_[e.hi], e.lo);
        return;
    }
    if (removed_.insert(e).second) {
        insert_sorted(removed_adj_[e.lo], e.hi);
        insert_sorted(removed_adj_[e.hi], e.lo);
    }
}

void OverlayLedger::add_edge(EdgeKey e) {
    if (removed_.contains(e)) {
        throw DecisionConflict("edge " + to_string(e) + " was removed and cannot be re-added");
    }
    if (added_.insert(e).second) {
        insert_sorted(added_adj_[e.lo], e.hi);
        insert_sorted(added_adj_[e.hi], e.lo);
    }
}

std::vector<NodeId> OverlayLedger::resolve(NodeId u, std::span<const NodeId> base_neighbors) const {
    std::vector<NodeId> kept;
    auto rm = removed_adj_.find(u);
    if (rm == removed_adj_.end() || rm->second.empty()) {
        kept.assign(base_neighbors.begin(), base_neighbors.end());
    } else {
        kept.reserve(base_neighbors.size());
        std::set_difference(base_neighbors.begin(), base_neighbors.end(), rm->second.begin(),
                            rm->second.end(), std::back_inserter(kept));
    }
    auto add = added_adj_.find(u);
    if (add == added_adj_.end() || add->second.empty()) return kept;
    std::vector<NodeId> out;
    out.reserve(kept.size() + add->second.size());
    std::set_union(kept.begin(), kept.end(), add->second.begin(), add->second.end(),
                   std::back_inserter(out));
    return out;
}

std::size_t OverlayLedger::added_degree(NodeId u) const {
    auto it = added_adj_.find(u);
    return it == added_adj_.end() ? 0 : it->second.size();
}

Graph OverlayLedger::materialize(const Graph& base) const {
    std::vector<std::pair<NodeId, NodeId>> edges;
    edges.reserve(base.edge_count() + added_.size());
    for (auto e : base.edges()) {
        if (!removed_.contains(e)) edges.emplace_back(e.lo, e.hi);
    }
    for (auto e : added_) edges.emplace_back(e.lo, e.hi);
    Graph g = Graph::from_edges(base.node_count(), edges);
    if (base.has_labels()) {
        std::vector<std::string> labels;
        for (NodeId u = 0; u < base.node_count(); ++u) labels.push_back(base.label(u));
        g.set_labels(std::move(labels));
    }
    return g;
}

std::vector<NodeId> effective_neighbors(const Graph& g, const OverlayLedger& ledger, NodeId u) {
    return ledger.resolve(u, g.neighbors(u));
}

std::vector<NodeId> intersect_sorted(std::span<const NodeId> a, std::span<const NodeId> b) {
    std::vector<NodeId> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

std::vector<NodeId> common_neighbors(const Graph& g, const OverlayLedger& ledger, NodeId u,
                                     NodeId v) {
    if (u == v) throw InvalidPair("common_neighbors needs two distinct nodes");
    auto nu = effective_neighbors(g, ledger, u);
    auto nv = effective_neighbors(g, ledger, v);
    return intersect_sorted(nu, nv);
}

} // namespace mto
