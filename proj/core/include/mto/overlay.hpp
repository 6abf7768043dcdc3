#pragma once

#include <map>
#include <optional>
#include <set>
#include <span>
#include <unordered_map>
#include <vector>

#include "mto/graph.hpp"

namespace mto {

enum class Decision { Removable, NotRemovable, Replaced };

const char* to_string(Decision d);

/// Removed and added edges that define the overlay G* on top of a base graph,
/// plus the per-edge decisions taken so far.
///
/// Invariants: removed and added are disjoint; removed edges belong to the
/// base graph and added ones do not (callers in the rewiring module check
/// membership, the ledger only keeps the sets consistent); a decision is
/// never flipped, the only permitted transition being NotRemovable ->
/// Replaced (an edge that failed the removal test may still be replaced).
///
/// A ledger is owned by one walk session and has no internal locking.
class OverlayLedger {
public:
    bool empty() const noexcept { return removed_.empty() && added_.empty(); }

    const std::set<EdgeKey>& removed() const noexcept { return removed_; }
    const std::set<EdgeKey>& added() const noexcept { return added_; }
    const std::map<EdgeKey, Decision>& decisions() const noexcept { return decisions_; }

    bool is_removed(EdgeKey e) const { return removed_.contains(e); }
    bool is_added(EdgeKey e) const { return added_.contains(e); }
    std::optional<Decision> decision(EdgeKey e) const;

    /// Records a decision. Throws DecisionConflict on a forbidden transition;
    /// re-recording the same decision is a no-op.
    void record(EdgeKey e, Decision d);

    /// Takes an overlay edge out of G*: added edges are forgotten, base edges
    /// go to the removed set.
    void drop_edge(EdgeKey e);
    /// Puts a non-base edge into G*. Throws DecisionConflict if the pair is a
    /// removed base edge.
    void add_edge(EdgeKey e);

    /// Overlay neighbourhood of `u` given its base neighbourhood (sorted).
    std::vector<NodeId> resolve(NodeId u, std::span<const NodeId> base_neighbors) const;
    /// Number of overlay-only neighbours of `u`.
    std::size_t added_degree(NodeId u) const;

    /// Materialised copy of G* (explicit export only).
    Graph materialize(const Graph& base) const;

private:
    static void insert_sorted(std::vector<NodeId>& v, NodeId x);
    static void erase_sorted(std::vector<NodeId>& v, NodeId x);

    std::set<EdgeKey> removed_;
    std::set<EdgeKey> added_;
    std::map<EdgeKey, Decision> decisions_;
    std::unordered_map<NodeId, std::vector<NodeId>> removed_adj_;
    std::unordered_map<NodeId, std::vector<NodeId>> added_adj_;
};

/// Neighbours of `u` in G*. Throws NodeNotFound.
std::vector<NodeId> effective_neighbors(const Graph& g, const OverlayLedger& ledger, NodeId u);

/// Shared overlay neighbours of u and v. Throws InvalidPair when u == v.
std::vector<NodeId> common_neighbors(const Graph& g, const OverlayLedger& ledger, NodeId u,
                                     NodeId v);

/// Sorted-range intersection helper shared by the rewiring criteria.
std::vector<NodeId> intersect_sorted(std::span<const NodeId> a, std::span<const NodeId> b);

} // namespace mto
