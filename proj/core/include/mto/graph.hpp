#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace mto {

using NodeId = std::uint32_t;

/// Unordered node pair stored with the smaller id first, so (u,v) == (v,u).
struct EdgeKey {
    NodeId lo = 0;
    NodeId hi = 0;

    static EdgeKey of(NodeId a, NodeId b) noexcept {
        return a < b ? EdgeKey{a, b} : EdgeKey{b, a};
    }

    bool contains(NodeId x) const noexcept { return x == lo || x == hi; }
    NodeId other(NodeId x) const noexcept { return x == lo ? hi : lo; }

    auto operator<=>(const EdgeKey&) const = default;
};

std::string to_string(EdgeKey e);

struct EdgeKeyHash {
    std::size_t operator()(EdgeKey e) const noexcept {
        return std::hash<std::uint64_t>{}((std::uint64_t{e.lo} << 32) | e.hi);
    }
};

/// Immutable undirected simple graph over dense ids 0..n-1.
///
/// Adjacency lists are kept sorted so iteration order (and therefore every
/// seeded walk) is reproducible. Optional labels map dense ids back to the
/// identifiers used in the source file.
class Graph {
public:
    Graph() = default;

    /// Builds a graph from an edge list; self-loops are dropped and duplicate
    /// pairs collapsed. Endpoints must be < node_count.
    static Graph from_edges(std::size_t node_count,
                            std::span<const std::pair<NodeId, NodeId>> edges);

    std::size_t node_count() const noexcept { return adjacency_.size(); }
    std::size_t edge_count() const noexcept { return edge_count_; }
    bool empty() const noexcept { return adjacency_.empty(); }

    bool contains(NodeId u) const noexcept { return u < adjacency_.size(); }
    bool has_edge(NodeId u, NodeId v) const;

    /// Throws NodeNotFound for ids outside the graph.
    std::span<const NodeId> neighbors(NodeId u) const;
    std::size_t degree(NodeId u) const { return neighbors(u).size(); }
    std::size_t min_degree() const;

    /// All edges in ascending canonical order.
    std::vector<EdgeKey> edges() const;

    bool is_connected() const;
    /// Node ids of each connected component, components ordered by their
    /// smallest member.
    std::vector<std::vector<NodeId>> components() const;
    /// Subgraph induced by `nodes`, relabelled densely in the given order.
    Graph induced(std::span<const NodeId> nodes) const;
    /// Largest connected component (ties broken by smallest member id).
    Graph largest_component() const;

    void set_labels(std::vector<std::string> labels);
    bool has_labels() const noexcept { return !labels_.empty(); }
    /// Original identifier for `u`, or its decimal id when unlabelled.
    std::string label(NodeId u) const;

private:
    std::vector<std::vector<NodeId>> adjacency_;
    std::size_t edge_count_ = 0;
    std::vector<std::string> labels_;
};

/// Writes "u v" per edge, ascending canonical order.
void write_edgelist(std::ostream& out, const Graph& g);

} // namespace mto
