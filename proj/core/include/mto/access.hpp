#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "mto/graph.hpp"
#include "mto/random.hpp"

namespace mto {

inline constexpr const char* kDegreeAttribute = "degree";

/// Answer to one individual-node query: the node's base neighbourhood and its
/// scalar attributes. "degree" is always present.
struct NeighborhoodView {
    NodeId node = 0;
    std::vector<NodeId> neighbors;
    std::map<std::string, double> attributes;

    std::size_t degree() const noexcept { return neighbors.size(); }
    std::optional<double> attribute(const std::string& name) const;
};

/// Per-node attributes loaded from a sidecar file.
using AttributeTable = std::unordered_map<NodeId, std::map<std::string, double>>;

struct AccessOptions {
    /// Whether random_node() is allowed (needs the whole id space).
    bool expose_id_space = true;
    /// Maximum number of unique queries; unlimited when empty.
    std::optional<std::size_t> budget;
};

/// The only door samplers have to the graph: q(v) with a response cache and
/// a unique-query counter. A node is charged at most once for the lifetime of
/// the ledger, across walk restarts.
///
/// Lookups may run concurrently; cache insertion is serialised and the
/// counter moves together with the insertion.
class QueryLedger {
public:
    explicit QueryLedger(const Graph& graph, AccessOptions options = {},
                         const AttributeTable* attributes = nullptr);

    QueryLedger(const QueryLedger&) = delete;
    QueryLedger& operator=(const QueryLedger&) = delete;

    /// Throws NodeNotFound, or BudgetExhausted when an uncached query would
    /// exceed the budget. The returned reference stays valid for the ledger's
    /// lifetime.
    const NeighborhoodView& query(NodeId v);

    /// Uniform draw from V. Throws CapabilityUnavailable when the id space is
    /// hidden. Does not issue a query.
    NodeId random_node(Rng& rng) const;

    bool is_cached(NodeId v) const;
    /// Cached view or nullptr; never charges.
    const NeighborhoodView* cached(NodeId v) const;
    std::size_t unique_count() const;

    const AccessOptions& options() const noexcept { return options_; }
    std::size_t id_space_size() const noexcept { return graph_.node_count(); }

    /// Writes "unique_queries=<n>".
    void write_state(std::ostream& out) const;

private:
    const Graph& graph_;
    AccessOptions options_;
    const AttributeTable* attributes_;
    mutable std::shared_mutex mutex_;
    std::unordered_map<NodeId, NeighborhoodView> cache_;
};

enum class EdgeListMode { Undirected, ReciprocalDirected };

/// Reads a SNAP-style edge list ("src dst" per line, '#' comments).
///
/// Node ids in the file may be arbitrary tokens; they are mapped to dense ids
/// in sorted order (numeric when every token is an integer) so the result
/// does not depend on line order. Only nodes incident to a kept edge survive.
/// In ReciprocalDirected mode an undirected edge is kept iff both directions
/// appear. Throws ParseError (with line number) or EmptyGraph.
Graph load_edgelist(std::istream& in, EdgeListMode mode);
Graph load_edgelist(const std::filesystem::path& path, EdgeListMode mode);

/// Reads "node_id name value" lines; node ids are matched against the
/// graph's labels. Unknown ids are a NodeNotFound.
AttributeTable load_attributes(std::istream& in, const Graph& graph);
AttributeTable load_attributes(const std::filesystem::path& path, const Graph& graph);

} // namespace mto
