#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mto/access.hpp"
#include "mto/overlay.hpp"
#include "mto/random.hpp"

namespace mto {

enum class RemovalRule {
    CommonNeighbor, ///< ceil(n/2) + 1 > max(k_u, k_v) / 2
    KnownDegree,    ///< same, upgraded with cached degrees of low-degree common neighbours
    Guarded,        ///< removal would isolate an endpoint; never removable
};

const char* to_string(RemovalRule r);

/// Outcome of a removal test, with both sides of the inequality for audit.
struct RemovalVerdict {
    bool removable = false;
    RemovalRule rule = RemovalRule::CommonNeighbor;
    double lhs = 0.0;
    double rhs = 0.0;
};

/// Overlay degrees keyed by node id, restricted to already-queried nodes.
using KnownDegrees = std::map<NodeId, std::size_t>;

/// Tests whether overlay edge (u,v) is provably not cross-cutting:
///
///     ceil(n / 2) + 1 > max(k*_u, k*_v) / 2
///
/// with n the number of common overlay neighbours. The inequality is strict.
/// Views are base responses; they are resolved through `ledger` here.
/// Throws EdgeAbsent when (u,v) is not an overlay edge.
RemovalVerdict is_removable(const NeighborhoodView& u_view, const NeighborhoodView& v_view,
                            const OverlayLedger& ledger);

/// Degree-augmented removal test. N* is the set of common neighbours w whose
/// overlay degree is known with 2 <= k_w <= 3, and the test becomes
///
///     ceil((n - |N*|) / 2) + 1 + sum_{w in N*} (4 - k_w) / 2 > max(k*_u, k*_v) / 2
///
/// With N* empty the verdict equals is_removable(). Every key of
/// `known_degrees` must already be in `cache`, otherwise ProvenanceViolation.
RemovalVerdict is_removable_with_degrees(const NeighborhoodView& u_view,
                                         const NeighborhoodView& v_view,
                                         const KnownDegrees& known_degrees,
                                         const OverlayLedger& ledger, const QueryLedger& cache);

/// Overlay degrees of the cached members of `nodes`; never issues a query.
KnownDegrees known_overlay_degrees(const std::vector<NodeId>& nodes, const QueryLedger& cache,
                                   const OverlayLedger& ledger);

/// For a neighbour v of u with overlay degree exactly 3, picks w uniformly
/// among v's other overlay neighbours so that (u,v) may be replaced by (u,w).
/// Pairs already adjacent in the overlay, or previously decided, are not
/// eligible. Returns nullopt when k*_v != 3 or nothing is eligible.
/// Throws EdgeAbsent when (u,v) is not an overlay edge.
std::optional<NodeId> replacement_candidate(const NeighborhoodView& v_view,
                                            const NeighborhoodView& u_view,
                                            const OverlayLedger& ledger, Rng& rng);

/// Removes `edge` from the overlay. Idempotent; throws DecisionConflict if
/// the edge was already kept or replaced.
void apply_removal(EdgeKey edge, OverlayLedger& ledger);

/// Replaces `old_edge` by `new_edge` (which must share an endpoint, else
/// InvalidPair). Both endpoints see the change.
void apply_replacement(EdgeKey old_edge, EdgeKey new_edge, OverlayLedger& ledger);

/// Adds `edge` to the overlay without removing anything.
void apply_addition(EdgeKey edge, OverlayLedger& ledger);

/// Records that `edge` failed the removal test; the edge is not re-tested.
void apply_keep(EdgeKey edge, OverlayLedger& ledger);

/// Append-only decision log written as "edge,rule,lhs,rhs,action" CSV.
class DecisionAudit {
public:
    struct Entry {
        EdgeKey edge;
        std::string rule;
        double lhs = 0.0;
        double rhs = 0.0;
        std::string action;
    };

    void log(EdgeKey edge, const RemovalVerdict& verdict, std::string action);
    void log(EdgeKey edge, std::string rule, std::string action);

    const std::vector<Entry>& entries() const noexcept { return entries_; }
    void write_csv(std::ostream& out) const;

private:
    std::vector<Entry> entries_;
};

} // namespace mto
