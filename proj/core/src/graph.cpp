#include "mto/graph.hpp"

#include <algorithm>
#include <ostream>
#include <queue>

#include "mto/errors.hpp"

namespace mto {

std::string to_string(EdgeKey e) {
    return std::to_string(e.lo) + "-" + std::to_string(e.hi);
}

Graph Graph::from_edges(std::size_t node_count,
                        std::span<const std::pair<NodeId, NodeId>> edges) {
    Graph g;
    g.adjacency_.resize(node_count);
    for (auto [u, v] : edges) {
        if (u >= node_count || v >= node_count) {
            throw NodeNotFound("edge endpoint " + std::to_string(std::max(u, v)) +
                               " outside node range " + std::to_string(node_count));
        }
        if (u == v) continue;
        g.adjacency_[u].push_back(v);
        g.adjacency_[v].push_back(u);
    }
    std::size_t half_degree_sum = 0;
    for (auto& nbrs : g.adjacency_) {
        std::sort(nbrs.begin(), nbrs.end());
        nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
        nbrs.shrink_to_fit();
        half_degree_sum += nbrs.size();
    }
    g.edge_count_ = half_degree_sum / 2;
    return g;
}

bool Graph::has_edge(NodeId u, NodeId v) const {
    auto nbrs = neighbors(u);
    return std::binary_search(nbrs.begin(), nbrs.end(), v);
}

std::span<const NodeId> Graph::neighbors(NodeId u) const {
    if (!contains(u)) throw NodeNotFound("node " + std::to_string(u) + " not in graph");
    return adjacency_[u];
}

std::size_t Graph::min_degree() const {
    if (adjacency_.empty()) return 0;
    std::size_t best = adjacency_.front().size();
    for (const auto& nbrs : adjacency_) best = std::min(best, nbrs.size());
    return best;
}

std::vector<EdgeKey> Graph::edges() const {
    std::vector<EdgeKey> out;
    out.reserve(edge_count_);
    for (NodeId u = 0; u < adjacency_.size(); ++u) {
        for (NodeId v : adjacency_[u]) {
            if (u < v) out.push_back({u, v});
        }
    }
    return out;
}

std::vector<std::vector<NodeId>> Graph::components() const {
    std::vector<std::vector<NodeId>> out;
    std::vector<bool> seen(adjacency_.size(), false);
    for (NodeId root = 0; root < adjacency_.size(); ++root) {
        if (seen[root]) continue;
        std::vector<NodeId> members;
        std::queue<NodeId> frontier;
        frontier.push(root);
        seen[root] = true;
        while (!frontier.empty()) {
            NodeId u = frontier.front();
            frontier.pop();
            members.push_back(u);
            for (NodeId v : adjacency_[u]) {
                if (!seen[v]) {
                    seen[v] = true;
                    frontier.push(v);
                }
            }
        }
        std::sort(members.begin(), members.end());
        out.push_back(std::move(members));
    }
    return out;
}

bool Graph::is_connected() const {
    if (adjacency_.empty()) return false;
    return components().size() == 1;
}

Graph Graph::induced(std::span<const NodeId> nodes) const {
    std::vector<NodeId> remap(adjacency_.size(), static_cast<NodeId>(-1));
    for (NodeId i = 0; i < nodes.size(); ++i) remap[nodes[i]] = i;
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (NodeId u : nodes) {
        for (NodeId v : neighbors(u)) {
            if (u < v && remap[v] != static_cast<NodeId>(-1)) edges.emplace_back(remap[u], remap[v]);
        }
    }
    Graph g = from_edges(nodes.size(), edges);
    if (has_labels()) {
        std::vector<std::string> labels;
        labels.reserve(nodes.size());
        for (NodeId u : nodes) labels.push_back(labels_[u]);
        g.labels_ = std::move(labels);
    }
    return g;
}

Graph Graph::largest_component() const {
    auto comps = components();
    if (comps.empty()) return {};
    auto best = std::max_element(comps.begin(), comps.end(), [](const auto& a, const auto& b) {
        return a.size() < b.size();
    });
    return induced(*best);
}

void Graph::set_labels(std::vector<std::string> labels) {
    if (!labels.empty() && labels.size() != adjacency_.size()) {
        throw DomainError("label count does not match node count");
    }
    labels_ = std::move(labels);
}

std::string Graph::label(NodeId u) const {
    if (!contains(u)) throw NodeNotFound("node " + std::to_string(u) + " not in graph");
    return labels_.empty() ? std::to_string(u) : labels_[u];
}

void write_edgelist(std::ostream& out, const Graph& g) {
    for (auto e : g.edges()) out << e.lo << ' ' << e.hi << '\n';
}

} // namespace mto
