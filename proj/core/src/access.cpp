#include "mto/access.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <unordered_map>

#include "mto/errors.hpp"

namespace mto {

std::optional<double> NeighborhoodView::attribute(const std::string& name) const {
    auto it = attributes.find(name);
    if (it == attributes.end()) return std::nullopt;
    return it->second;
}

QueryLedger::QueryLedger(const Graph& graph, AccessOptions options,
                         const AttributeTable* attributes)
    : graph_(graph), options_(options), attributes_(attributes) {}

const NeighborhoodView& QueryLedger::query(NodeId v) {
    {
        std::shared_lock lock(mutex_);
        if (auto it = cache_.find(v); it != cache_.end()) return it->second;
    }
    if (!graph_.contains(v)) throw NodeNotFound("node " + std::to_string(v) + " not in graph");

    std::unique_lock lock(mutex_);
    if (auto it = cache_.find(v); it != cache_.end()) return it->second;
    if (options_.budget && cache_.size() >= *options_.budget) {
        throw BudgetExhausted("query budget of " + std::to_string(*options_.budget) +
                              " unique queries exhausted");
    }
    NeighborhoodView view;
    view.node = v;
    auto nbrs = graph_.neighbors(v);
    view.neighbors.assign(nbrs.begin(), nbrs.end());
    if (attributes_ != nullptr) {
        if (auto it = attributes_->find(v); it != attributes_->end()) view.attributes = it->second;
    }
    view.attributes[kDegreeAttribute] = static_cast<double>(view.neighbors.size());
    return cache_.emplace(v, std::move(view)).first->second;
}

NodeId QueryLedger::random_node(Rng& rng) const {
    if (!options_.expose_id_space) {
        throw CapabilityUnavailable("interface does not expose the node id space");
    }
    if (graph_.empty()) throw EmptyGraph("cannot draw a node from an empty graph");
    return static_cast<NodeId>(uniform_index(rng, graph_.node_count()));
}

bool QueryLedger::is_cached(NodeId v) const {
    std::shared_lock lock(mutex_);
    return cache_.contains(v);
}

const NeighborhoodView* QueryLedger::cached(NodeId v) const {
    std::shared_lock lock(mutex_);
    auto it = cache_.find(v);
    return it == cache_.end() ? nullptr : &it->second;
}

std::size_t QueryLedger::unique_count() const {
    std::shared_lock lock(mutex_);
    return cache_.size();
}

void QueryLedger::write_state(std::ostream& out) const {
    out << "unique_queries=" << unique_count() << '\n';
}

namespace {

std::vector<std::string> split_ws(const std::string& line) {
    std::istringstream ss(line);
    std::vector<std::string> out;
    for (std::string tok; ss >> tok;) out.push_back(tok);
    return out;
}

bool is_integer(const std::string& s) {
    if (s.empty()) return false;
    long long value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    return ec == std::errc() && ptr == s.data() + s.size();
}

bool comment_or_blank(const std::string& line) {
    auto pos = line.find_first_not_of(" \t\r");
    return pos == std::string::npos || line[pos] == '#';
}

} // namespace

Graph load_edgelist(std::istream& in, EdgeListMode mode) {
    std::set<std::pair<std::string, std::string>> arcs;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (comment_or_blank(line)) continue;
        auto tokens = split_ws(line);
        if (tokens.size() != 2) {
            throw ParseError(line_no, "expected \"src dst\", got " + std::to_string(tokens.size()) +
                                          " fields");
        }
        if (tokens[0] == tokens[1]) continue;
        arcs.emplace(tokens[0], tokens[1]);
    }

    std::set<std::pair<std::string, std::string>> undirected;
    for (const auto& [a, b] : arcs) {
        if (mode == EdgeListMode::ReciprocalDirected && !arcs.contains({b, a})) continue;
        undirected.emplace(std::min(a, b), std::max(a, b));
    }
    if (undirected.empty()) throw EmptyGraph("edge list produced no edges");

    std::vector<std::string> ids;
    for (const auto& [a, b] : undirected) {
        ids.push_back(a);
        ids.push_back(b);
    }
    bool numeric = std::all_of(ids.begin(), ids.end(), is_integer);
    auto less = [numeric](const std::string& x, const std::string& y) {
        if (numeric) return std::stoll(x) < std::stoll(y);
        return x < y;
    };
    std::sort(ids.begin(), ids.end(), less);
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());

    std::unordered_map<std::string, NodeId> dense;
    dense.reserve(ids.size());
    for (NodeId i = 0; i < ids.size(); ++i) dense.emplace(ids[i], i);

    std::vector<std::pair<NodeId, NodeId>> edges;
    edges.reserve(undirected.size());
    for (const auto& [a, b] : undirected) edges.emplace_back(dense.at(a), dense.at(b));

    Graph g = Graph::from_edges(ids.size(), edges);
    g.set_labels(std::move(ids));
    return g;
}

Graph load_edgelist(const std::filesystem::path& path, EdgeListMode mode) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    return load_edgelist(in, mode);
}

AttributeTable load_attributes(std::istream& in, const Graph& graph) {
    std::unordered_map<std::string, NodeId> by_label;
    for (NodeId u = 0; u < graph.node_count(); ++u) by_label.emplace(graph.label(u), u);

    AttributeTable table;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (comment_or_blank(line)) continue;
        auto tokens = split_ws(line);
        if (tokens.size() != 3) throw ParseError(line_no, "expected \"node_id name value\"");
        auto node = by_label.find(tokens[0]);
        if (node == by_label.end()) throw NodeNotFound("attribute for unknown node " + tokens[0]);
        double value = 0.0;
        try {
            std::size_t used = 0;
            value = std::stod(tokens[2], &used);
            if (used != tokens[2].size()) throw std::invalid_argument(tokens[2]);
        } catch (const std::exception&) {
            throw ParseError(line_no, "attribute value is not a number: " + tokens[2]);
        }
        table[node->second][tokens[1]] = value;
    }
    return table;
}

AttributeTable load_attributes(const std::filesystem::path& path, const Graph& graph) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    return load_attributes(in, graph);
}

} // namespace mto
