#include "mto/spectral.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>

#include "mto/errors.hpp"

namespace mto {

namespace {

void check_cut_input(const Graph& g) {
    if (g.node_count() < 2) throw DomainError("conductance needs at least two nodes");
    if (g.node_count() > kMaxExactCutNodes) {
        throw TooLarge("exact conductance limited to " + std::to_string(kMaxExactCutNodes) +
                       " nodes, got " + std::to_string(g.node_count()));
    }
    if (!g.is_connected()) throw Disconnected("conductance of a disconnected graph");
}

std::vector<std::uint32_t> adjacency_masks(const Graph& g) {
    std::vector<std::uint32_t> masks(g.node_count(), 0);
    for (NodeId u = 0; u < g.node_count(); ++u) {
        for (NodeId v : g.neighbors(u)) masks[u] |= std::uint32_t{1} << v;
    }
    return masks;
}

// Visits every cut S (node n-1 never in S) in Gray-code order with the
// running cut size and edge count inside S.
template <typename Visit>
void for_each_cut(const Graph& g, Visit&& visit) {
    const auto adj = adjacency_masks(g);
    const std::size_t free_nodes = g.node_count() - 1;
    const std::uint64_t total = std::uint64_t{1} << free_nodes;
    std::uint32_t mask = 0;
    std::int64_t cut = 0;
    std::int64_t inside = 0;
    for (std::uint64_t i = 1; i < total; ++i) {
        const int x = std::countr_zero(i);
        const std::uint32_t bit = std::uint32_t{1} << x;
        const auto deg = static_cast<std::int64_t>(std::popcount(adj[x]));
        if (mask & bit) {
            mask &= ~bit;
            const auto in_s = static_cast<std::int64_t>(std::popcount(adj[x] & mask));
            cut -= deg - 2 * in_s;
            inside -= in_s;
        } else {
            const auto in_s = static_cast<std::int64_t>(std::popcount(adj[x] & mask));
            mask |= bit;
            cut += deg - 2 * in_s;
            inside += in_s;
        }
        visit(mask, static_cast<std::size_t>(cut), static_cast<std::size_t>(inside));
    }
}

struct Ratio {
    std::size_t num = 1;
    std::size_t den = 0; // den == 0 means "not set"
};

Ratio minimum_ratio(const Graph& g, std::uint32_t* argmin) {
    const std::size_t m = g.edge_count();
    Ratio best;
    for_each_cut(g, [&](std::uint32_t mask, std::size_t cut, std::size_t inside) {
        const std::size_t den = std::min(inside + cut, m - inside);
        if (best.den == 0 || cut * best.den < best.num * den) {
            best = {cut, den};
            if (argmin) *argmin = mask;
        }
    });
    return best;
}

Eigen::MatrixXd transition_matrix(const Graph& g) {
    const auto n = static_cast<Eigen::Index>(g.node_count());
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
    for (NodeId u = 0; u < g.node_count(); ++u) {
        auto nbrs = g.neighbors(u);
        for (NodeId v : nbrs) p(u, v) = 1.0 / static_cast<double>(nbrs.size());
    }
    return p;
}

void check_dense_input(const Graph& g) {
    if (g.node_count() < 2) throw DomainError("spectral analysis needs at least two nodes");
    if (g.node_count() > kMaxDenseSpectralNodes) {
        throw TooLarge("dense spectral analysis limited to " +
                       std::to_string(kMaxDenseSpectralNodes) + " nodes");
    }
    if (!g.is_connected()) throw Disconnected("spectral analysis of a disconnected graph");
}

double delta_of(const Graph& g, const Eigen::MatrixXd& pt, const std::vector<double>& pi) {
    double worst = 0.0;
    for (NodeId u = 0; u < g.node_count(); ++u) {
        for (NodeId v : g.neighbors(u)) worst = std::max(worst, std::abs(pt(u, v) - pi[v]) / pi[v]);
    }
    return worst;
}

} // namespace

CutResult conductance_exact(const Graph& g) {
    check_cut_input(g);
    std::uint32_t argmin = 0;
    Ratio best = minimum_ratio(g, &argmin);
    CutResult r;
    r.cut_edges = best.num;
    r.denominator = best.den;
    r.phi = static_cast<double>(best.num) / static_cast<double>(best.den);
    for (NodeId u = 0; u < g.node_count(); ++u) {
        if (argmin & (std::uint32_t{1} << u)) r.s_side.push_back(u);
    }
    return r;
}

std::set<EdgeKey> cross_cutting_edges(const Graph& g) {
    check_cut_input(g);
    const Ratio best = minimum_ratio(g, nullptr);
    const auto edges = g.edges();
    const std::size_t m = g.edge_count();
    std::vector<bool> separated(edges.size(), false);
    for_each_cut(g, [&](std::uint32_t mask, std::size_t cut, std::size_t inside) {
        const std::size_t den = std::min(inside + cut, m - inside);
        if (cut * best.den != best.num * den) return;
        for (std::size_t i = 0; i < edges.size(); ++i) {
            const bool lo_in = (mask >> edges[i].lo) & 1U;
            const bool hi_in = (mask >> edges[i].hi) & 1U;
            if (lo_in != hi_in) separated[i] = true;
        }
    });
    std::set<EdgeKey> out;
    for (std::size_t i = 0; i < edges.size(); ++i) {
        if (separated[i]) out.insert(edges[i]);
    }
    return out;
}

bool cross_cutting_oracle(const Graph& g, EdgeKey edge) {
    if (!g.contains(edge.lo) || !g.contains(edge.hi) || !g.has_edge(edge.lo, edge.hi)) {
        throw EdgeAbsent("edge " + to_string(edge) + " is not in the graph");
    }
    return cross_cutting_edges(g).contains(edge);
}

std::vector<double> rpd_delta_series(const Graph& g, std::size_t t_max) {
    check_dense_input(g);
    const double n = static_cast<double>(g.node_count());
    if (n * n * n * static_cast<double>(t_max) > 5e11) {
        throw ComputeBudget("matrix power budget exceeded for t = " + std::to_string(t_max));
    }
    const double two_m = 2.0 * static_cast<double>(g.edge_count());
    std::vector<double> pi(g.node_count());
    for (NodeId v = 0; v < g.node_count(); ++v) pi[v] = static_cast<double>(g.degree(v)) / two_m;

    const Eigen::MatrixXd p = transition_matrix(g);
    Eigen::MatrixXd pt = Eigen::MatrixXd::Identity(p.rows(), p.cols());
    std::vector<double> out;
    out.reserve(t_max + 1);
    out.push_back(delta_of(g, pt, pi));
    for (std::size_t t = 1; t <= t_max; ++t) {
        pt = pt * p;
        if (t % 32 == 0) {
            for (Eigen::Index r = 0; r < pt.rows(); ++r) pt.row(r) /= pt.row(r).sum();
        }
        out.push_back(delta_of(g, pt, pi));
    }
    return out;
}

double rpd_delta(const Graph& g, std::size_t t) { return rpd_delta_series(g, t).back(); }

SpectralReport slem_mixing_time(const Graph& g, std::size_t series_length) {
    check_dense_input(g);
    const auto n = static_cast<Eigen::Index>(g.node_count());
    Eigen::MatrixXd sym = Eigen::MatrixXd::Zero(n, n);
    for (NodeId u = 0; u < g.node_count(); ++u) {
        const double ku = static_cast<double>(g.degree(u));
        for (NodeId v : g.neighbors(u)) {
            sym(u, v) = 1.0 / std::sqrt(ku * static_cast<double>(g.degree(v)));
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym, Eigen::EigenvaluesOnly);
    const auto& eig = solver.eigenvalues(); // ascending; the last one is 1
    double slem = std::max(std::abs(eig(0)), std::abs(eig(n - 2)));
    slem = std::min(slem, 1.0);

    SpectralReport r;
    r.slem = slem;
    if (slem >= 1.0 - 1e-12) {
        r.slem = 1.0;
        r.mixing_time_estimate = std::numeric_limits<double>::infinity();
    } else if (slem <= 0.0) {
        r.mixing_time_estimate = 0.0;
    } else {
        r.mixing_time_estimate = 1.0 / std::log(1.0 / slem);
    }
    if (series_length > 0) {
        auto series = rpd_delta_series(g, series_length - 1);
        for (std::size_t t = 0; t < series.size(); ++t) r.delta_series.emplace_back(t, series[t]);
    }
    return r;
}

MixingBound mixing_bound(double phi, std::size_t num_edges, std::size_t min_degree,
                         double epsilon) {
    if (!(phi > 0.0 && phi < 1.0)) throw DomainError("phi must lie in (0,1)");
    if (!(epsilon > 0.0)) throw DomainError("epsilon must be positive");
    if (num_edges == 0 || min_degree == 0) throw DomainError("graph must have edges and no isolated nodes");
    MixingBound b;
    b.c = 2.0 * static_cast<double>(num_edges) / static_cast<double>(min_degree);
    const double rate = -std::log1p(-phi * phi / 2.0);
    b.coefficient_per_log10 = std::log(10.0) / rate;
    b.t_bound = std::log(b.c / epsilon) / rate;
    return b;
}

std::pair<double, double> delta_bounds(double phi, double c, std::size_t t) {
    const double e = static_cast<double>(t);
    return {std::pow(1.0 - 2.0 * phi, e), c * std::pow(1.0 - phi * phi / 2.0, e)};
}

} // namespace mto
