#include "mto/generators.hpp"

#include <cmath>
#include <ostream>
#include <utility>

#include "mto/errors.hpp"
#include "mto/random.hpp"

namespace mto {

Graph barbell(std::size_t m) {
    if (m < 3) throw DomainError("barbell needs cliques of at least 3 nodes");
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (std::size_t side = 0; side < 2; ++side) {
        const auto base = static_cast<NodeId>(side * m);
        for (NodeId i = 0; i < m; ++i) {
            for (NodeId j = i + 1; j < m; ++j) edges.emplace_back(base + i, base + j);
        }
    }
    auto bridge = barbell_bridge(m);
    edges.emplace_back(bridge.lo, bridge.hi);
    return Graph::from_edges(2 * m, edges);
}

EdgeKey barbell_bridge(std::size_t m) {
    return {static_cast<NodeId>(m - 1), static_cast<NodeId>(m)};
}

void LatentSpaceConfig::validate() const {
    if (n < 2) throw DomainError("latent space model needs n >= 2");
    if (!(a > 0.0 && b > 0.0 && r > 0.0)) throw DomainError("a, b and r must be positive");
    if (std::isnan(alpha) || alpha < 0.0) throw DomainError("alpha must be non-negative");
}

double latent_link_probability(double d, double r, double alpha) {
    if (std::isinf(alpha)) return d < r ? 1.0 : 0.0;
    return 1.0 / (1.0 + std::exp(alpha * (d - r)));
}

LatentSpaceGraph latent_space(const LatentSpaceConfig& config) {
    config.validate();
    Rng rng(config.seed);
    std::uniform_real_distribution<double> ux(0.0, config.a);
    std::uniform_real_distribution<double> uy(0.0, config.b);

    LatentSpaceGraph out;
    out.coords.reserve(config.n);
    for (std::size_t i = 0; i < config.n; ++i) {
        const double x = ux(rng);
        const double y = uy(rng);
        out.coords.push_back({x, y});
    }

    const bool hard = std::isinf(config.alpha);
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (NodeId i = 0; i < config.n; ++i) {
        for (NodeId j = i + 1; j < config.n; ++j) {
            const double d = std::hypot(out.coords[i].x - out.coords[j].x,
                                        out.coords[i].y - out.coords[j].y);
            const double p = latent_link_probability(d, config.r, config.alpha);
            // The hard rule draws nothing, so the stream depends only on n.
            const bool linked = hard ? p == 1.0 : uniform01(rng) < p;
            if (linked) edges.emplace_back(i, j);
        }
    }
    out.graph = Graph::from_edges(config.n, edges);
    return out;
}

void write_coordinates(std::ostream& out, const std::vector<Point2>& coords) {
    for (std::size_t i = 0; i < coords.size(); ++i) {
        out << i << ' ' << coords[i].x << ' ' << coords[i].y << '\n';
    }
}

double removal_gain_factor(const LatentSpaceConfig& config, std::size_t trials) {
    config.validate();
    if (!std::isinf(config.alpha)) {
        throw DomainError("the removal gain bound assumes a hard threshold (alpha = infinity)");
    }
    if (trials < 1000) throw InsufficientTrials("need at least 1000 Monte-Carlo trials");

    Rng rng(config.seed);
    std::uniform_real_distribution<double> ux(0.0, config.a);
    std::uniform_real_distribution<double> uy(0.0, config.b);
    const double limit = 0.75 * config.r * config.r;
    std::size_t hits = 0;
    for (std::size_t t = 0; t < trials; ++t) {
        const double x1 = ux(rng);
        const double x2 = ux(rng);
        const double y1 = uy(rng);
        const double y2 = uy(rng);
        const double z1 = x1 - x2;
        const double z2 = y1 - y2;
        if (z1 * z1 + z2 * z2 <= limit) ++hits;
    }
    const double p = static_cast<double>(hits) / static_cast<double>(trials);
    return 1.0 / (1.0 - p);
}

} // namespace mto
