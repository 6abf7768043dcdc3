#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <vector>

#include "mto/graph.hpp"

namespace mto {

/// Two m-cliques {0..m-1} and {m..2m-1} joined by the bridge (m-1, m).
/// Throws DomainError for m < 3.
Graph barbell(std::size_t m);
EdgeKey barbell_bridge(std::size_t m);

struct LatentSpaceConfig {
    std::size_t n = 100;
    double a = 4.0;
    double b = 5.0;
    double r = 0.7;
    /// Logistic sharpness; infinity gives the hard rule d < r.
    double alpha = std::numeric_limits<double>::infinity();
    std::uint64_t seed = 1;

    void validate() const;
};

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

struct LatentSpaceGraph {
    Graph graph;
    std::vector<Point2> coords;
};

/// n points uniform on [0,a] x [0,b]; each pair joined independently with
/// probability 1 / (1 + exp(alpha (d - r))). Isolated nodes are kept.
LatentSpaceGraph latent_space(const LatentSpaceConfig& config);

/// Connection probability for distance d.
double latent_link_probability(double d, double r, double alpha);

/// Writes "node_id x y" lines.
void write_coordinates(std::ostream& out, const std::vector<Point2>& coords);

/// Monte-Carlo lower bound on the conductance gain from edge removals in the
/// hard-threshold latent-space model: estimates p = P(z1^2 + z2^2 <= 0.75 r^2)
/// for coordinate gaps z of two uniform points and returns 1 / (1 - p).
/// Throws DomainError for finite alpha, InsufficientTrials below 1000.
double removal_gain_factor(const LatentSpaceConfig& config, std::size_t trials);

} // namespace mto
