#pragma once

#include <cstddef>
#include <set>
#include <utility>
#include <vector>

#include "mto/graph.hpp"

namespace mto {

inline constexpr std::size_t kMaxExactCutNodes = 24;
inline constexpr std::size_t kMaxDenseSpectralNodes = 2000;

/// Minimising cut of the conductance
///
///     phi(S) = |cut(S)| / min(a(S), a(S'))
///
/// where a(X) counts edges with at least one endpoint in X, each edge once.
struct CutResult {
    std::vector<NodeId> s_side;
    std::size_t cut_edges = 0;
    std::size_t denominator = 0;
    double phi = 0.0;
};

/// Exhaustive conductance over all 2^(n-1) - 1 cuts (the last node is pinned
/// to the complement). Throws Disconnected, TooLarge (n > 24) or DomainError
/// (n < 2). Ties keep the first cut in Gray-code order.
CutResult conductance_exact(const Graph& g);

/// Every edge separated by at least one conductance-minimising cut.
std::set<EdgeKey> cross_cutting_edges(const Graph& g);

/// Whether `edge` is separated by some minimising cut. Throws EdgeAbsent in
/// addition to the conductance_exact errors.
bool cross_cutting_oracle(const Graph& g, EdgeKey edge);

/// Relative point-wise distance of the simple random walk after t steps:
/// max over u and v in N(u) of |P^t(u,v) - pi(v)| / pi(v), pi(v) = k_v / 2|E|.
double rpd_delta(const Graph& g, std::size_t t);
/// rpd_delta for t = 0..t_max.
std::vector<double> rpd_delta_series(const Graph& g, std::size_t t_max);

struct SpectralReport {
    double slem = 0.0;
    /// 1 / ln(1 / slem); +infinity when slem == 1.
    double mixing_time_estimate = 0.0;
    std::vector<std::pair<std::size_t, double>> delta_series;
};

/// Second-largest eigenvalue modulus of the walk's transition matrix,
/// computed on the symmetric matrix D^-1/2 A D^-1/2. `series_length` > 0 also
/// fills delta_series for t = 0..series_length-1.
SpectralReport slem_mixing_time(const Graph& g, std::size_t series_length = 0);

struct MixingBound {
    double c = 0.0;                     ///< 2|E| / min degree
    double coefficient_per_log10 = 0.0; ///< t_bound = coefficient * log10(c / epsilon)
    double t_bound = 0.0;
};

/// Steps after which c (1 - phi^2/2)^t <= epsilon. Throws DomainError for
/// phi outside (0,1) or non-positive epsilon.
MixingBound mixing_bound(double phi, std::size_t num_edges, std::size_t min_degree,
                         double epsilon);

/// (1 - 2 phi)^t and c (1 - phi^2/2)^t, the conductance sandwich around
/// rpd_delta(t).
std::pair<double, double> delta_bounds(double phi, double c, std::size_t t);

} // namespace mto
