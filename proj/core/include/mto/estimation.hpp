#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "mto/access.hpp"
#include "mto/overlay.hpp"
#include "mto/random.hpp"

namespace mto {

struct GewekeResult {
    double z = 0.0;
    double window_a_mean = 0.0;
    double window_b_mean = 0.0;
    double window_a_var = 0.0;
    double window_b_var = 0.0;
    bool converged = false;
};

/// Geweke diagnostic on `trace` after dropping `burn_in` leading values.
///
/// Window A is the first 10% of the remaining values, window B the last 50%;
/// Z = |mean_A - mean_B| / sqrt(var_A + var_B) with unbiased sample
/// variances of the values themselves (not of the window means), so Z tends
/// to 0 as both windows grow on a converged chain.
///
/// Needs at least 20 values after burn-in (DomainError otherwise) and throws
/// DegenerateSequence when both windows have zero variance.
GewekeResult geweke_z(std::span<const double> trace, std::size_t burn_in, double threshold);

/// Incremental convergence monitor used as the walk's stopping rule: every
/// `check_interval` observations it runs geweke_z with burn-in equal to
/// `burn_in_fraction` of the observed segment.
class GewekeMonitor {
public:
    explicit GewekeMonitor(double threshold, std::size_t check_interval = 100,
                           double burn_in_fraction = 0.1);

    /// Starts a fresh segment.
    void reset();
    /// Adds one value; true when this observation triggered a passing test.
    bool observe(double value);

    double last_z() const noexcept { return last_z_; }
    std::size_t segment_length() const noexcept { return values_.size(); }

private:
    double threshold_;
    std::size_t check_interval_;
    double burn_in_fraction_;
    std::vector<double> values_;
    double last_z_ = -1.0;
};

struct SampleEntry {
    NodeId node = 0;
    double weight = 1.0;
    std::map<std::string, double> attributes;
};

/// Walk samples with importance weights pi_hat / tau_hat for a uniform target.
struct SampleSet {
    std::string scheme;
    std::vector<SampleEntry> entries;

    std::size_t size() const noexcept { return entries.size(); }
    bool empty() const noexcept { return entries.empty(); }
};

/// Self-normalised importance-sampling estimate of the population mean of
/// `attribute`: sum(f w) / sum(w). Throws EmptySample / AttributeMissing.
double importance_estimate(const SampleSet& samples, const std::string& attribute);

/// Same estimate over the first `prefix` entries only.
double importance_estimate(const SampleSet& samples, const std::string& attribute,
                           std::size_t prefix);

double relative_error(double estimate, double truth);

/// Symmetrised KL divergence D(P||Q) + D(Q||P) = sum (p - q) ln(p / q).
///
/// Both inputs must sum to 1 within 1e-9. If either has a zero entry, a
/// pseudo-mass of 1 / (10 N) is added to every entry of both and they are
/// renormalised; N is `sample_count`, or the support size when 0.
double kl_bias(std::span<const double> ideal, std::span<const double> empirical,
               std::size_t sample_count = 0);

/// Visit counts -> probabilities.
std::vector<double> empirical_distribution(std::span<const std::size_t> counts);

/// Unbiased estimate of u's overlay degree k*_u from a simple random sample
/// of m base neighbours taken without replacement.
///
/// An incident base edge survives when it is still in the overlay and either
/// carries a cached keep decision or fails a fresh removal test (which costs
/// a query for the neighbour). The estimate is k_u * survivors / m plus the
/// number of overlay-only neighbours. The overlay ledger is not modified.
/// Throws SampleTooLarge when m > k_u.
double overlay_degree_estimate(NodeId u, std::size_t m, QueryLedger& access,
                               const OverlayLedger& overlay, Rng& rng);

} // namespace mto
