#include "mto/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mto/errors.hpp"
#include "mto/rewiring.hpp"

namespace mto {

namespace {

std::pair<double, double> mean_and_variance(std::span<const double> xs) {
    const double n = static_cast<double>(xs.size());
    const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return {mean, xs.size() > 1 ? ss / (n - 1.0) : 0.0};
}

} // namespace

GewekeResult geweke_z(std::span<const double> trace, std::size_t burn_in, double threshold) {
    if (burn_in > trace.size() || trace.size() - burn_in < 20) {
        throw DomainError("geweke_z needs at least 20 values after burn-in");
    }
    auto seq = trace.subspan(burn_in);
    const std::size_t a_len = seq.size() / 10;
    const std::size_t b_len = seq.size() / 2;
    auto [a_mean, a_var] = mean_and_variance(seq.first(a_len));
    auto [b_mean, b_var] = mean_and_variance(seq.last(b_len));

    GewekeResult r;
    r.window_a_mean = a_mean;
    r.window_b_mean = b_mean;
    r.window_a_var = a_var;
    r.window_b_var = b_var;
    if (a_var + b_var <= 0.0) {
        throw DegenerateSequence("both Geweke windows have zero variance");
    }
    r.z = std::abs(a_mean - b_mean) / std::sqrt(a_var + b_var);
    r.converged = r.z <= threshold;
    return r;
}

GewekeMonitor::GewekeMonitor(double threshold, std::size_t check_interval,
                             double burn_in_fraction)
    : threshold_(threshold),
      check_interval_(std::max<std::size_t>(1, check_interval)),
      burn_in_fraction_(burn_in_fraction) {}

void GewekeMonitor::reset() {
    values_.clear();
    last_z_ = -1.0;
}

bool GewekeMonitor::observe(double value) {
    values_.push_back(value);
    if (values_.size() % check_interval_ != 0) return false;
    const auto burn_in =
        static_cast<std::size_t>(burn_in_fraction_ * static_cast<double>(values_.size()));
    if (values_.size() - burn_in < 20) return false;
    try {
        auto r = geweke_z(values_, burn_in, threshold_);
        last_z_ = r.z;
        return r.converged;
    } catch (const DegenerateSequence&) {
        // A constant segment carries no evidence either way; keep walking.
        return false;
    }
}

double importance_estimate(const SampleSet& samples, const std::string& attribute) {
    return importance_estimate(samples, attribute, samples.size());
}

double importance_estimate(const SampleSet& samples, const std::string& attribute,
                           std::size_t prefix) {
    prefix = std::min(prefix, samples.size());
    if (prefix == 0) throw EmptySample("importance estimate over an empty sample set");
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < prefix; ++i) {
        const auto& e = samples.entries[i];
        auto it = e.attributes.find(attribute);
        if (it == e.attributes.end()) {
            throw AttributeMissing("sample of node " + std::to_string(e.node) + " lacks attribute " +
                                   attribute);
        }
        num += it->second * e.weight;
        den += e.weight;
    }
    return num / den;
}

double relative_error(double estimate, double truth) {
    if (truth == 0.0) throw DomainError("relative error against a zero ground truth");
    return std::abs(estimate - truth) / std::abs(truth);
}

double kl_bias(std::span<const double> ideal, std::span<const double> empirical,
               std::size_t sample_count) {
    if (ideal.size() != empirical.size() || ideal.empty()) {
        throw DomainError("kl_bias needs two distributions over the same non-empty support");
    }
    auto check = [](std::span<const double> d) {
        double s = 0.0;
        for (double x : d) {
            if (x < 0.0 || !std::isfinite(x)) throw DomainError("negative or non-finite probability");
            s += x;
        }
        if (std::abs(s - 1.0) > 1e-9) throw DomainError("distribution does not sum to 1");
    };
    check(ideal);
    check(empirical);

    const std::size_t n = ideal.size();
    const bool has_zero = std::any_of(ideal.begin(), ideal.end(), [](double x) { return x == 0.0; }) ||
                          std::any_of(empirical.begin(), empirical.end(),
                                      [](double x) { return x == 0.0; });
    double pseudo = 0.0;
    if (has_zero) {
        pseudo = 1.0 / (10.0 * static_cast<double>(sample_count > 0 ? sample_count : n));
    }
    const double norm = 1.0 + pseudo * static_cast<double>(n);

    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double p = (ideal[i] + pseudo) / norm;
        const double q = (empirical[i] + pseudo) / norm;
        if (p == q) continue;
        total += (p - q) * std::log(p / q);
    }
    return total;
}

std::vector<double> empirical_distribution(std::span<const std::size_t> counts) {
    const double total = static_cast<double>(std::accumulate(counts.begin(), counts.end(), std::size_t{0}));
    if (total == 0.0) throw EmptySample("no visits recorded");
    std::vector<double> out;
    out.reserve(counts.size());
    for (auto c : counts) out.push_back(static_cast<double>(c) / total);
    return out;
}

double overlay_degree_estimate(NodeId u, std::size_t m, QueryLedger& access,
                               const OverlayLedger& overlay, Rng& rng) {
    const auto& u_view = access.query(u);
    const std::size_t k = u_view.degree();
    if (m == 0) throw DomainError("overlay degree estimate needs m >= 1");
    if (m > k) {
        throw SampleTooLarge("cannot draw " + std::to_string(m) + " of " + std::to_string(k) +
                             " neighbours");
    }

    // Partial Fisher-Yates for a sample without replacement.
    std::vector<NodeId> pool(u_view.neighbors);
    for (std::size_t i = 0; i < m; ++i) {
        std::size_t j = i + uniform_index(rng, pool.size() - i);
        std::swap(pool[i], pool[j]);
    }

    std::size_t survivors = 0;
    for (std::size_t i = 0; i < m; ++i) {
        const NodeId w = pool[i];
        const auto key = EdgeKey::of(u, w);
        if (overlay.is_removed(key)) continue;
        if (overlay.decision(key) == Decision::NotRemovable) {
            ++survivors;
            continue;
        }
        const auto& w_view = access.query(w);
        auto w_nbrs = overlay.resolve(w, w_view.neighbors);
        auto u_nbrs = overlay.resolve(u, u_view.neighbors);
        auto known = known_overlay_degrees(intersect_sorted(u_nbrs, w_nbrs), access, overlay);
        if (!is_removable_with_degrees(u_view, w_view, known, overlay, access).removable) ++survivors;
    }
    return static_cast<double>(k) * static_cast<double>(survivors) / static_cast<double>(m) +
           static_cast<double>(overlay.added_degree(u));
}

} // namespace mto
