// Acceptance checks. `mto_acceptance` runs every criterion; `mto_acceptance 3 7`
// runs a subset. One PASS/FAIL line per criterion; exit status 1 on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "mto/errors.hpp"
#include "mto/estimation.hpp"
#include "mto/experiment.hpp"
#include "mto/generators.hpp"
#include "mto/samplers.hpp"
#include "mto/spectral.hpp"
#include "oracles.hpp"

using namespace mto;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass = false;
    std::string detail;
};

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

Graph complete(std::size_t n) {
    std::vector<std::pair<NodeId, NodeId>> e;
    for (NodeId i = 0; i < n; ++i)
        for (NodeId j = i + 1; j < n; ++j) e.emplace_back(i, j);
    return Graph::from_edges(n, e);
}

Graph random_connected(std::size_t n, double p, std::uint64_t seed) {
    Rng rng(seed);
    while (true) {
        std::vector<std::pair<NodeId, NodeId>> e;
        for (NodeId i = 0; i < n; ++i)
            for (NodeId j = i + 1; j < n; ++j)
                if (uniform01(rng) < p) e.emplace_back(i, j);
        auto g = Graph::from_edges(n, e);
        if (g.is_connected()) return g;
    }
}

Graph latent_giant(std::size_t n, std::uint64_t seed) {
    LatentSpaceConfig cfg;
    cfg.n = n;
    cfg.seed = seed;
    return latent_space(cfg).graph.largest_component();
}

// 1. Exact conductance of barbell(11) in under a minute.
Outcome barbell_conductance() {
    const auto t0 = Clock::now();
    auto cut = conductance_exact(barbell(11));
    const double secs = seconds_since(t0);
    const bool exact = cut.cut_edges * 56 == cut.denominator;
    return {exact && secs < 60.0,
            fmt("phi = %zu/%zu = %.9f, %.2f s", cut.cut_edges, cut.denominator, cut.phi, secs)};
}

// 2. Mixing-bound coefficients within 0.1%, c = 22.2 for barbell(11).
Outcome mixing_coefficients() {
    const std::pair<double, double> cases[] = {
        {0.010, 46050.5}, {0.012, 31979.1}, {0.018, 14212.3}, {0.053, 1638.3}, {0.105, 416.6}};
    auto g = barbell(11);
    bool ok = true;
    double worst = 0.0;
    double c = 0.0;
    for (auto [phi, want] : cases) {
        auto b = mixing_bound(phi, g.edge_count(), g.min_degree(), 0.01);
        const double rel = std::abs(b.coefficient_per_log10 - want) / want;
        worst = std::max(worst, rel);
        ok &= rel <= 1e-3;
        c = b.c;
    }
    ok &= std::abs(c - 22.2) < 1e-9;
    return {ok, fmt("worst relative deviation %.2e, c = %.4f", worst, c)};
}

// 3. No removal or replacement lowers brute-force conductance; bridge kept.
Outcome rewiring_soundness() {
    const auto t0 = Clock::now();
    std::size_t removals = 0, replacements = 0, additions = 0, bad = 0, bridge_hits = 0;
    std::size_t bridge_swaps = 0;
    std::size_t additions_lowering = 0;
    std::string first_bad;
    for (std::size_t m = 4; m <= 8; ++m) {
        const Graph g = barbell(m);
        const EdgeKey bridge = barbell_bridge(m);
        for (std::uint64_t seed = 1; seed <= 50; ++seed) {
            QueryLedger access(g);
            OverlayLedger overlay;
            const std::uint64_t run_seed = derive_seed(1000 + m, seed);
            Rng rng(run_seed);
            SamplerConfig cfg;
            cfg.scheme = Scheme::MtoBoth;
            oracle::Ratio current = oracle::conductance(g);
            WalkContext ctx{access, overlay, rng, cfg, nullptr, {}};
            ctx.observer = [&](const RewireEvent& ev, const OverlayLedger& ledger) {
                auto star = ledger.materialize(g);
                oracle::Ratio next{0, 1};
                bool connected = star.is_connected();
                if (connected) next = oracle::conductance(star);
                const bool lowered = !connected || oracle::less(next, current);
                switch (ev.kind) {
                    case RewireEvent::Kind::Removal: ++removals; break;
                    case RewireEvent::Kind::Replacement: ++replacements; break;
                    case RewireEvent::Kind::Addition: ++additions; break;
                }
                if (ev.kind == RewireEvent::Kind::Addition) {
                    additions_lowering += lowered;
                } else if (lowered) {
                    ++bad;
                    if (first_bad.empty()) {
                        first_bad = fmt(" first: m=%zu seed=%llu edge %s", m,
                                        static_cast<unsigned long long>(seed),
                                        to_string(ev.old_edge).c_str());
                    }
                }
                if (ev.old_edge == bridge) {
                    if (ev.kind == RewireEvent::Kind::Removal) ++bridge_hits;
                    if (ev.kind == RewireEvent::Kind::Replacement) ++bridge_swaps;
                }
                current = next;
            };
            auto state = start_walk(access.random_node(rng), ctx, run_seed);
            for (int step = 0; step < 2000; ++step) mto_step(state, ctx);
        }
    }
    const double secs = seconds_since(t0);
    return {bad == 0 && bridge_hits == 0 && secs < 300.0,
            fmt("%zu removals, %zu replacements checked, %zu lowered phi, bridge removed %zu "
                "times (replaced by another cross edge %zu times); %zu additions (%zu lowered "
                "phi, not covered); %.1f s%s",
                removals, replacements, bad, bridge_hits, bridge_swaps, additions,
                additions_lowering, secs,
                first_bad.c_str())};
}

// 4. (1 - 2 phi)^t <= Delta(t) <= c (1 - phi^2/2)^t for t = 0..200.
Outcome delta_sandwich() {
    struct Case {
        std::string name;
        Graph g;
    };
    std::vector<Case> cases;
    for (std::size_t m = 4; m <= 8; ++m) cases.push_back({"B(" + std::to_string(m) + ")", barbell(m)});
    cases.push_back({"K4", complete(4)});
    for (std::uint64_t s = 0; s < 5; ++s) {
        const std::size_t n = 6 + s;
        cases.push_back({"G(" + std::to_string(n) + ",0.5)#" + std::to_string(s),
                         random_connected(n, 0.5, derive_seed(404, s))});
    }
    std::vector<std::string> failures;
    for (const auto& c : cases) {
        const double phi = conductance_exact(c.g).phi;
        const double cc = 2.0 * static_cast<double>(c.g.edge_count()) /
                          static_cast<double>(c.g.min_degree());
        auto series = rpd_delta_series(c.g, 200);
        for (std::size_t t = 0; t < series.size(); ++t) {
            auto [lo, hi] = delta_bounds(phi, cc, t);
            if (series[t] < lo - 1e-9) {
                failures.push_back(fmt("%s t=%zu: Delta=%.4g < lower %.4g (phi=%.3f)",
                                       c.name.c_str(), t, series[t], lo, phi));
                break;
            }
            if (series[t] > hi + 1e-9) {
                failures.push_back(fmt("%s t=%zu: Delta=%.4g > upper %.4g", c.name.c_str(), t,
                                       series[t], hi));
                break;
            }
        }
    }
    std::string detail = fmt("%zu/%zu graphs inside the bounds", cases.size() - failures.size(),
                             cases.size());
    for (const auto& f : failures) detail += "; " + f;
    return {failures.empty(), detail};
}

// 5. Removal gain factor in [1.042, 1.08] for 10 seeds, under 10 s.
Outcome gain_factor() {
    const auto t0 = Clock::now();
    double lo = 1e9, hi = 0.0;
    for (std::uint64_t s = 1; s <= 10; ++s) {
        LatentSpaceConfig cfg;
        cfg.seed = s;
        const double f = removal_gain_factor(cfg, 20000);
        lo = std::min(lo, f);
        hi = std::max(hi, f);
    }
    const double secs = seconds_since(t0);
    return {lo >= 1.052 - 0.01 && hi <= 1.08 && secs < 10.0,
            fmt("factor range [%.4f, %.4f] over 10 seeds, %.2f s", lo, hi, secs)};
}

std::vector<double> visit_law(const WalkState& state, std::size_t n) {
    std::vector<std::size_t> visits(n, 0);
    for (const auto& t : state.trace) ++visits[t.node];
    return empirical_distribution(visits);
}

std::vector<double> degree_law(const Graph& g) {
    std::vector<double> p(g.node_count());
    const double two_e = 2.0 * static_cast<double>(g.edge_count());
    for (NodeId v = 0; v < g.node_count(); ++v) p[v] = static_cast<double>(g.degree(v)) / two_e;
    return p;
}

// 6. Long-run visit laws against k/2|E| (SRW) and k*/2|E*| (MTO).
Outcome stationary_laws() {
    const auto t0 = Clock::now();
    const Graph g = barbell(11);
    double kl_srw = 0.0, kl_mto = 0.0;
    {
        QueryLedger access(g);
        OverlayLedger overlay;
        Rng rng(601);
        SamplerConfig cfg;
        cfg.scheme = Scheme::Srw;
        WalkContext ctx{access, overlay, rng, cfg, nullptr, {}};
        auto state = start_walk(access.random_node(rng), ctx, 601);
        for (int i = 0; i < 200000; ++i) srw_step(state, ctx);
        kl_srw = kl_bias(degree_law(g), visit_law(state, 22), state.trace.size());
    }
    {
        QueryLedger access(g);
        OverlayLedger overlay;
        Rng rng(602);
        SamplerConfig cfg;
        cfg.scheme = Scheme::MtoBoth;
        WalkContext ctx{access, overlay, rng, cfg, nullptr, {}};
        auto state = start_walk(access.random_node(rng), ctx, 602);
        for (int i = 0; i < 200000; ++i) mto_step(state, ctx);
        kl_mto = kl_bias(degree_law(overlay.materialize(g)), visit_law(state, 22),
                         state.trace.size());
    }
    const double secs = seconds_since(t0);
    return {kl_srw < 0.01 && kl_mto < 0.02 && secs < 120.0,
            fmt("KL(SRW) = %.5f (< 0.01), KL(MTO vs G*) = %.5f (< 0.02), %.1f s", kl_srw, kl_mto,
                secs)};
}

struct PairedCount {
    std::size_t wins = 0;
    std::size_t runs = 0;
    double srw_mean = 0.0;
    double mto_mean = 0.0;
};

PairedCount paired_first_convergence(const Graph& g, std::uint64_t base) {
    PairedCount out;
    for (std::uint64_t r = 0; r < 20; ++r) {
        const std::uint64_t seed = derive_seed(base, r);
        std::size_t q[2] = {0, 0};
        int i = 0;
        for (Scheme s : {Scheme::Srw, Scheme::MtoBoth}) {
            SamplerConfig cfg;
            cfg.scheme = s;
            cfg.geweke_threshold = 0.1;
            cfg.sample_size = 1;
            QueryLedger access(g);
            auto walk = run_walk(cfg, access, seed);
            q[i++] = walk.unique_queries.front();
        }
        out.wins += q[1] < q[0];
        out.srw_mean += static_cast<double>(q[0]) / 20.0;
        out.mto_mean += static_cast<double>(q[1]) / 20.0;
        ++out.runs;
    }
    return out;
}

// 7. MTO converges with fewer unique queries than SRW in >= 16 of 20 paired
// runs, and the SLEM ordering Both <= RM, RP <= base holds on average.
Outcome query_cost_superiority() {
    const auto barbell_pairs = paired_first_convergence(barbell(11), 701);
    const Graph latent = latent_giant(200, 7);
    const auto latent_pairs = paired_first_convergence(latent, 702);

    double slem_base = 0, slem_both = 0, slem_rm = 0, slem_rp = 0;
    for (std::uint64_t s = 1; s <= 10; ++s) {
        const Graph g = latent_giant(50 + 5 * (s - 1), 7000 + s);
        slem_base += slem_mixing_time(g).slem / 10.0;
        for (Scheme scheme : {Scheme::MtoBoth, Scheme::MtoRemove, Scheme::MtoReplace}) {
            VerifySpec spec;
            spec.scheme = scheme;
            spec.seed = derive_seed(703, s);
            auto v = verify_overlay(g, spec);
            double& slot = scheme == Scheme::MtoBoth     ? slem_both
                           : scheme == Scheme::MtoRemove ? slem_rm
                                                         : slem_rp;
            slot += v.slem_overlay / 10.0;
        }
    }
    const bool cost_ok = barbell_pairs.wins >= 16 && latent_pairs.wins >= 16;
    const bool slem_ok = slem_both <= slem_rm && slem_both <= slem_rp && slem_rm <= slem_base &&
                         slem_rp <= slem_base;
    return {cost_ok && slem_ok,
            fmt("barbell: MTO fewer in %zu/20 (mean %.1f vs SRW %.1f); latent(%zu nodes): %zu/20 "
                "(mean %.1f vs %.1f); mean SLEM Both %.4f, RM %.4f, RP %.4f, base %.4f",
                barbell_pairs.wins, barbell_pairs.mto_mean, barbell_pairs.srw_mean,
                latent.node_count(), latent_pairs.wins, latent_pairs.mto_mean,
                latent_pairs.srw_mean, slem_both, slem_rm, slem_rp, slem_base)};
}

// 8. SRW importance estimate of the barbell mean degree within 2% (median of
// 20 runs at N = 5000); constant attribute reproduced exactly.
Outcome estimator_correctness() {
    const Graph g = barbell(11);
    const double truth = 222.0 / 22.0;
    AttributeTable constant;
    for (NodeId v = 0; v < 22; ++v) constant[v]["c"] = 3.7;
    std::vector<double> errors;
    double worst_constant = 0.0;
    for (std::uint64_t r = 0; r < 20; ++r) {
        QueryLedger access(g, {}, &constant);
        SamplerConfig cfg;
        cfg.scheme = Scheme::Srw;
        cfg.sample_size = 5000;
        auto walk = run_walk(cfg, access, derive_seed(801, r));
        errors.push_back(relative_error(importance_estimate(walk.samples, "degree"), truth));
        worst_constant = std::max(
            worst_constant, std::abs(importance_estimate(walk.samples, "c") - 3.7) / 3.7);
    }
    std::sort(errors.begin(), errors.end());
    const double median = 0.5 * (errors[9] + errors[10]);
    return {median <= 0.02 && worst_constant <= 1e-12,
            fmt("median relative error %.4f (<= 0.02), constant attribute deviation %.1e",
                median, worst_constant)};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

// 9. Identical spec and seed give byte-identical reports.
Outcome determinism() {
    const auto root = fs::temp_directory_path() / "mto_acceptance_determinism";
    fs::remove_all(root);
    std::vector<std::string> mismatched;
    std::size_t compared = 0;
    for (const char* graph : {"barbell:11", "latent:n=120,a=4,b=5,r=0.7,alpha=inf,seed=9"}) {
        ExperimentSpec spec;
        spec.graph = graph;
        spec.schemes = {Scheme::Srw, Scheme::Mhrw, Scheme::Rj, Scheme::MtoBoth, Scheme::MtoRemove,
                        Scheme::MtoReplace};
        spec.runs = 3;
        spec.sample_size = 15;
        spec.seed = 909;
        spec.out_dir = root / "a";
        run_experiment(spec);
        spec.out_dir = root / "b";
        spec.threads = 3;
        run_experiment(spec);
        for (const char* file : {"measurements.csv", "runs.csv", "summary.json"}) {
            ++compared;
            if (slurp(root / "a" / file) != slurp(root / "b" / file)) {
                mismatched.push_back(std::string(graph) + ":" + file);
            }
        }
    }
    std::string detail = fmt("%zu/%zu report files byte-identical across re-runs",
                             compared - mismatched.size(), compared);
    for (const auto& m : mismatched) detail += "; differs: " + m;
    return {mismatched.empty(), detail};
}

struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> check;
};

} // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> all = {
        {1, "barbell conductance", barbell_conductance},
        {2, "mixing-bound coefficients", mixing_coefficients},
        {3, "rewiring oracle soundness", rewiring_soundness},
        {4, "delta(t) conductance sandwich", delta_sandwich},
        {5, "removal gain factor", gain_factor},
        {6, "stationary-law check", stationary_laws},
        {7, "query-cost superiority", query_cost_superiority},
        {8, "estimator correctness", estimator_correctness},
        {9, "determinism", determinism},
    };
    std::vector<int> wanted;
    for (int i = 1; i < argc; ++i) wanted.push_back(std::atoi(argv[i]));

    bool ok = true;
    for (const auto& c : all) {
        if (!wanted.empty() && std::find(wanted.begin(), wanted.end(), c.id) == wanted.end()) {
            continue;
        }
        Outcome o;
        try {
            o = c.check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << c.id << " (" << c.name
                  << "): " << o.detail << std::endl;
        ok &= o.pass;
    }
    return ok ? 0 : 1;
}
