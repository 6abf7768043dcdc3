#include "mto/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "mto/errors.hpp"
#include "mto/spectral.hpp"

namespace mto {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

double parse_double(const std::string& key, const std::string& value) {
    if (value == "inf" || value == "infinity") return std::numeric_limits<double>::infinity();
    try {
        std::size_t used = 0;
        double d = std::stod(value, &used);
        if (used == value.size()) return d;
    } catch (const std::exception&) {
    }
    throw DomainError("bad number for " + key + ": " + value);
}

std::uint64_t parse_unsigned(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        auto v = std::stoull(value, &used);
        if (used == value.size() && value.front() != '-') return v;
    } catch (const std::exception&) {
    }
    throw DomainError("bad integer for " + key + ": " + value);
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "1" || value == "true" || value == "yes" || value == "on") return true;
    if (value == "0" || value == "false" || value == "no" || value == "off") return false;
    throw DomainError("bad flag for " + key + ": " + value);
}

std::string normalise_key(std::string key) {
    std::replace(key.begin(), key.end(), '_', '-');
    return key;
}

LatentSpaceConfig parse_latent(const std::string& params) {
    LatentSpaceConfig cfg;
    for (const auto& item : split(params, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw DomainError("latent parameter without '=': " + item);
        const std::string key = trim(item.substr(0, eq));
        const std::string value = trim(item.substr(eq + 1));
        if (key == "n") cfg.n = parse_unsigned(key, value);
        else if (key == "a") cfg.a = parse_double(key, value);
        else if (key == "b") cfg.b = parse_double(key, value);
        else if (key == "r") cfg.r = parse_double(key, value);
        else if (key == "alpha") cfg.alpha = parse_double(key, value);
        else if (key == "seed") cfg.seed = parse_unsigned(key, value);
        else throw DomainError("unknown latent parameter " + key);
    }
    return cfg;
}

std::vector<NodeId> largest_component_nodes(const Graph& g) {
    auto comps = g.components();
    std::size_t best = 0;
    for (std::size_t i = 1; i < comps.size(); ++i) {
        if (comps[i].size() > comps[best].size()) best = i;
    }
    return comps.empty() ? std::vector<NodeId>{} : comps[best];
}

} // namespace

LoadedGraph load_graph_source(const std::string& source, EdgeListMode mode,
                              const std::string& attributes_path, bool giant_component) {
    LoadedGraph out;
    out.description = source;
    if (source.rfind("barbell:", 0) == 0) {
        out.graph = barbell(parse_unsigned("barbell", source.substr(8)));
    } else if (source.rfind("latent:", 0) == 0) {
        auto generated = latent_space(parse_latent(source.substr(7)));
        out.graph = std::move(generated.graph);
        out.coords = std::move(generated.coords);
    } else {
        out.graph = load_edgelist(std::filesystem::path(source), mode);
    }

    if (giant_component && !out.graph.is_connected()) {
        auto nodes = largest_component_nodes(out.graph);
        Graph sub = out.graph.induced(nodes);
        if (!sub.has_labels()) {
            std::vector<std::string> labels;
            labels.reserve(nodes.size());
            for (NodeId v : nodes) labels.push_back(out.graph.label(v));
            sub.set_labels(std::move(labels));
        }
        if (!out.coords.empty()) {
            std::vector<Point2> coords;
            coords.reserve(nodes.size());
            for (NodeId v : nodes) coords.push_back(out.coords[v]);
            out.coords = std::move(coords);
        }
        out.graph = std::move(sub);
    }
    if (out.graph.edge_count() == 0) throw EmptyGraph("graph source " + source + " has no edges");

    if (!attributes_path.empty()) {
        out.attributes = load_attributes(std::filesystem::path(attributes_path), out.graph);
    }
    return out;
}

double population_mean(const LoadedGraph& g, const std::string& attribute) {
    const std::size_t n = g.graph.node_count();
    if (n == 0) throw EmptyGraph("population mean of an empty graph");
    double sum = 0.0;
    for (NodeId v = 0; v < n; ++v) {
        if (attribute == kDegreeAttribute) {
            sum += static_cast<double>(g.graph.degree(v));
            continue;
        }
        auto row = g.attributes.find(v);
        if (row == g.attributes.end() || !row->second.contains(attribute)) {
            throw AttributeMissing("node " + g.graph.label(v) + " lacks attribute " + attribute);
        }
        sum += row->second.at(attribute);
    }
    return sum / static_cast<double>(n);
}

void ExperimentSpec::validate() const {
    if (runs < 1) throw DomainError("runs must be at least 1");
    if (schemes.empty()) throw DomainError("at least one scheme is required");
    if (geweke_thresholds.empty()) throw DomainError("at least one Geweke threshold is required");
    for (double t : geweke_thresholds) {
        if (!(t > 0.0 && t <= 1.0)) throw DomainError("Geweke threshold must lie in (0, 1]");
    }
    if (sample_size < 1) throw DomainError("sample size must be at least 1");
    if (!(jump_prob >= 0.0 && jump_prob <= 1.0)) throw DomainError("jump_prob must lie in [0,1]");
    if (!(replace_prob >= 0.0 && replace_prob <= 1.0)) {
        throw DomainError("replace_prob must lie in [0,1]");
    }
    if (threads < 1) throw DomainError("threads must be at least 1");
}

void ExperimentSpec::apply_setting(const std::string& raw_key, const std::string& raw_value) {
    const std::string key = normalise_key(trim(raw_key));
    const std::string value = trim(raw_value);
    if (key == "graph") {
        graph = value;
    } else if (key == "mode") {
        if (value == "undirected") mode = EdgeListMode::Undirected;
        else if (value == "reciprocal") mode = EdgeListMode::ReciprocalDirected;
        else throw DomainError("mode must be undirected or reciprocal");
    } else if (key == "attributes") {
        attributes_path = value;
    } else if (key == "giant-component") {
        giant_component = parse_bool(key, value);
    } else if (key == "scheme" || key == "schemes") {
        schemes.clear();
        for (const auto& s : split(value, ',')) schemes.push_back(parse_scheme(s));
    } else if (key == "attribute") {
        attribute = value;
    } else if (key == "geweke-threshold") {
        geweke_thresholds.clear();
        for (const auto& s : split(value, ',')) geweke_thresholds.push_back(parse_double(key, s));
    } else if (key == "runs") {
        runs = parse_unsigned(key, value);
    } else if (key == "seed") {
        seed = parse_unsigned(key, value);
    } else if (key == "sample-size") {
        sample_size = parse_unsigned(key, value);
    } else if (key == "jump-prob") {
        jump_prob = parse_double(key, value);
    } else if (key == "replace-prob") {
        replace_prob = parse_double(key, value);
    } else if (key == "budget") {
        if (value.empty() || value == "none") budget.reset();
        else budget = parse_unsigned(key, value);
    } else if (key == "max-steps") {
        max_steps = parse_unsigned(key, value);
    } else if (key == "presumptive-truth") {
        presumptive_truth = parse_bool(key, value);
    } else if (key == "kl-node-limit") {
        kl_node_limit = parse_unsigned(key, value);
    } else if (key == "threads") {
        threads = parse_unsigned(key, value);
    } else if (key == "out") {
        out_dir = value;
    } else {
        throw DomainError("unknown setting " + raw_key);
    }
}

void apply_config(std::istream& in, ExperimentSpec& spec) {
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        line = trim(line);
        if (line.empty() || line.front() == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError(number, "expected key=value");
        try {
            spec.apply_setting(line.substr(0, eq), line.substr(eq + 1));
        } catch (const DomainError& e) {
            throw ParseError(number, e.what());
        }
    }
}

const std::vector<double>& error_levels() {
    static const std::vector<double> levels{0.5, 0.4, 0.3, 0.2, 0.1, 0.05};
    return levels;
}

std::size_t query_cost_at_level(const RunRecord& run, double level) {
    std::size_t cost = 0;
    for (const auto& p : run.points) {
        if (p.relative_error > level) cost = std::max(cost, p.unique_queries);
    }
    return cost;
}

namespace {

std::vector<double> ideal_distribution(Scheme scheme, const Graph& base,
                                       const OverlayLedger& overlay) {
    const std::size_t n = base.node_count();
    std::vector<double> p(n, 0.0);
    if (scheme == Scheme::Mhrw || scheme == Scheme::Rj) {
        std::fill(p.begin(), p.end(), 1.0 / static_cast<double>(n));
        return p;
    }
    const Graph& g = base;
    Graph materialised;
    const Graph* law = &g;
    if (is_mto(scheme)) {
        materialised = overlay.materialize(base);
        law = &materialised;
    }
    const double total = 2.0 * static_cast<double>(law->edge_count());
    for (NodeId v = 0; v < n; ++v) p[v] = static_cast<double>(law->degree(v)) / total;
    return p;
}

struct Job {
    Scheme scheme;
    double threshold;
    std::size_t run;
};

RunRecord execute(const Job& job, const ExperimentSpec& spec, const LoadedGraph& loaded,
                  double truth) {
    RunRecord rec;
    rec.scheme = job.scheme;
    rec.threshold = job.threshold;
    rec.run = job.run;
    rec.seed = derive_seed(spec.seed, job.run);

    SamplerConfig config;
    config.scheme = job.scheme;
    config.jump_prob = spec.jump_prob;
    config.replace_prob = spec.replace_prob;
    config.geweke_threshold = job.threshold;
    config.sample_size = spec.sample_size;
    config.attribute = spec.attribute;
    config.max_steps = spec.max_steps;

    AccessOptions options;
    options.budget = spec.budget;
    QueryLedger access(loaded.graph, options,
                       loaded.attributes.empty() ? nullptr : &loaded.attributes);
    try {
        WalkResult walk = run_walk(config, access, rec.seed);
        rec.steps = walk.state.steps;
        rec.unique_queries = access.unique_count();
        rec.queries_at_first_convergence = walk.unique_queries.front();
        rec.estimate = importance_estimate(walk.samples, spec.attribute);
        rec.truth = spec.presumptive_truth ? rec.estimate : truth;
        rec.relative_error = relative_error(rec.estimate, rec.truth);
        rec.geweke_z = walk.geweke_z.back();
        for (std::size_t i = 0; i < walk.samples.size(); ++i) {
            RunRecord::Point p;
            p.n = i + 1;
            p.unique_queries = walk.unique_queries[i];
            p.estimate = importance_estimate(walk.samples, spec.attribute, i + 1);
            p.relative_error = relative_error(p.estimate, rec.truth);
            p.geweke_z = walk.geweke_z[i];
            rec.points.push_back(p);
        }
        const std::size_t n = loaded.graph.node_count();
        if (n <= spec.kl_node_limit) {
            std::vector<std::size_t> visits(n, 0);
            for (const auto& t : walk.state.trace) ++visits[t.node];
            auto empirical = empirical_distribution(visits);
            auto ideal = ideal_distribution(job.scheme, loaded.graph, walk.overlay);
            rec.kl = kl_bias(ideal, empirical, walk.state.trace.size());
        }
    } catch (const Error& e) {
        rec.error = e.what();
        rec.unique_queries = access.unique_count();
    }
    return rec;
}

std::filesystem::path ensure_dir(const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    return dir;
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    out << std::setprecision(12);
    return out;
}

} // namespace

ExperimentReport run_experiment(const ExperimentSpec& spec) {
    spec.validate();
    const LoadedGraph loaded =
        load_graph_source(spec.graph, spec.mode, spec.attributes_path, spec.giant_component);
    const double truth = spec.presumptive_truth ? 0.0 : population_mean(loaded, spec.attribute);

    std::vector<Job> jobs;
    for (Scheme s : spec.schemes) {
        for (double t : spec.geweke_thresholds) {
            for (std::size_t r = 0; r < spec.runs; ++r) jobs.push_back({s, t, r});
        }
    }

    ExperimentReport report;
    report.runs.resize(jobs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < jobs.size(); i = next++) {
            report.runs[i] = execute(jobs[i], spec, loaded, truth);
        }
    };
    const std::size_t workers = std::min(spec.threads, jobs.size());
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t i = 0; i < workers; ++i) pool.emplace_back(worker);
    }
    report.partial_failure = std::any_of(report.runs.begin(), report.runs.end(),
                                         [](const RunRecord& r) { return !r.error.empty(); });

    if (!spec.out_dir.empty()) {
        const auto dir = ensure_dir(spec.out_dir);
        auto measurements = open_output(dir / "measurements.csv");
        write_measurements_csv(measurements, spec, report);
        auto runs = open_output(dir / "runs.csv");
        write_runs_csv(runs, report);
        auto summary = open_output(dir / "summary.json");
        write_summary_json(summary, spec, report);
    }
    return report;
}

void write_measurements_csv(std::ostream& out, const ExperimentSpec& spec,
                            const ExperimentReport& report) {
    out << "scheme,attribute,N,estimate,relative_error,unique_queries,geweke_z,run,seed,threshold,kl\n";
    for (const auto& r : report.runs) {
        for (const auto& p : r.points) {
            out << to_string(r.scheme) << ',' << spec.attribute << ',' << p.n << ',' << p.estimate
                << ',' << p.relative_error << ',' << p.unique_queries << ',' << p.geweke_z << ','
                << r.run << ',' << r.seed << ',' << r.threshold << ',';
            if (r.kl && p.n == r.points.size()) out << *r.kl;
            out << '\n';
        }
    }
}

void write_runs_csv(std::ostream& out, const ExperimentReport& report) {
    out << "scheme,threshold,run,seed,steps,unique_queries,queries_at_first_convergence,"
           "estimate,truth,relative_error,geweke_z,kl,error\n";
    for (const auto& r : report.runs) {
        out << to_string(r.scheme) << ',' << r.threshold << ',' << r.run << ',' << r.seed << ','
            << r.steps << ',' << r.unique_queries << ',' << r.queries_at_first_convergence << ',';
        if (r.error.empty()) {
            out << r.estimate << ',' << r.truth << ',' << r.relative_error << ',' << r.geweke_z;
        } else {
            out << ",,,";
        }
        out << ',';
        if (r.kl) out << *r.kl;
        std::string err = r.error;
        std::replace(err.begin(), err.end(), ',', ';');
        std::replace(err.begin(), err.end(), '\n', ' ');
        out << ',' << err << '\n';
    }
}

void write_summary_json(std::ostream& out, const ExperimentSpec& spec,
                        const ExperimentReport& report) {
    using nlohmann::ordered_json;
    ordered_json doc;
    doc["graph"] = spec.graph;
    doc["attribute"] = spec.attribute;
    doc["runs"] = spec.runs;
    doc["seed"] = spec.seed;
    doc["sample_size"] = spec.sample_size;
    doc["presumptive_truth"] = spec.presumptive_truth;
    doc["partial_failure"] = report.partial_failure;

    // Groups keep the order in which (scheme, threshold) first appear.
    std::vector<std::pair<Scheme, double>> keys;
    for (const auto& r : report.runs) {
        std::pair<Scheme, double> k{r.scheme, r.threshold};
        if (std::find(keys.begin(), keys.end(), k) == keys.end()) keys.push_back(k);
    }
    ordered_json groups = ordered_json::array();
    for (const auto& [scheme, threshold] : keys) {
        std::size_t ok = 0, failed = 0, kl_count = 0;
        double uq = 0, first = 0, err = 0, est = 0, kl = 0;
        std::vector<double> level_cost(error_levels().size(), 0.0);
        for (const auto& r : report.runs) {
            if (r.scheme != scheme || r.threshold != threshold) continue;
            if (!r.error.empty()) {
                ++failed;
                continue;
            }
            ++ok;
            uq += static_cast<double>(r.unique_queries);
            first += static_cast<double>(r.queries_at_first_convergence);
            err += r.relative_error;
            est += r.estimate;
            if (r.kl) {
                kl += *r.kl;
                ++kl_count;
            }
            for (std::size_t i = 0; i < error_levels().size(); ++i) {
                level_cost[i] += static_cast<double>(query_cost_at_level(r, error_levels()[i]));
            }
        }
        ordered_json g;
        g["scheme"] = to_string(scheme);
        g["geweke_threshold"] = threshold;
        g["completed_runs"] = ok;
        g["failed_runs"] = failed;
        if (ok > 0) {
            const double k = static_cast<double>(ok);
            g["mean_estimate"] = est / k;
            g["mean_relative_error"] = err / k;
            g["mean_unique_queries"] = uq / k;
            g["mean_queries_at_first_convergence"] = first / k;
            if (kl_count > 0) g["mean_kl"] = kl / static_cast<double>(kl_count);
            ordered_json costs = ordered_json::array();
            for (std::size_t i = 0; i < error_levels().size(); ++i) {
                costs.push_back({{"relative_error", error_levels()[i]},
                                 {"mean_query_cost", level_cost[i] / k}});
            }
            g["query_cost"] = std::move(costs);
        }
        groups.push_back(std::move(g));
    }
    doc["groups"] = std::move(groups);

    ordered_json errors = ordered_json::array();
    for (const auto& r : report.runs) {
        if (r.error.empty()) continue;
        errors.push_back({{"scheme", to_string(r.scheme)},
                          {"geweke_threshold", r.threshold},
                          {"run", r.run},
                          {"seed", r.seed},
                          {"error", r.error}});
    }
    doc["errors"] = std::move(errors);
    out << doc.dump(2) << '\n';
}

OverlayVerification verify_overlay(const VerifySpec& spec) {
    auto loaded = load_graph_source(spec.graph, spec.mode, "", true);
    return verify_overlay(loaded.graph, spec);
}

OverlayVerification verify_overlay(const Graph& base, const VerifySpec& spec) {
    if (!is_mto(spec.scheme)) throw DomainError("verify-overlay needs an MTO scheme");
    SamplerConfig config;
    config.scheme = spec.scheme;
    config.replace_prob = spec.replace_prob;
    config.removals = spec.removals;
    config.replacements = spec.replacements;

    QueryLedger access(base);
    WalkResult walk = run_to_coverage(config, access, spec.seed, spec.max_steps);

    OverlayVerification v;
    v.overlay = walk.overlay.materialize(base);
    v.base_edges = base.edge_count();
    v.overlay_edges = v.overlay.edge_count();
    v.steps = walk.state.steps;
    v.unique_queries = access.unique_count();
    v.overlay_connected = v.overlay.is_connected();

    const std::size_t n = base.node_count();
    if (n <= kMaxExactCutNodes) {
        if (base.is_connected()) v.phi_base = conductance_exact(base).phi;
        if (v.overlay_connected) v.phi_overlay = conductance_exact(v.overlay).phi;
    }
    if (n <= kMaxDenseSpectralNodes) {
        auto b = slem_mixing_time(base);
        auto o = slem_mixing_time(v.overlay);
        v.slem_base = b.slem;
        v.mixing_base = b.mixing_time_estimate;
        v.slem_overlay = o.slem;
        v.mixing_overlay = o.mixing_time_estimate;
    }

    if (!spec.out_dir.empty()) {
        const auto dir = ensure_dir(spec.out_dir);
        auto edges = open_output(dir / "overlay.edgelist");
        write_edgelist(edges, v.overlay);
        auto json = open_output(dir / "verify.json");
        write_verification_json(json, v);
    }
    return v;
}

namespace {

nlohmann::ordered_json mixing_value(double t) {
    if (std::isinf(t)) return "Infinite";
    return t;
}

} // namespace

void write_verification_json(std::ostream& out, const OverlayVerification& v) {
    nlohmann::ordered_json doc;
    doc["base_edges"] = v.base_edges;
    doc["overlay_edges"] = v.overlay_edges;
    doc["steps"] = v.steps;
    doc["unique_queries"] = v.unique_queries;
    doc["overlay_connected"] = v.overlay_connected;
    doc["phi_base"] = v.phi_base ? nlohmann::ordered_json(*v.phi_base) : nlohmann::ordered_json(nullptr);
    doc["phi_overlay"] = v.phi_overlay ? nlohmann::ordered_json(*v.phi_overlay) : nlohmann::ordered_json(nullptr);
    doc["conductance_not_reduced"] =
        (v.phi_base && v.phi_overlay) ? nlohmann::ordered_json(*v.phi_overlay >= *v.phi_base)
                                      : nlohmann::ordered_json(nullptr);
    doc["slem_base"] = v.slem_base;
    doc["slem_overlay"] = v.slem_overlay;
    doc["mixing_time_base"] = mixing_value(v.mixing_base);
    doc["mixing_time_overlay"] = mixing_value(v.mixing_overlay);
    out << doc.dump(2) << '\n';
}

void write_spectral_json(std::ostream& out, const Graph& g, std::size_t series_length) {
    nlohmann::ordered_json doc;
    doc["nodes"] = g.node_count();
    doc["edges"] = g.edge_count();
    if (g.node_count() <= kMaxExactCutNodes && g.is_connected()) {
        auto cut = conductance_exact(g);
        doc["phi"] = cut.phi;
        doc["cut"] = {{"s_side", cut.s_side},
                      {"cut_edges", cut.cut_edges},
                      {"denominator", cut.denominator}};
    } else {
        doc["phi"] = nullptr;
        doc["cut"] = nullptr;
    }
    auto report = slem_mixing_time(g, series_length);
    doc["slem"] = report.slem;
    doc["mixing_time"] = mixing_value(report.mixing_time_estimate);
    nlohmann::ordered_json series = nlohmann::ordered_json::array();
    for (const auto& [t, delta] : report.delta_series) series.push_back({{"t", t}, {"delta", delta}});
    doc["delta_series"] = std::move(series);
    out << doc.dump(2) << '\n';
}

} // namespace mto
