#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "mto/errors.hpp"
#include "mto/experiment.hpp"
#include "mto/spectral.hpp"

namespace fs = std::filesystem;

namespace {

struct Setting {
    const char* key;
    const char* help;
};

// Every flag is also a config-file key.
const std::vector<Setting> kSettings = {
    {"graph", "barbell:<m>, latent:n=..,a=..,b=..,r=..,alpha=..,seed=.. or an edge-list path"},
    {"mode", "edge-list mode: undirected | reciprocal"},
    {"attributes", "node attribute file (node_id name value)"},
    {"giant-component", "restrict to the largest connected component (true/false)"},
    {"scheme", "SRW, MHRW, RJ, MTO_Both, MTO_RM, MTO_RP (comma list for experiment)"},
    {"attribute", "attribute to estimate"},
    {"runs", "runs per scheme"},
    {"seed", "base seed"},
    {"geweke-threshold", "Geweke Z threshold (comma list sweeps)"},
    {"sample-size", "samples per run"},
    {"jump-prob", "RJ jump probability"},
    {"replace-prob", "MTO replacement probability"},
    {"budget", "unique-query budget"},
    {"max-steps", "step cap per sample (or per coverage run)"},
    {"presumptive-truth", "use each run's final estimate as ground truth"},
    {"kl-node-limit", "largest graph for which KL is reported"},
    {"threads", "concurrent runs"},
    {"out", "output file or directory"},
    {"series", "delta(t) series length for spectral"},
    {"removals", "MTO removal rule on/off for verify-overlay"},
    {"replacements", "MTO replacement rule on/off for verify-overlay"},
};

const std::set<std::string> kCliOnly = {"series", "removals", "replacements"};

using Values = std::map<std::string, std::string>;

Values read_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw mto::Error("cannot read config " + path.string());
    std::set<std::string> known;
    for (const auto& s : kSettings) known.insert(s.key);
    Values values;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw mto::ParseError(number, "expected key=value");
        auto strip = [](std::string s) {
            s.erase(0, s.find_first_not_of(" \t\r"));
            s.erase(s.find_last_not_of(" \t\r") + 1);
            return s;
        };
        std::string key = strip(line.substr(0, eq));
        std::replace(key.begin(), key.end(), '_', '-');
        if (!known.contains(key)) throw mto::ParseError(number, "unknown key " + key);
        values[key] = strip(line.substr(eq + 1));
    }
    return values;
}

struct Command {
    CLI::App* app = nullptr;
    Values cli;
    std::map<std::string, CLI::Option*> options;
};

void add_settings(Command& cmd, std::initializer_list<const char*> keys) {
    for (const char* key : keys) {
        const auto it = std::find_if(kSettings.begin(), kSettings.end(),
                                     [&](const Setting& s) { return std::string(s.key) == key; });
        cmd.options[key] = cmd.app->add_option("--" + std::string(key), cmd.cli[key], it->help);
    }
}

// Command-line values win over the config file.
Values merged(const Command& cmd, const Values& config) {
    Values out;
    for (const auto& [key, opt] : cmd.options) {
        if (opt->count() > 0) {
            out[key] = cmd.cli.at(key);
        } else if (auto it = config.find(key); it != config.end()) {
            out[key] = it->second;
        }
    }
    return out;
}

mto::ExperimentSpec to_spec(const Values& values) {
    mto::ExperimentSpec spec;
    for (const auto& [key, value] : values) {
        if (!kCliOnly.contains(key)) spec.apply_setting(key, value);
    }
    return spec;
}

bool flag_value(const Values& values, const std::string& key, bool fallback) {
    auto it = values.find(key);
    if (it == values.end()) return fallback;
    const auto& v = it->second;
    if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
    if (v == "0" || v == "false" || v == "no" || v == "off") return false;
    throw mto::DomainError("bad flag for " + key + ": " + v);
}

std::ofstream open_file(const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw mto::Error("cannot write " + path.string());
    out << std::setprecision(12);
    return out;
}

mto::SamplerConfig sampler_config(const mto::ExperimentSpec& spec) {
    mto::SamplerConfig config;
    config.scheme = spec.schemes.front();
    config.jump_prob = spec.jump_prob;
    config.replace_prob = spec.replace_prob;
    config.geweke_threshold = spec.geweke_thresholds.front();
    config.sample_size = spec.sample_size;
    config.attribute = spec.attribute;
    config.max_steps = spec.max_steps;
    return config;
}

int cmd_generate(const Values& values) {
    auto spec = to_spec(values);
    const bool giant = flag_value(values, "giant-component", false);
    auto loaded = mto::load_graph_source(spec.graph, spec.mode, "", giant);
    if (spec.out_dir.empty()) {
        mto::write_edgelist(std::cout, loaded.graph);
        return 0;
    }
    auto edges = open_file(spec.out_dir);
    mto::write_edgelist(edges, loaded.graph);
    if (!loaded.coords.empty()) {
        auto coords = open_file(spec.out_dir.string() + ".coords");
        mto::write_coordinates(coords, loaded.coords);
    }
    std::cerr << loaded.graph.node_count() << " nodes, " << loaded.graph.edge_count()
              << " edges\n";
    return 0;
}

struct SampledWalk {
    mto::LoadedGraph loaded;
    mto::WalkResult walk;
    std::size_t unique_queries = 0;
};

SampledWalk sample_once(const mto::ExperimentSpec& spec) {
    SampledWalk s;
    s.loaded = mto::load_graph_source(spec.graph, spec.mode, spec.attributes_path,
                                      spec.giant_component);
    mto::AccessOptions options;
    options.budget = spec.budget;
    mto::QueryLedger access(s.loaded.graph, options,
                            s.loaded.attributes.empty() ? nullptr : &s.loaded.attributes);
    mto::RunOptions run;
    run.keep_audit = true;
    s.walk = mto::run_walk(sampler_config(spec), access, spec.seed, run);
    s.unique_queries = access.unique_count();
    return s;
}

int cmd_sample(const Values& values) {
    auto spec = to_spec(values);
    auto s = sample_once(spec);
    std::vector<std::string> columns{spec.attribute};
    if (mto::is_mto(spec.schemes.front())) columns.push_back("overlay_degree_estimate");
    if (spec.out_dir.empty()) {
        std::cout << std::setprecision(12);
        mto::write_samples_csv(std::cout, s.walk.samples, columns);
    } else {
        fs::create_directories(spec.out_dir);
        auto trace = open_file(spec.out_dir / "trace.csv");
        mto::write_trace_csv(trace, s.walk.state);
        auto samples = open_file(spec.out_dir / "samples.csv");
        mto::write_samples_csv(samples, s.walk.samples, columns);
        if (mto::is_mto(spec.schemes.front())) {
            auto audit = open_file(spec.out_dir / "audit.csv");
            s.walk.audit.write_csv(audit);
            auto overlay = open_file(spec.out_dir / "overlay.edgelist");
            mto::write_edgelist(overlay, s.walk.overlay.materialize(s.loaded.graph));
        }
    }
    std::cerr << "steps=" << s.walk.state.steps << " unique_queries=" << s.unique_queries << '\n';
    return 0;
}

int cmd_estimate(const Values& values) {
    auto spec = to_spec(values);
    auto s = sample_once(spec);
    const double estimate = mto::importance_estimate(s.walk.samples, spec.attribute);
    nlohmann::ordered_json doc;
    doc["graph"] = spec.graph;
    doc["scheme"] = mto::to_string(spec.schemes.front());
    doc["attribute"] = spec.attribute;
    doc["seed"] = spec.seed;
    doc["samples"] = s.walk.samples.size();
    doc["steps"] = s.walk.state.steps;
    doc["unique_queries"] = s.unique_queries;
    doc["estimate"] = estimate;
    if (!spec.presumptive_truth) {
        const double truth = mto::population_mean(s.loaded, spec.attribute);
        doc["truth"] = truth;
        doc["relative_error"] = mto::relative_error(estimate, truth);
    }
    if (spec.out_dir.empty()) {
        std::cout << doc.dump(2) << '\n';
    } else {
        auto out = open_file(spec.out_dir);
        out << doc.dump(2) << '\n';
    }
    return 0;
}

int cmd_spectral(const Values& values) {
    auto spec = to_spec(values);
    std::size_t series = 0;
    if (auto it = values.find("series"); it != values.end()) series = std::stoull(it->second);
    auto loaded = mto::load_graph_source(spec.graph, spec.mode, "", spec.giant_component);
    if (spec.out_dir.empty()) {
        mto::write_spectral_json(std::cout, loaded.graph, series);
    } else {
        auto out = open_file(spec.out_dir);
        mto::write_spectral_json(out, loaded.graph, series);
    }
    return 0;
}

int cmd_experiment(const Values& values) {
    auto spec = to_spec(values);
    auto report = mto::run_experiment(spec);
    if (spec.out_dir.empty()) {
        std::cout << std::setprecision(12);
        mto::write_measurements_csv(std::cout, spec, report);
    } else {
        std::cerr << "wrote " << (spec.out_dir / "measurements.csv").string() << ", runs.csv, summary.json\n";
    }
    std::size_t failed = 0;
    for (const auto& r : report.runs) failed += r.error.empty() ? 0 : 1;
    if (report.partial_failure) {
        std::cerr << failed << " of " << report.runs.size() << " runs failed\n";
        return 2;
    }
    return 0;
}

int cmd_verify(const Values& values) {
    auto spec = to_spec(values);
    mto::VerifySpec v;
    v.graph = spec.graph;
    v.mode = spec.mode;
    v.scheme = values.contains("scheme") ? spec.schemes.front() : mto::Scheme::MtoBoth;
    v.removals = flag_value(values, "removals", true);
    v.replacements = flag_value(values, "replacements", true);
    v.replace_prob = spec.replace_prob;
    v.seed = spec.seed;
    v.max_steps = spec.max_steps;
    v.out_dir = spec.out_dir;
    auto result = mto::verify_overlay(v);
    mto::write_verification_json(std::cout, result);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Random-walk sampling with on-the-fly overlay rewiring"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string config_path;
    app.add_option("--config", config_path, "flat key=value file mirroring the flags")
        ->check(CLI::ExistingFile);

    Command generate{app.add_subcommand("generate", "write a generated graph as an edge list")};
    add_settings(generate, {"graph", "mode", "giant-component", "out"});

    Command sample{app.add_subcommand("sample", "run one walk and write trace and samples")};
    add_settings(sample, {"graph", "mode", "attributes", "giant-component", "scheme", "attribute",
                          "seed", "geweke-threshold", "sample-size", "jump-prob", "replace-prob",
                          "budget", "max-steps", "out"});

    Command estimate{app.add_subcommand("estimate", "estimate an attribute mean from one walk")};
    add_settings(estimate, {"graph", "mode", "attributes", "giant-component", "scheme", "attribute",
                            "seed", "geweke-threshold", "sample-size", "jump-prob", "replace-prob",
                            "budget", "max-steps", "presumptive-truth", "out"});

    Command spectral{app.add_subcommand("spectral", "conductance, SLEM and delta(t) of a graph")};
    add_settings(spectral, {"graph", "mode", "giant-component", "series", "out"});

    Command experiment{app.add_subcommand("experiment", "paired multi-run sampler comparison")};
    add_settings(experiment, {"graph", "mode", "attributes", "giant-component", "scheme",
                              "attribute", "runs", "seed", "geweke-threshold", "sample-size",
                              "jump-prob", "replace-prob", "budget", "max-steps",
                              "presumptive-truth", "kl-node-limit", "threads", "out"});

    Command verify{app.add_subcommand("verify-overlay", "run MTO to coverage and compare G and G*")};
    add_settings(verify, {"graph", "mode", "scheme", "seed", "replace-prob", "max-steps",
                          "removals", "replacements", "out"});

    CLI11_PARSE(app, argc, argv);

    try {
        Values config;
        if (!config_path.empty()) config = read_config(config_path);
        if (generate.app->parsed()) return cmd_generate(merged(generate, config));
        if (sample.app->parsed()) return cmd_sample(merged(sample, config));
        if (estimate.app->parsed()) return cmd_estimate(merged(estimate, config));
        if (spectral.app->parsed()) return cmd_spectral(merged(spectral, config));
        if (experiment.app->parsed()) return cmd_experiment(merged(experiment, config));
        if (verify.app->parsed()) return cmd_verify(merged(verify, config));
    } catch (const mto::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
