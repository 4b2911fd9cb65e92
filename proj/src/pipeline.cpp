#include "fcmreduce/pipeline.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "fcmreduce/io.hpp"
#include "fcmreduce/rng.hpp"

namespace fcmreduce {

using nlohmann::json;

std::string to_string(PopulationSource source) {
    switch (source) {
        case PopulationSource::ObesityVariants: return "obesity-variants";
        case PopulationSource::CmaesStyle: return "cmaes-style";
        case PopulationSource::Import: return "import";
    }
    return "?";
}

PopulationSource parse_population_source(const std::string& name) {
    if (name == "obesity-variants") return PopulationSource::ObesityVariants;
    if (name == "cmaes-style") return PopulationSource::CmaesStyle;
    if (name == "import") return PopulationSource::Import;
    throw ConfigError("unknown population source '" + name + "' (valid: obesity-variants, cmaes-style, import)");
}

namespace {

std::string update_rule_name(UpdateRule rule) {
    return rule == UpdateRule::SelfMemory ? "self_memory" : "weighted_sum";
}

UpdateRule parse_update_rule(const std::string& name) {
    if (name == "self_memory") return UpdateRule::SelfMemory;
    if (name == "weighted_sum") return UpdateRule::WeightedSumOnly;
    throw ConfigError("unknown update rule '" + name + "' (valid: self_memory, weighted_sum)");
}

// Reads the known keys of one config section, rejecting anything else.
class Section {
public:
    Section(const json& j, std::string name) : j_(j), name_(std::move(name)) {
        if (!j_.is_object()) throw ConfigError("config: '" + name_ + "' must be an object");
    }

    template <typename T>
    void get(const char* key, T& target) {
        seen_.insert(key);
        if (!j_.contains(key)) return;
        try {
            target = j_.at(key).get<T>();
        } catch (const json::exception&) {
            throw ConfigError("config: " + name_ + "." + key + " has the wrong type");
        }
    }

    const json* child(const char* key) {
        seen_.insert(key);
        return j_.contains(key) ? &j_.at(key) : nullptr;
    }

    void finish() const {
        for (const auto& [key, value] : j_.items()) {
            if (!seen_.count(key)) throw ConfigError("config: unknown key '" + name_ + "." + key + "'");
        }
    }

private:
    const json& j_;
    std::string name_;
    std::set<std::string> seen_;
};

}  // namespace

std::string PipelineConfig::resolved_output_concept() const {
    if (!output_concept.empty()) return output_concept;
    switch (source) {
        case PopulationSource::ObesityVariants: return "Obesity";
        case PopulationSource::CmaesStyle: return "Intention";
        case PopulationSource::Import: break;
    }
    throw ConfigError("config: run.output_concept is required for imported populations");
}

std::string PipelineConfig::resolved_stabilization_concept() const {
    return stabilization_concept.empty() ? resolved_output_concept() : stabilization_concept;
}

SimulationSettings PipelineConfig::settings() const {
    return SimulationSettings(resolved_stabilization_concept(), max_iterations, tolerance, Transfer::RectifiedTanh,
                              update_rule);
}

RunSpec PipelineConfig::run_spec() const {
    RunSpec spec;
    spec.rounds = rounds;
    spec.repeats = repeats;
    spec.output_concept = resolved_output_concept();
    spec.master_seed = stage_seeds(seed).runs;
    spec.settings = settings();
    return spec;
}

void PipelineConfig::validate() const {
    if (count < 1) throw ConfigError("config: population.count must be >= 1");
    if (!(jitter >= 0.0)) throw ConfigError("config: population.jitter must be >= 0");
    if (source == PopulationSource::Import) {
        if (import_path.empty()) throw ConfigError("config: population.path is required for source 'import'");
        if (!std::filesystem::exists(import_path)) {
            throw ConfigError("config: population file '" + import_path + "' does not exist");
        }
    }
    metric_config.validate();
    if (max_rounds < 1) throw ConfigError("config: community.max_rounds must be >= 1");
    if (kl_bins < 2) throw ConfigError("config: analysis.bins must be >= 2");
    if (!(kl_alpha > 0.0)) throw ConfigError("config: analysis.alpha must be > 0");
    if (threads < 0) throw ConfigError("config: threads must be >= 0");
    run_spec().validate();
    const std::vector<std::string>* labels = nullptr;
    static const auto obesity_labels = build_obesity_fcm().concepts();
    if (source == PopulationSource::ObesityVariants) labels = &obesity_labels;
    if (source == PopulationSource::CmaesStyle) labels = &cmaes_concepts();
    if (labels) {
        for (const auto& label : {resolved_output_concept(), resolved_stabilization_concept()}) {
            if (std::find(labels->begin(), labels->end(), label) == labels->end()) {
                throw ConfigError("config: concept '" + label + "' does not exist in " + to_string(source) +
                                  " maps");
            }
        }
    }
    TopologySpec t = topology;
    t.n = static_cast<std::size_t>(count);
    if (t.n < 2) throw ConfigError("config: need at least 2 agents");
}

PipelineConfig config_from_json(const json& j) {
    PipelineConfig c;
    Section root(j, "config");
    if (const json* p = root.child("population")) {
        Section s(*p, "population");
        std::string source = to_string(c.source);
        s.get("source", source);
        c.source = parse_population_source(source);
        s.get("count", c.count);
        s.get("path", c.import_path);
        s.get("jitter", c.jitter);
        s.finish();
    }
    if (const json* p = root.child("topology")) {
        Section s(*p, "topology");
        std::string kind = to_string(c.topology.kind);
        s.get("kind", kind);
        c.topology.kind = parse_topology_kind(kind);
        s.get("edge_probability", c.topology.edge_probability);
        s.get("ring_degree", c.topology.ring_degree);
        s.get("rewiring", c.topology.rewiring);
        s.get("attachment", c.topology.attachment);
        s.get("max_attempts", c.topology.max_attempts);
        s.finish();
    }
    if (const json* p = root.child("metric")) {
        Section s(*p, "metric");
        std::string kind = to_string(c.metric);
        s.get("kind", kind);
        c.metric = parse_metric_kind(kind);
        std::string centrality = to_string(c.metric_config.centrality);
        s.get("centrality", centrality);
        c.metric_config.centrality = parse_centrality_kind(centrality);
        s.get("epsilon", c.metric_config.epsilon);
        s.get("node_bins", c.metric_config.discretization.node_bins);
        s.get("edge_bins", c.metric_config.discretization.edge_bins);
        s.get("alpha", c.metric_config.discretization.alpha);
        s.get("tsp_ensemble_size", c.metric_config.tsp_ensemble_size);
        s.get("tsp_swaps_per_edge", c.metric_config.tsp_swaps_per_edge);
        s.finish();
    }
    if (const json* p = root.child("community")) {
        Section s(*p, "community");
        std::string algorithm = to_string(c.algorithm);
        s.get("algorithm", algorithm);
        c.algorithm = parse_community_algorithm(algorithm);
        s.get("max_rounds", c.max_rounds);
        s.finish();
    }
    if (const json* p = root.child("run")) {
        Section s(*p, "run");
        s.get("rounds", c.rounds);
        s.get("repeats", c.repeats);
        s.get("output_concept", c.output_concept);
        s.get("stabilization_concept", c.stabilization_concept);
        s.get("max_iterations", c.max_iterations);
        s.get("tolerance", c.tolerance);
        std::string rule = update_rule_name(c.update_rule);
        s.get("update_rule", rule);
        c.update_rule = parse_update_rule(rule);
        std::string transfer = "rectified_tanh";
        s.get("transfer", transfer);
        if (transfer != "rectified_tanh") {
            throw ConfigError("unknown transfer '" + transfer + "' (valid: rectified_tanh)");
        }
        s.finish();
    }
    if (const json* p = root.child("analysis")) {
        Section s(*p, "analysis");
        s.get("bins", c.kl_bins);
        s.get("alpha", c.kl_alpha);
        s.finish();
    }
    root.get("seed", c.seed);
    root.get("threads", c.threads);
    root.finish();
    return c;
}

json config_to_json(const PipelineConfig& c) {
    json population = {{"source", to_string(c.source)}, {"count", c.count}, {"jitter", c.jitter}};
    if (c.source == PopulationSource::Import) population["path"] = c.import_path;
    return {
        {"population", population},
        {"topology",
         {{"kind", to_string(c.topology.kind)},
          {"edge_probability", c.topology.edge_probability},
          {"ring_degree", c.topology.ring_degree},
          {"rewiring", c.topology.rewiring},
          {"attachment", c.topology.attachment},
          {"max_attempts", c.topology.max_attempts}}},
        {"metric",
         {{"kind", to_string(c.metric)},
          {"centrality", to_string(c.metric_config.centrality)},
          {"epsilon", c.metric_config.epsilon},
          {"node_bins", c.metric_config.discretization.node_bins},
          {"edge_bins", c.metric_config.discretization.edge_bins},
          {"alpha", c.metric_config.discretization.alpha},
          {"tsp_ensemble_size", c.metric_config.tsp_ensemble_size},
          {"tsp_swaps_per_edge", c.metric_config.tsp_swaps_per_edge}}},
        {"community", {{"algorithm", to_string(c.algorithm)}, {"max_rounds", c.max_rounds}}},
        {"run",
         {{"rounds", c.rounds},
          {"repeats", c.repeats},
          {"output_concept", c.resolved_output_concept()},
          {"stabilization_concept", c.resolved_stabilization_concept()},
          {"max_iterations", c.max_iterations},
          {"tolerance", c.tolerance},
          {"transfer", "rectified_tanh"},
          {"update_rule", update_rule_name(c.update_rule)}}},
        {"analysis", {{"bins", c.kl_bins}, {"alpha", c.kl_alpha}}},
        {"seed", c.seed},
    };
}

StageSeeds stage_seeds(std::uint64_t master) {
    return StageSeeds{
        derive_seed(master, "population"), derive_seed(master, "topology"), derive_seed(master, "channels"),
        derive_seed(master, "weigh"),      derive_seed(master, "community"), derive_seed(master, "reduce"),
        derive_seed(master, "runs"),
    };
}

json to_json(const StageSeeds& s) {
    return {{"population", s.population}, {"topology", s.topology}, {"channels", s.channels}, {"weigh", s.weigh},
            {"community", s.community},   {"reduce", s.reduce},     {"runs", s.runs}};
}

// Stages ----------------------------------------------------------------------------

namespace {

class StageError : public Error {
public:
    using Error::Error;
};

template <typename Fn>
auto in_stage(const char* stage, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const ConfigError& e) {
        throw ConfigError(std::string(stage) + ": " + e.what());
    } catch (const std::exception& e) {
        throw StageError(std::string(stage) + ": " + e.what());
    }
}

}  // namespace

std::vector<Fcm> generate_population(const PipelineConfig& c) {
    const auto seeds = stage_seeds(c.seed);
    switch (c.source) {
        case PopulationSource::CmaesStyle: return generate_cmaes_style(c.count, seeds.population);
        case PopulationSource::ObesityVariants: {
            auto variants = generate_variants(build_obesity_fcm(), c.count, c.jitter, seeds.population);
            return randomize_activations(std::move(variants), derive_seed(seeds.population, "activations"));
        }
        case PopulationSource::Import: {
            auto fcms = import_population(c.import_path);
            if (fcms.empty()) throw LoadError("imported population is empty");
            return fcms;
        }
    }
    throw ContractViolation("generate_population: unknown source");
}

Model wire_population(const PipelineConfig& c, std::vector<Fcm> fcms) {
    const auto seeds = stage_seeds(c.seed);
    Model m;
    m.agents = make_agents(std::move(fcms));
    TopologySpec t = c.topology;
    t.n = m.agents.size();
    t.seed = seeds.topology;
    m.graph = assign_channels(build_topology(t), m.agents, seeds.channels);
    return m;
}

Model generate_model(const PipelineConfig& c) { return wire_population(c, generate_population(c)); }

std::vector<TieWeight> weigh_stage(const Model& m, const PipelineConfig& c) {
    MetricConfig mc = c.metric_config;
    mc.tsp_seed = stage_seeds(c.seed).weigh;
    return weigh_ties(m.agents, m.graph, c.metric, mc, c.threads);
}

Partition cluster_stage(const SocialGraph& graph, const std::vector<TieWeight>& weights, const PipelineConfig& c) {
    return detect_communities(c.algorithm, graph, weights, c.max_rounds, stage_seeds(c.seed).community);
}

ReducedModel reduce_stage(const Model& m, const Partition& p, const PipelineConfig& c) {
    const auto reps = select_representatives(m.agents, p);
    return contract(m.agents, m.graph, p, reps, stage_seeds(c.seed).reduce);
}

OutputDistribution simulate_stage(const std::vector<Agent>& agents, const SocialGraph& graph, const PipelineConfig& c) {
    return run_distribution(agents, graph, c.run_spec(), c.threads);
}

json distribution_sidecar(const PipelineConfig& c, std::size_t agent_count) {
    const auto spec = c.run_spec();
    return {
        {"agents", agent_count},
        {"run",
         {{"rounds", spec.rounds},
          {"repeats", spec.repeats},
          {"output_concept", spec.output_concept},
          {"stabilization_concept", spec.settings.stabilization_concept()},
          {"max_iterations", spec.settings.max_iterations()},
          {"tolerance", spec.settings.tolerance()},
          {"update_rule", update_rule_name(spec.settings.update_rule())}}},
        {"master_seed", c.seed},
        {"runs_seed", spec.master_seed},
        {"run_seeds_rule", "run i uses derive_seed(runs_seed, i)"},
    };
}

namespace {

template <typename Writer>
void write_with(const std::filesystem::path& path, Writer&& writer) {
    std::ostringstream out;
    writer(out);
    write_text(path, out.str());
}

std::vector<Agent> agents_of(const ReducedModel& r) { return r.super_agents; }

}  // namespace

PipelineResult run_pipeline(const PipelineConfig& c, const std::optional<std::filesystem::path>& out_dir) {
    in_stage("config", [&] {
        c.validate();
        return 0;
    });
    PipelineResult r;
    r.model = in_stage("generate", [&] { return generate_model(c); });
    r.original = in_stage("simulate original", [&] { return simulate_stage(r.model.agents, r.model.graph, c); });
    r.weights = in_stage("weigh", [&] { return weigh_stage(r.model, c); });
    r.partition = in_stage("cluster", [&] { return cluster_stage(r.model.graph, r.weights, c); });
    r.reduced = in_stage("reduce", [&] { return reduce_stage(r.model, r.partition, c); });
    r.simplified = in_stage("simulate reduced", [&] {
        return simulate_stage(agents_of(r.reduced), r.reduced.graph, c);
    });
    r.report = in_stage("compare", [&] {
        json config = config_to_json(c);
        config["seeds"] = to_json(stage_seeds(c.seed));
        return build_report(r.original, r.simplified, r.reduced.removed_count, partition_stats(r.partition),
                            std::move(config), c.kl_bins, c.kl_alpha);
    });

    if (out_dir) {
        in_stage("write", [&] {
            const auto& dir = *out_dir;
            std::vector<Fcm> fcms;
            for (const auto& a : r.model.agents) fcms.push_back(a.fcm);
            export_population(dir / "population.json", fcms);
            write_with(dir / "topology.csv", [&](std::ostream& o) { write_topology_csv(o, r.model.graph); });
            write_with(dir / "ties.csv", [&](std::ostream& o) { write_tie_weights_csv(o, r.model.graph, c.metric, r.weights); });
            write_with(dir / "partition.csv", [&](std::ostream& o) { write_partition_csv(o, r.partition); });
            export_population(dir / "reduced_population.json", r.reduced.fcms());
            write_with(dir / "reduced_topology.csv", [&](std::ostream& o) { write_topology_csv(o, r.reduced.graph); });
            write_json(dir / "provenance.json", provenance_to_json(r.reduced));
            write_with(dir / "original_distribution.csv", [&](std::ostream& o) { write_distribution_csv(o, r.original); });
            write_json(dir / "original_distribution.json", distribution_sidecar(c, r.model.agents.size()));
            write_with(dir / "simplified_distribution.csv",
                       [&](std::ostream& o) { write_distribution_csv(o, r.simplified); });
            write_json(dir / "simplified_distribution.json", distribution_sidecar(c, r.reduced.super_agents.size()));
            write_with(dir / "distributions_long.csv", [&](std::ostream& o) {
                write_long_format_csv(o, {{"original", &r.original}, {"simplified", &r.simplified}});
            });
            write_json(dir / "report.json", to_json(r.report));
            write_text(dir / "summary.csv", summary_csv_header() + "\n" + summary_csv_row(c, r.report) + "\n");
            return 0;
        });
    }
    return r;
}

std::string summary_csv_header() {
    return "topology,metric,algorithm,kl_divergence,mean_original,mean_simplified,std_original,std_simplified,"
           "communities,removed_count";
}

std::string summary_csv_row(const PipelineConfig& c, const FidelityReport& r) {
    std::ostringstream row;
    row << to_string(c.topology.kind) << ',' << to_string(c.metric) << ',' << to_string(c.algorithm) << ','
        << format_double(r.kl_divergence) << ',' << format_double(r.original.mean) << ','
        << format_double(r.simplified.mean) << ',' << format_double(r.original.std) << ','
        << format_double(r.simplified.std) << ',' << r.communities.count << ',' << r.removed_count;
    return row.str();
}

std::vector<std::string> run_sweep(const PipelineConfig& base, const std::optional<std::filesystem::path>& out_dir,
                                   const std::vector<MetricKind>& metrics,
                                   const std::vector<CommunityAlgorithm>& algorithms,
                                   const std::vector<TopologyKind>& topologies) {
    in_stage("config", [&] {
        base.validate();
        return 0;
    });
    std::vector<std::string> rows;
    const auto fcms = in_stage("generate", [&] { return generate_population(base); });
    for (auto topology : topologies) {
        PipelineConfig tc = base;
        tc.topology.kind = topology;
        const Model model = in_stage("generate", [&] { return wire_population(tc, fcms); });
        const auto original = in_stage("simulate original", [&] { return simulate_stage(model.agents, model.graph, tc); });
        for (auto metric : metrics) {
            PipelineConfig mc = tc;
            mc.metric = metric;
            const auto weights = in_stage("weigh", [&] { return weigh_stage(model, mc); });
            for (auto algorithm : algorithms) {
                PipelineConfig cell = mc;
                cell.algorithm = algorithm;
                const auto partition = in_stage("cluster", [&] { return cluster_stage(model.graph, weights, cell); });
                const auto reduced = in_stage("reduce", [&] { return reduce_stage(model, partition, cell); });
                const auto simplified = in_stage("simulate reduced", [&] {
                    return simulate_stage(agents_of(reduced), reduced.graph, cell);
                });
                json config = config_to_json(cell);
                config["seeds"] = to_json(stage_seeds(cell.seed));
                const auto report = build_report(original, simplified, reduced.removed_count,
                                                 partition_stats(partition), std::move(config), cell.kl_bins,
                                                 cell.kl_alpha);
                rows.push_back(summary_csv_row(cell, report));
                if (out_dir) {
                    write_json(*out_dir / "sweep" / to_string(topology) / to_string(metric) / to_string(algorithm) /
                                   "report.json",
                               to_json(report));
                }
            }
        }
    }
    if (out_dir) {
        std::string text = summary_csv_header() + "\n";
        for (const auto& row : rows) text += row + "\n";
        write_text(*out_dir / "sweep.csv", text);
    }
    return rows;
}

}  // namespace fcmreduce
