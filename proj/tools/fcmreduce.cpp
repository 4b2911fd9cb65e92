// Command-line front end: the whole reduce-and-compare pipeline, a sweep over
// metrics x algorithms x topologies, or one stage at a time on files in a
// working directory.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "fcmreduce/io.hpp"
#include "fcmreduce/pipeline.hpp"

namespace fs = std::filesystem;
using namespace fcmreduce;

namespace {

struct Options {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string metric;
    std::string algorithm;
    std::string topology;
    std::string out = "out";
    std::optional<int> threads;
    bool sweep = false;
};

PipelineConfig load_config(const Options& o) {
    PipelineConfig c;
    if (!o.config_path.empty()) {
        nlohmann::json j;
        try {
            j = read_json(o.config_path);
        } catch (const std::exception& e) {
            throw ConfigError(std::string("cannot read config: ") + e.what());
        }
        c = config_from_json(j);
    }
    if (o.seed) c.seed = *o.seed;
    if (!o.metric.empty()) c.metric = parse_metric_kind(o.metric);
    if (!o.algorithm.empty()) c.algorithm = parse_community_algorithm(o.algorithm);
    if (!o.topology.empty()) c.topology.kind = parse_topology_kind(o.topology);
    if (o.threads) c.threads = *o.threads;
    return c;
}

std::ifstream open_input(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw LoadError("cannot open input file '" + path.string() + "'");
    return in;
}

template <typename Writer>
void write_csv(const fs::path& path, Writer&& writer) {
    std::ostringstream out;
    writer(out);
    write_text(path, out.str());
}

std::vector<Agent> load_agents(const fs::path& path) { return make_agents(import_population(path)); }

SocialGraph load_topology(const fs::path& path, std::size_t n) {
    auto in = open_input(path);
    return read_topology_csv(in, n);
}

void print_report(const FidelityReport& r) {
    std::printf("kl_divergence  %.6g\n", r.kl_divergence);
    std::printf("original       mean %.4f  std %.4f  [%.4f %.4f %.4f]\n", r.original.mean, r.original.std,
                r.original.q25, r.original.q50, r.original.q75);
    std::printf("simplified     mean %.4f  std %.4f  [%.4f %.4f %.4f]\n", r.simplified.mean, r.simplified.std,
                r.simplified.q25, r.simplified.q50, r.simplified.q75);
    std::printf("communities    %zu (avg size %.2f, max %zu, min %zu)\n", r.communities.count, r.communities.avg_size,
                r.communities.max_size, r.communities.min_size);
    std::printf("removed        %zu\n", r.removed_count);
}

void cmd_pipeline(const Options& o) {
    const auto c = load_config(o);
    c.validate();
    if (o.sweep) {
        const auto rows = run_sweep(c, fs::path(o.out), std::vector<MetricKind>(all_metrics.begin(), all_metrics.end()),
                                    {CommunityAlgorithm::ChineseWhispers, CommunityAlgorithm::Agglomerative},
                                    {TopologyKind::Random, TopologyKind::SmallWorld, TopologyKind::ScaleFree});
        std::cout << summary_csv_header() << '\n';
        for (const auto& row : rows) std::cout << row << '\n';
        return;
    }
    const auto result = run_pipeline(c, fs::path(o.out));
    print_report(result.report);
}

void cmd_generate(const Options& o) {
    const auto c = load_config(o);
    c.validate();
    const fs::path dir(o.out);
    const Model m = generate_model(c);
    std::vector<Fcm> fcms;
    for (const auto& a : m.agents) fcms.push_back(a.fcm);
    export_population(dir / "population.json", fcms);
    write_csv(dir / "topology.csv", [&](std::ostream& out) { write_topology_csv(out, m.graph); });
    std::printf("%zu agents, %zu ties\n", m.agents.size(), m.graph.tie_count());
}

Model load_model(const fs::path& dir) {
    Model m;
    m.agents = load_agents(dir / "population.json");
    m.graph = load_topology(dir / "topology.csv", m.agents.size());
    return m;
}

void cmd_weigh(const Options& o) {
    const auto c = load_config(o);
    const fs::path dir(o.out);
    const Model m = load_model(dir);
    const auto weights = weigh_stage(m, c);
    write_csv(dir / "ties.csv", [&](std::ostream& out) { write_tie_weights_csv(out, m.graph, c.metric, weights); });
    std::printf("%zu ties weighed with %s\n", weights.size(), to_string(c.metric).c_str());
}

void cmd_cluster(const Options& o) {
    const auto c = load_config(o);
    const fs::path dir(o.out);
    const auto agents = load_agents(dir / "population.json");
    auto in = open_input(dir / "ties.csv");
    const auto wt = read_tie_weights_csv(in);
    const SocialGraph graph(agents.size(), wt.ties);
    const auto partition = cluster_stage(graph, wt.weights, c);
    write_csv(dir / "partition.csv", [&](std::ostream& out) { write_partition_csv(out, partition); });
    std::printf("%zu communities (%s)\n", partition.community_count(), to_string(c.algorithm).c_str());
}

void cmd_reduce(const Options& o) {
    const auto c = load_config(o);
    const fs::path dir(o.out);
    const Model m = load_model(dir);
    auto in = open_input(dir / "partition.csv");
    const auto partition = read_partition_csv(in);
    if (partition.agent_count() != m.agents.size()) {
        throw LoadError("partition.csv covers " + std::to_string(partition.agent_count()) + " agents, population has " +
                        std::to_string(m.agents.size()));
    }
    const auto reduced = reduce_stage(m, partition, c);
    export_population(dir / "reduced_population.json", reduced.fcms());
    write_csv(dir / "reduced_topology.csv", [&](std::ostream& out) { write_topology_csv(out, reduced.graph); });
    write_json(dir / "provenance.json", provenance_to_json(reduced));
    std::printf("%zu super-agents, %zu agents removed\n", reduced.super_agents.size(), reduced.removed_count);
}

void simulate_model(const PipelineConfig& c, const fs::path& dir, const std::string& prefix, const std::string& name) {
    const auto agents = load_agents(dir / (prefix + "population.json"));
    const auto graph = load_topology(dir / (prefix + "topology.csv"), agents.size());
    const auto d = simulate_stage(agents, graph, c);
    write_csv(dir / (name + "_distribution.csv"), [&](std::ostream& out) { write_distribution_csv(out, d); });
    write_json(dir / (name + "_distribution.json"), distribution_sidecar(c, agents.size()));
    std::printf("%s: %zu runs\n", name.c_str(), d.samples.size());
}

void cmd_simulate(const Options& o, const std::string& which) {
    const auto c = load_config(o);
    c.validate();
    const fs::path dir(o.out);
    if (which == "original" || which == "both") simulate_model(c, dir, "", "original");
    if (which == "reduced" || which == "both") simulate_model(c, dir, "reduced_", "simplified");
}

void cmd_compare(const Options& o, const std::string& original_path, const std::string& simplified_path) {
    const auto c = load_config(o);
    const fs::path dir(o.out);
    const fs::path op = original_path.empty() ? dir / "original_distribution.csv" : fs::path(original_path);
    const fs::path sp = simplified_path.empty() ? dir / "simplified_distribution.csv" : fs::path(simplified_path);
    auto oin = open_input(op);
    auto sin = open_input(sp);
    const auto original = read_distribution_csv(oin);
    const auto simplified = read_distribution_csv(sin);

    // Reduction details are optional: present when compare runs in a stage directory.
    CommunityStats stats{};
    std::size_t removed = 0;
    if (fs::exists(dir / "partition.csv")) {
        auto pin = open_input(dir / "partition.csv");
        const auto p = read_partition_csv(pin);
        stats = partition_stats(p);
        removed = p.agent_count() - p.community_count();
    }
    auto config = config_to_json(c);
    config["seeds"] = to_json(stage_seeds(c.seed));
    const auto report = build_report(original, simplified, removed, stats, std::move(config), c.kl_bins, c.kl_alpha);
    write_json(dir / "report.json", to_json(report));
    print_report(report);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Reduce hybrid agent/FCM populations and measure the fidelity of the reduced model"};
    app.require_subcommand(1);
    Options o;
    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", o.config_path, "JSON config file")->check(CLI::ExistingFile);
        cmd->add_option("--seed", o.seed, "master seed");
        cmd->add_option("--metric", o.metric, "similarity metric");
        cmd->add_option("--algorithm", o.algorithm, "community algorithm (chinese_whispers, agglomerative)");
        cmd->add_option("--topology", o.topology, "random, small_world or scale_free");
        cmd->add_option("--out", o.out, "output / working directory")->capture_default_str();
        cmd->add_option("--threads", o.threads, "worker threads (0 = hardware)");
    };

    auto* pipeline = app.add_subcommand("pipeline", "run every stage and write all artifacts");
    add_common(pipeline);
    pipeline->add_flag("--sweep", o.sweep, "all metrics x algorithms x topologies");
    auto* generate = app.add_subcommand("generate", "population.json + topology.csv");
    add_common(generate);
    auto* weigh = app.add_subcommand("weigh", "population + topology -> ties.csv");
    add_common(weigh);
    auto* cluster = app.add_subcommand("cluster", "ties.csv -> partition.csv");
    add_common(cluster);
    auto* reduce = app.add_subcommand("reduce", "partition.csv -> reduced population, topology, provenance");
    add_common(reduce);
    auto* simulate = app.add_subcommand("simulate", "output distributions of the original and/or reduced model");
    add_common(simulate);
    std::string which = "both";
    simulate->add_option("--model", which, "original, reduced or both")
        ->check(CLI::IsMember({"original", "reduced", "both"}))
        ->capture_default_str();
    auto* compare = app.add_subcommand("compare", "two distribution CSVs -> report.json");
    add_common(compare);
    std::string original_path, simplified_path;
    compare->add_option("--original", original_path, "original distribution CSV");
    compare->add_option("--simplified", simplified_path, "simplified distribution CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (pipeline->parsed()) cmd_pipeline(o);
        else if (generate->parsed()) cmd_generate(o);
        else if (weigh->parsed()) cmd_weigh(o);
        else if (cluster->parsed()) cmd_cluster(o);
        else if (reduce->parsed()) cmd_reduce(o);
        else if (simulate->parsed()) cmd_simulate(o, which);
        else if (compare->parsed()) cmd_compare(o, original_path, simplified_path);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
