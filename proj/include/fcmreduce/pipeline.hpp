#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fcmreduce/analysis.hpp"
#include "fcmreduce/community.hpp"
#include "fcmreduce/harness.hpp"
#include "fcmreduce/population.hpp"
#include "fcmreduce/reduction.hpp"
#include "fcmreduce/similarity.hpp"

namespace fcmreduce {

enum class PopulationSource { ObesityVariants, CmaesStyle, Import };

std::string to_string(PopulationSource source);
PopulationSource parse_population_source(const std::string& name);

struct PipelineConfig {
    PopulationSource source = PopulationSource::CmaesStyle;
    int count = 722;
    std::string import_path;
    double jitter = 0.1;

    TopologySpec topology;  // n and seed are filled in from count / master seed

    MetricKind metric = MetricKind::JaccardEdges;
    MetricConfig metric_config;

    CommunityAlgorithm algorithm = CommunityAlgorithm::ChineseWhispers;
    int max_rounds = 50;

    int rounds = 10;
    int repeats = 100;
    std::string output_concept;         // empty: source default
    std::string stabilization_concept;  // empty: same as output concept
    int max_iterations = 100;
    double tolerance = 0.05;
    UpdateRule update_rule = UpdateRule::SelfMemory;

    int kl_bins = 20;
    double kl_alpha = 1e-6;

    std::uint64_t seed = 1;
    int threads = 0;

    /// Output concept after applying the source default.
    std::string resolved_output_concept() const;
    std::string resolved_stabilization_concept() const;
    SimulationSettings settings() const;
    RunSpec run_spec() const;

    /// Checks names, ranges and file paths; throws ConfigError.
    void validate() const;
};

/// Parses a config document; unknown keys are rejected, missing keys keep defaults.
PipelineConfig config_from_json(const nlohmann::json& j);
/// Resolved config (everything that determines results; no threads or paths
/// that only affect where output goes).
nlohmann::json config_to_json(const PipelineConfig& c);

/// Stage seeds derived from the master seed.
struct StageSeeds {
    std::uint64_t population;
    std::uint64_t topology;
    std::uint64_t channels;
    std::uint64_t weigh;
    std::uint64_t community;
    std::uint64_t reduce;
    std::uint64_t runs;
};
StageSeeds stage_seeds(std::uint64_t master);
nlohmann::json to_json(const StageSeeds& s);

// Stages -------------------------------------------------------------------------

struct Model {
    std::vector<Agent> agents;
    SocialGraph graph;
};

std::vector<Fcm> generate_population(const PipelineConfig& c);
Model generate_model(const PipelineConfig& c);
/// Wires an existing population (topology + channels) with the config's seeds.
Model wire_population(const PipelineConfig& c, std::vector<Fcm> fcms);
std::vector<TieWeight> weigh_stage(const Model& m, const PipelineConfig& c);
Partition cluster_stage(const SocialGraph& graph, const std::vector<TieWeight>& weights, const PipelineConfig& c);
ReducedModel reduce_stage(const Model& m, const Partition& p, const PipelineConfig& c);
OutputDistribution simulate_stage(const std::vector<Agent>& agents, const SocialGraph& graph, const PipelineConfig& c);
/// Sidecar for a distribution file: run settings and every seed used.
nlohmann::json distribution_sidecar(const PipelineConfig& c, std::size_t agent_count);

struct PipelineResult {
    Model model;
    std::vector<TieWeight> weights;
    Partition partition;
    ReducedModel reduced;
    OutputDistribution original;
    OutputDistribution simplified;
    FidelityReport report;
};

/// The whole reduce-and-compare procedure. When `out_dir` is given every
/// intermediate artifact and the report are written there.
PipelineResult run_pipeline(const PipelineConfig& c, const std::optional<std::filesystem::path>& out_dir);

/// Header of the flat per-configuration CSV row.
std::string summary_csv_header();
std::string summary_csv_row(const PipelineConfig& c, const FidelityReport& r);

/// Runs every metric x algorithm x topology combination of `c` (other
/// settings unchanged), reusing the original distribution per topology.
/// Writes sweep.csv and one report per cell under out_dir when given.
std::vector<std::string> run_sweep(const PipelineConfig& c, const std::optional<std::filesystem::path>& out_dir,
                                   const std::vector<MetricKind>& metrics, const std::vector<CommunityAlgorithm>& algorithms,
                                   const std::vector<TopologyKind>& topologies);

}  // namespace fcmreduce
