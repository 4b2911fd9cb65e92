#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "fcmreduce/community.hpp"
#include "fcmreduce/harness.hpp"
#include "fcmreduce/reduction.hpp"
#include "fcmreduce/similarity.hpp"

namespace fcmreduce {

// FCM JSON:
//   { "concepts": [label...],
//     "edges": [{"source": label, "target": label, "weight": w}...],
//     "activation": {label: value...} }
// Unlisted activations are 0. Population files hold a JSON array of these.

nlohmann::json fcm_to_json(const Fcm& f);
Fcm fcm_from_json(const nlohmann::json& j);

nlohmann::json population_to_json(const std::vector<Fcm>& fcms);
std::vector<Fcm> population_from_json(const nlohmann::json& j);

void export_population(const std::filesystem::path& path, const std::vector<Fcm>& fcms);
std::vector<Fcm> import_population(const std::filesystem::path& path);

// CSV formats (header line first):
//   topology      i,j,channel_label
//   tie weights   i,j,metric,dissimilarity,similarity
//   partition     agent_id,community_id
//   distribution  run_index,output_value
//   long format   model,run_index,value

std::vector<std::string> split_csv_line(const std::string& line);
std::string csv_field(const std::string& s);
std::string format_double(double v);

void write_topology_csv(std::ostream& out, const SocialGraph& graph);
SocialGraph read_topology_csv(std::istream& in, std::size_t n);

void write_tie_weights_csv(std::ostream& out, const SocialGraph& graph, MetricKind metric,
                           const std::vector<TieWeight>& weights);
struct WeightedTies {
    std::vector<Tie> ties;
    std::vector<TieWeight> weights;
};
WeightedTies read_tie_weights_csv(std::istream& in);

void write_partition_csv(std::ostream& out, const Partition& p);
Partition read_partition_csv(std::istream& in);

void write_distribution_csv(std::ostream& out, const OutputDistribution& d);
OutputDistribution read_distribution_csv(std::istream& in);

void write_long_format_csv(std::ostream& out,
                           const std::vector<std::pair<std::string, const OutputDistribution*>>& models);

nlohmann::json provenance_to_json(const ReducedModel& model);

// Path helpers.
void write_text(const std::filesystem::path& path, const std::string& content);
std::string read_text(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const nlohmann::json& j);
nlohmann::json read_json(const std::filesystem::path& path);

}  // namespace fcmreduce
