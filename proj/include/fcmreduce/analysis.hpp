#pragma once

#include <span>
#include <string>

#include <json.hpp>

#include "fcmreduce/community.hpp"
#include "fcmreduce/harness.hpp"

namespace fcmreduce {

struct SummaryStats {
    double mean = 0.0;
    double std = 0.0;  // sample (n - 1) standard deviation, 0 for a single sample
    double min = 0.0;
    double q25 = 0.0;
    double q50 = 0.0;
    double q75 = 0.0;
    double max = 0.0;
};

/// Quantile by linear interpolation between closest ranks: position
/// p * (n - 1) in the sorted sample.
double quantile(std::span<const double> sorted, double p);

SummaryStats summarize(const OutputDistribution& d);

/// D(simplified || original) on `bins` equal-width bins spanning the pooled
/// sample range, each bin smoothed by alpha. Zero when the pooled range is
/// degenerate.
double output_kl(const OutputDistribution& simplified, const OutputDistribution& original, int bins = 20,
                 double alpha = 1e-6);

struct FidelityReport {
    double kl_divergence = 0.0;
    SummaryStats original;
    SummaryStats simplified;
    std::size_t removed_count = 0;
    CommunityStats communities;
    nlohmann::json config;
};

FidelityReport build_report(const OutputDistribution& original, const OutputDistribution& simplified,
                            std::size_t removed_count, const CommunityStats& communities, nlohmann::json config,
                            int bins = 20, double alpha = 1e-6);

nlohmann::json to_json(const SummaryStats& s);
SummaryStats summary_from_json(const nlohmann::json& j);
nlohmann::json to_json(const CommunityStats& s);
nlohmann::json to_json(const FidelityReport& r);
FidelityReport report_from_json(const nlohmann::json& j);

}  // namespace fcmreduce
