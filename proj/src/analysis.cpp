#include "fcmreduce/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "fcmreduce/similarity.hpp"

namespace fcmreduce {

double quantile(std::span<const double> sorted, double p) {
    if (sorted.empty()) throw UndefinedDistance("quantile: empty sample");
    const double pos = p * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

SummaryStats summarize(const OutputDistribution& d) {
    if (d.samples.empty()) throw UndefinedDistance("summarize: empty distribution");
    std::vector<double> x = d.samples;
    std::sort(x.begin(), x.end());
    const double n = static_cast<double>(x.size());
    SummaryStats s;
    double total = 0.0;
    for (double v : x) total += v;
    s.mean = total / n;
    if (x.size() > 1) {
        double ss = 0.0;
        for (double v : x) ss += (v - s.mean) * (v - s.mean);
        s.std = std::sqrt(ss / (n - 1.0));
    }
    s.min = x.front();
    s.max = x.back();
    s.q25 = quantile(x, 0.25);
    s.q50 = quantile(x, 0.5);
    s.q75 = quantile(x, 0.75);
    return s;
}

double output_kl(const OutputDistribution& simplified, const OutputDistribution& original, int bins, double alpha) {
    if (simplified.samples.empty() || original.samples.empty()) {
        throw UndefinedDistance("output_kl: empty distribution");
    }
    const auto [smin, smax] = std::minmax_element(simplified.samples.begin(), simplified.samples.end());
    const auto [omin, omax] = std::minmax_element(original.samples.begin(), original.samples.end());
    const double lo = std::min(*smin, *omin);
    const double hi = std::max(*smax, *omax);
    if (!(hi > lo)) return 0.0;
    return kl_divergence(simplified.samples, original.samples, HistogramBins{lo, hi, bins}, alpha);
}

FidelityReport build_report(const OutputDistribution& original, const OutputDistribution& simplified,
                            std::size_t removed_count, const CommunityStats& communities, nlohmann::json config,
                            int bins, double alpha) {
    FidelityReport r;
    r.kl_divergence = output_kl(simplified, original, bins, alpha);
    r.original = summarize(original);
    r.simplified = summarize(simplified);
    r.removed_count = removed_count;
    r.communities = communities;
    r.config = std::move(config);
    return r;
}

nlohmann::json to_json(const SummaryStats& s) {
    return {{"mean", s.mean}, {"std", s.std}, {"min", s.min}, {"q25", s.q25},
            {"q50", s.q50},   {"q75", s.q75}, {"max", s.max}};
}

SummaryStats summary_from_json(const nlohmann::json& j) {
    SummaryStats s;
    s.mean = j.at("mean").get<double>();
    s.std = j.at("std").get<double>();
    s.min = j.at("min").get<double>();
    s.q25 = j.at("q25").get<double>();
    s.q50 = j.at("q50").get<double>();
    s.q75 = j.at("q75").get<double>();
    s.max = j.at("max").get<double>();
    return s;
}

nlohmann::json to_json(const CommunityStats& s) {
    return {{"count", s.count}, {"avg_size", s.avg_size}, {"max_size", s.max_size}, {"min_size", s.min_size}};
}

nlohmann::json to_json(const FidelityReport& r) {
    return {
        {"kl_divergence", r.kl_divergence},
        {"original", to_json(r.original)},
        {"simplified", to_json(r.simplified)},
        {"removed_count", r.removed_count},
        {"communities", to_json(r.communities)},
        {"config", r.config},
    };
}

FidelityReport report_from_json(const nlohmann::json& j) {
    FidelityReport r;
    r.kl_divergence = j.at("kl_divergence").get<double>();
    r.original = summary_from_json(j.at("original"));
    r.simplified = summary_from_json(j.at("simplified"));
    r.removed_count = j.at("removed_count").get<std::size_t>();
    const auto& c = j.at("communities");
    r.communities.count = c.at("count").get<std::size_t>();
    r.communities.avg_size = c.at("avg_size").get<double>();
    r.communities.max_size = c.at("max_size").get<std::size_t>();
    r.communities.min_size = c.at("min_size").get<std::size_t>();
    r.config = j.at("config");
    return r;
}

}  // namespace fcmreduce
