#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fcmreduce/fcm.hpp"
#include "fcmreduce/population.hpp"

namespace fcmreduce {

// Metric registry -------------------------------------------------------------

enum class MetricKind {
    ConceptCount,
    Density,
    RtRatio,
    Clustering,
    Tsp,
    JaccardEdges,
    KsEdges,
    KlEdges,
    KlNodes,
    CentralityCosine,
    CompareGraphs,
};

enum class CentralityKind { Betweenness, Closeness, Degree };

inline constexpr std::array<MetricKind, 11> all_metrics = {
    MetricKind::ConceptCount, MetricKind::Density,      MetricKind::RtRatio,  MetricKind::Clustering,
    MetricKind::Tsp,          MetricKind::JaccardEdges, MetricKind::KsEdges,  MetricKind::KlEdges,
    MetricKind::KlNodes,      MetricKind::CentralityCosine, MetricKind::CompareGraphs,
};

std::string to_string(MetricKind kind);
std::string to_string(CentralityKind kind);
MetricKind parse_metric_kind(const std::string& name);
CentralityKind parse_centrality_kind(const std::string& name);

/// Equal-width bins over [lo, hi]; values equal to hi land in the last bin.
struct HistogramBins {
    double lo = 0.0;
    double hi = 1.0;
    int count = 10;
};

struct DiscretizationSpec {
    int node_bins = 10;   // over [0, 1]
    int edge_bins = 20;   // over [-1, 1]
    double alpha = 1e-6;  // additive smoothing per bin
};

struct MetricConfig {
    double epsilon = 0.05;  // structural presence threshold on |w|
    DiscretizationSpec discretization;
    CentralityKind centrality = CentralityKind::Degree;
    int tsp_ensemble_size = 20;
    int tsp_swaps_per_edge = 10;
    std::uint64_t tsp_seed = 0;

    void validate() const;
};

struct TieWeight {
    double dissimilarity = 0.0;
    double similarity = 1.0;

    static TieWeight from_dissimilarity(double d);
};

// Structural view -------------------------------------------------------------

/// Unweighted digraph derived from an FCM: edge i -> j (i != j) present iff
/// w(i, j) != 0 and |w(i, j)| >= epsilon. Self-loops are not structural edges.
struct Digraph {
    Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic> adj;

    Index size() const noexcept { return adj.rows(); }
    Index edge_count() const { return adj.cast<Index>().sum(); }
    bool has_edge(Index i, Index j) const { return adj(i, j) != 0; }
};

Digraph structural_view(const Fcm& f, double epsilon);

// Scalar summaries and their distances ------------------------------------------

double concept_count_distance(const Fcm& a, const Fcm& b);

double density(const Fcm& f, double epsilon);
double density_distance(const Fcm& a, const Fcm& b, double epsilon);

struct ReceiverTransmitter {
    int receivers = 0;
    int transmitters = 0;
    /// Laplace-smoothed (R + 1) / (T + 1).
    double ratio() const { return (receivers + 1.0) / (transmitters + 1.0); }
};

ReceiverTransmitter receivers_transmitters(const Fcm& f, double epsilon);
double rt_ratio(const Fcm& f, double epsilon);
double rt_distance(const Fcm& a, const Fcm& b, double epsilon);

double clustering_coefficient(const Digraph& g);
double clustering_coefficient(const Fcm& f, double epsilon);
double clustering_distance(const Fcm& a, const Fcm& b, double epsilon);

// Triads ------------------------------------------------------------------------

/// The 16 directed triad classes in the usual M-A-N order:
/// 003 012 102 021D 021U 021C 111D 111U 030T 030C 201 120D 120U 120C 210 300.
inline constexpr std::array<const char*, 16> triad_names = {
    "003",  "012",  "102",  "021D", "021U", "021C", "111D", "111U",
    "030T", "030C", "201",  "120D", "120U", "120C", "210",  "300",
};

using TriadCensus = std::array<std::int64_t, 16>;
using TriadProfile = std::array<double, 16>;

/// Class index (into triad_names) of the triad on nodes (u, v, w).
int triad_class(const Digraph& g, Index u, Index v, Index w);

TriadCensus triad_census(const Digraph& g);

/// One degree-preserving randomization: swaps_per_edge * |E| attempted swaps of
/// a->b, c->d into a->d, c->b (rejected if it would create a loop or duplicate).
Digraph degree_preserving_shuffle(const Digraph& g, int swaps_per_edge, std::uint64_t seed);

/// Z-scores of the census against a randomized ensemble (0 where the ensemble
/// has zero spread), scaled to unit Euclidean length unless all zero.
TriadProfile triad_profile(const Fcm& f, double epsilon, int ensemble_size, int swaps_per_edge, std::uint64_t seed);

/// (1 - cos(a, b)) / 2. Two zero profiles are at distance 0; one zero profile
/// is treated as orthogonal to anything else (distance 0.5).
double profile_distance(const TriadProfile& a, const TriadProfile& b);

double tsp_distance(const Fcm& a, const Fcm& b, const MetricConfig& config);

// Edge-set and distribution comparisons -------------------------------------------

double jaccard_edge_distance(const Fcm& a, const Fcm& b);

Eigen::VectorXd centrality(const Fcm& f, CentralityKind kind, double epsilon);
double centrality_cosine_distance(const Fcm& a, const Fcm& b, CentralityKind kind, double epsilon);

/// Additively smoothed, renormalized histogram.
Eigen::VectorXd smoothed_histogram(std::span<const double> samples, const HistogramBins& bins, double alpha);

/// D(P || Q) in nats between the smoothed histograms of two samples.
double kl_divergence(std::span<const double> p_samples, std::span<const double> q_samples,
                     const HistogramBins& bins, double alpha);

/// Signed nonzero weights, row-major.
std::vector<double> edge_weights(const Fcm& f);
std::vector<double> node_values(const Fcm& f);

double kl_edges_divergence(const Fcm& p, const Fcm& q, const DiscretizationSpec& spec);
double kl_nodes_divergence(const Fcm& p, const Fcm& q, const DiscretizationSpec& spec);
/// Symmetrized (D(P||Q) + D(Q||P)) / 2 forms used as tie dissimilarities.
double kl_edges_distance(const Fcm& a, const Fcm& b, const DiscretizationSpec& spec);
double kl_nodes_distance(const Fcm& a, const Fcm& b, const DiscretizationSpec& spec);

/// Two-sample Kolmogorov-Smirnov statistic.
double ks_statistic(std::span<const double> a, std::span<const double> b);
double ks_edge_distance(const Fcm& a, const Fcm& b);

/// ||Wa - Wb||_F / (||Wa||_F + ||Wb||_F) on label-aligned matrices; 0/0 = 0.
double compare_graphs_distance(const Fcm& a, const Fcm& b);

// Dispatch ----------------------------------------------------------------------

double dissimilarity(MetricKind kind, const Fcm& a, const Fcm& b, const MetricConfig& config);

/// One weight per tie of `graph`, in tie order. Only existing ties are weighed.
/// TSP profiles are computed once per agent, seeded by a hash of the map's
/// content so equal maps get equal profiles whatever their position.
std::vector<TieWeight> weigh_ties(const std::vector<Agent>& agents, const SocialGraph& graph, MetricKind kind,
                                  const MetricConfig& config, int threads = 1);

}  // namespace fcmreduce
