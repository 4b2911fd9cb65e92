#include "fcmreduce/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <deque>
#include <map>
#include <set>

#include "fcmreduce/parallel.hpp"
#include "fcmreduce/rng.hpp"

namespace fcmreduce {

std::string to_string(MetricKind kind) {
    switch (kind) {
        case MetricKind::ConceptCount: return "concept_count";
        case MetricKind::Density: return "density";
        case MetricKind::RtRatio: return "rt_ratio";
        case MetricKind::Clustering: return "clustering";
        case MetricKind::Tsp: return "tsp";
        case MetricKind::JaccardEdges: return "jaccard_edges";
        case MetricKind::KsEdges: return "ks_edges";
        case MetricKind::KlEdges: return "kl_edges";
        case MetricKind::KlNodes: return "kl_nodes";
        case MetricKind::CentralityCosine: return "centrality_cosine";
        case MetricKind::CompareGraphs: return "compare_graphs";
    }
    return "?";
}

std::string to_string(CentralityKind kind) {
    switch (kind) {
        case CentralityKind::Betweenness: return "betweenness";
        case CentralityKind::Closeness: return "closeness";
        case CentralityKind::Degree: return "degree";
    }
    return "?";
}

MetricKind parse_metric_kind(const std::string& name) {
    for (auto kind : all_metrics) {
        if (to_string(kind) == name) return kind;
    }
    std::string valid;
    for (auto kind : all_metrics) valid += (valid.empty() ? "" : ", ") + to_string(kind);
    throw ConfigError("unknown metric '" + name + "' (valid: " + valid + ")");
}

CentralityKind parse_centrality_kind(const std::string& name) {
    for (auto kind : {CentralityKind::Betweenness, CentralityKind::Closeness, CentralityKind::Degree}) {
        if (to_string(kind) == name) return kind;
    }
    throw ConfigError("unknown centrality '" + name + "' (valid: betweenness, closeness, degree)");
}

void MetricConfig::validate() const {
    if (!(epsilon >= 0.0)) throw ConfigError("metric: epsilon must be >= 0");
    if (discretization.node_bins < 2 || discretization.edge_bins < 2) throw ConfigError("metric: bins must be >= 2");
    if (!(discretization.alpha > 0.0)) throw ConfigError("metric: smoothing alpha must be > 0");
    if (tsp_ensemble_size < 2) throw ConfigError("metric: tsp ensemble size must be >= 2");
    if (tsp_swaps_per_edge < 0) throw ConfigError("metric: tsp swaps per edge must be >= 0");
}

TieWeight TieWeight::from_dissimilarity(double d) {
    if (!(d >= 0.0)) throw UndefinedDistance("tie weight: dissimilarity must be >= 0");
    return TieWeight{d, std::exp(-d)};
}

// ---------------------------------------------------------------------------

Digraph structural_view(const Fcm& f, double epsilon) {
    const auto n = f.size();
    Digraph g;
    g.adj.setZero(n, n);
    const auto& w = f.weights();
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
            if (i != j && w(i, j) != 0.0 && std::abs(w(i, j)) >= epsilon) g.adj(i, j) = 1;
        }
    }
    return g;
}

double concept_count_distance(const Fcm& a, const Fcm& b) {
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    if (na + nb == 0.0) throw UndefinedDistance("concept count: both maps are empty");
    return std::abs(na - nb) / (na + nb);
}

double density(const Fcm& f, double epsilon) {
    const auto n = f.size();
    if (n < 2) throw UndefinedDistance("density: undefined for fewer than 2 concepts");
    const auto g = structural_view(f, epsilon);
    return static_cast<double>(g.edge_count()) / static_cast<double>(n * (n - 1));
}

double density_distance(const Fcm& a, const Fcm& b, double epsilon) {
    return std::abs(density(a, epsilon) - density(b, epsilon));
}

ReceiverTransmitter receivers_transmitters(const Fcm& f, double epsilon) {
    const auto g = structural_view(f, epsilon);
    const Eigen::VectorXi out_deg = g.adj.cast<int>().rowwise().sum();
    const Eigen::VectorXi in_deg = g.adj.cast<int>().colwise().sum().transpose();
    ReceiverTransmitter rt;
    for (Index i = 0; i < g.size(); ++i) {
        if (in_deg(i) > 0 && out_deg(i) == 0) ++rt.receivers;
        if (out_deg(i) > 0 && in_deg(i) == 0) ++rt.transmitters;
    }
    return rt;
}

double rt_ratio(const Fcm& f, double epsilon) { return receivers_transmitters(f, epsilon).ratio(); }

double rt_distance(const Fcm& a, const Fcm& b, double epsilon) {
    const double ra = rt_ratio(a, epsilon);
    const double rb = rt_ratio(b, epsilon);
    return std::abs(ra - rb) / (ra + rb);
}

double clustering_coefficient(const Digraph& g) {
    const auto n = g.size();
    if (n == 0) return 0.0;
    double total = 0.0;
    std::vector<Index> nbrs;
    for (Index i = 0; i < n; ++i) {
        nbrs.clear();
        for (Index j = 0; j < n; ++j) {
            if (j != i && (g.has_edge(i, j) || g.has_edge(j, i))) nbrs.push_back(j);
        }
        const auto k = static_cast<double>(nbrs.size());
        if (nbrs.size() < 2) continue;
        double links = 0.0;
        for (Index a : nbrs) {
            for (Index b : nbrs) {
                if (a != b && g.has_edge(a, b)) links += 1.0;
            }
        }
        total += links / (k * (k - 1.0));
    }
    return total / static_cast<double>(n);
}

double clustering_coefficient(const Fcm& f, double epsilon) {
    return clustering_coefficient(structural_view(f, epsilon));
}

double clustering_distance(const Fcm& a, const Fcm& b, double epsilon) {
    return std::abs(clustering_coefficient(a, epsilon) - clustering_coefficient(b, epsilon));
}

// Triads --------------------------------------------------------------------------

namespace {

// 6-bit triad code -> 1-based class index (Batagelj & Mrvar).
constexpr std::array<int, 64> kTricodes = {
    1, 2,  2, 3,  2, 4,  6,  8,  2, 6,  5,  7,  3, 8,  7,  11, 2, 6,  4,  8,  5,  9,
    9, 13, 6, 10, 9, 14, 7,  14, 12, 15, 2, 5,  6, 7,  6,  9,  10, 14, 4, 9,  9,  12,
    8, 13, 14, 15, 3, 7,  8, 11, 7, 12, 14, 15, 8, 14, 13, 15, 11, 15, 15, 16,
};

}  // namespace

int triad_class(const Digraph& g, Index v, Index u, Index w) {
    int code = 0;
    if (g.has_edge(v, u)) code |= 1;
    if (g.has_edge(u, v)) code |= 2;
    if (g.has_edge(v, w)) code |= 4;
    if (g.has_edge(w, v)) code |= 8;
    if (g.has_edge(u, w)) code |= 16;
    if (g.has_edge(w, u)) code |= 32;
    return kTricodes[static_cast<std::size_t>(code)] - 1;
}

TriadCensus triad_census(const Digraph& g) {
    TriadCensus census{};
    const auto n = g.size();
    for (Index a = 0; a < n; ++a) {
        for (Index b = a + 1; b < n; ++b) {
            for (Index c = b + 1; c < n; ++c) ++census[static_cast<std::size_t>(triad_class(g, a, b, c))];
        }
    }
    return census;
}

Digraph degree_preserving_shuffle(const Digraph& g, int swaps_per_edge, std::uint64_t seed) {
    Digraph out = g;
    std::vector<std::pair<Index, Index>> edges;
    for (Index i = 0; i < g.size(); ++i) {
        for (Index j = 0; j < g.size(); ++j) {
            if (g.has_edge(i, j)) edges.emplace_back(i, j);
        }
    }
    if (edges.size() < 2) return out;
    Rng rng(seed);
    const std::size_t attempts = static_cast<std::size_t>(swaps_per_edge) * edges.size();
    for (std::size_t t = 0; t < attempts; ++t) {
        const auto e1 = rng.below(edges.size());
        const auto e2 = rng.below(edges.size());
        if (e1 == e2) continue;
        const auto [a, b] = edges[e1];
        const auto [c, d] = edges[e2];
        if (a == d || c == b || out.has_edge(a, d) || out.has_edge(c, b)) continue;
        out.adj(a, b) = 0;
        out.adj(c, d) = 0;
        out.adj(a, d) = 1;
        out.adj(c, b) = 1;
        edges[e1] = {a, d};
        edges[e2] = {c, b};
    }
    return out;
}

TriadProfile triad_profile(const Fcm& f, double epsilon, int ensemble_size, int swaps_per_edge, std::uint64_t seed) {
    if (f.size() < 3) throw UndefinedDistance("triad profile: needs at least 3 concepts");
    if (ensemble_size < 1) throw ConfigError("triad profile: ensemble size must be >= 1");
    const auto g = structural_view(f, epsilon);
    const auto observed = triad_census(g);

    std::array<double, 16> sum{};
    std::array<double, 16> sum_sq{};
    for (int r = 0; r < ensemble_size; ++r) {
        const auto shuffled = degree_preserving_shuffle(g, swaps_per_edge, derive_seed(seed, static_cast<std::uint64_t>(r)));
        const auto census = triad_census(shuffled);
        for (std::size_t k = 0; k < 16; ++k) {
            const auto x = static_cast<double>(census[k]);
            sum[k] += x;
            sum_sq[k] += x * x;
        }
    }
    TriadProfile z{};
    const double m = ensemble_size;
    double norm_sq = 0.0;
    for (std::size_t k = 0; k < 16; ++k) {
        const double mean = sum[k] / m;
        const double var = std::max(0.0, sum_sq[k] / m - mean * mean);
        const double sd = std::sqrt(var);
        // Integer counts: any real spread is at least 1/m, far above rounding noise.
        z[k] = sd > 1e-9 ? (static_cast<double>(observed[k]) - mean) / sd : 0.0;
        norm_sq += z[k] * z[k];
    }
    if (norm_sq > 0.0) {
        const double norm = std::sqrt(norm_sq);
        for (auto& v : z) v /= norm;
    }
    return z;
}

double profile_distance(const TriadProfile& a, const TriadProfile& b) {
    double dot = 0.0;
    double na = 0.0;
    double nb = 0.0;
    for (std::size_t k = 0; k < 16; ++k) {
        dot += a[k] * b[k];
        na += a[k] * a[k];
        nb += b[k] * b[k];
    }
    if (na == 0.0 && nb == 0.0) return 0.0;
    if (na == 0.0 || nb == 0.0) return 0.5;
    const double c = std::clamp(dot / std::sqrt(na * nb), -1.0, 1.0);
    return (1.0 - c) / 2.0;
}

namespace {

std::uint64_t content_hash(const Fcm& f) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto feed = [&h](const void* data, std::size_t len) {
        const auto* p = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < len; ++i) {
            h ^= p[i];
            h *= 0x100000001b3ULL;
        }
    };
    for (const auto& label : f.concepts()) {
        feed(label.data(), label.size());
        feed("\0", 1);
    }
    for (Index i = 0; i < f.weights().size(); ++i) {
        const double w = f.weights().data()[i] + 0.0;  // folds -0 into +0
        feed(&w, sizeof w);
    }
    return h;
}

// Profiles are seeded by map content so that equal maps always get equal
// profiles, wherever and in whatever order they are evaluated.
TriadProfile seeded_profile(const Fcm& f, const MetricConfig& config) {
    return triad_profile(f, config.epsilon, config.tsp_ensemble_size, config.tsp_swaps_per_edge,
                         derive_seed(config.tsp_seed, content_hash(f)));
}

}  // namespace

double tsp_distance(const Fcm& a, const Fcm& b, const MetricConfig& config) {
    return profile_distance(seeded_profile(a, config), seeded_profile(b, config));
}

// Edge sets ------------------------------------------------------------------------

namespace {

using LabelPair = std::pair<std::string, std::string>;

std::map<LabelPair, double> labeled_edges(const Fcm& f) {
    std::map<LabelPair, double> out;
    const auto& w = f.weights();
    for (Index i = 0; i < f.size(); ++i) {
        for (Index j = 0; j < f.size(); ++j) {
            if (w(i, j) != 0.0) out.emplace(LabelPair{f.concept_label(i), f.concept_label(j)}, w(i, j));
        }
    }
    return out;
}

std::vector<std::string> label_union(const Fcm& a, const Fcm& b) {
    std::set<std::string> labels(a.concepts().begin(), a.concepts().end());
    labels.insert(b.concepts().begin(), b.concepts().end());
    return {labels.begin(), labels.end()};
}

Eigen::MatrixXd aligned_weights(const Fcm& f, const std::vector<std::string>& labels) {
    const auto n = static_cast<Index>(labels.size());
    std::vector<Index> pos(static_cast<std::size_t>(f.size()));
    for (Index i = 0; i < f.size(); ++i) {
        pos[static_cast<std::size_t>(i)] = static_cast<Index>(
            std::lower_bound(labels.begin(), labels.end(), f.concept_label(i)) - labels.begin());
    }
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
    for (Index i = 0; i < f.size(); ++i) {
        for (Index j = 0; j < f.size(); ++j) {
            out(pos[static_cast<std::size_t>(i)], pos[static_cast<std::size_t>(j)]) = f.weights()(i, j);
        }
    }
    return out;
}

Eigen::VectorXd aligned_vector(const Fcm& f, const Eigen::VectorXd& values, const std::vector<std::string>& labels) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Index>(labels.size()));
    for (Index i = 0; i < f.size(); ++i) {
        const auto k = std::lower_bound(labels.begin(), labels.end(), f.concept_label(i)) - labels.begin();
        out(static_cast<Index>(k)) = values(i);
    }
    return out;
}

}  // namespace

double jaccard_edge_distance(const Fcm& a, const Fcm& b) {
    const auto ea = labeled_edges(a);
    const auto eb = labeled_edges(b);
    double sum_min = 0.0;
    double sum_max = 0.0;
    for (const auto& [key, wa] : ea) {
        const auto it = eb.find(key);
        const double x = std::abs(wa);
        const double y = it == eb.end() ? 0.0 : std::abs(it->second);
        sum_min += std::min(x, y);
        sum_max += std::max(x, y);
    }
    for (const auto& [key, wb] : eb) {
        if (!ea.count(key)) sum_max += std::abs(wb);
    }
    if (sum_max == 0.0) throw UndefinedDistance("jaccard: both maps have no weighted edges");
    return 1.0 - sum_min / sum_max;
}

Eigen::VectorXd centrality(const Fcm& f, CentralityKind kind, double epsilon) {
    const auto g = structural_view(f, epsilon);
    const auto n = g.size();
    Eigen::VectorXd c = Eigen::VectorXd::Zero(n);
    if (kind == CentralityKind::Degree) {
        const Eigen::MatrixXd adj = g.adj.cast<double>();
        return adj.rowwise().sum() + adj.colwise().sum().transpose();
    }

    std::vector<std::vector<Index>> out(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
            if (g.has_edge(i, j)) out[static_cast<std::size_t>(i)].push_back(j);
        }
    }

    if (kind == CentralityKind::Closeness) {
        // Outgoing distances; Wasserman-Faust scaling for unreachable nodes.
        for (Index s = 0; s < n; ++s) {
            std::vector<int> dist(static_cast<std::size_t>(n), -1);
            std::deque<Index> queue{s};
            dist[static_cast<std::size_t>(s)] = 0;
            double total = 0.0;
            double reached = 0.0;
            while (!queue.empty()) {
                const Index v = queue.front();
                queue.pop_front();
                for (Index w : out[static_cast<std::size_t>(v)]) {
                    if (dist[static_cast<std::size_t>(w)] < 0) {
                        dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(v)] + 1;
                        total += dist[static_cast<std::size_t>(w)];
                        reached += 1.0;
                        queue.push_back(w);
                    }
                }
            }
            if (total > 0.0 && n > 1) c(s) = (reached / static_cast<double>(n - 1)) * (reached / total);
        }
        return c;
    }

    // Brandes' betweenness on the unweighted digraph.
    for (Index s = 0; s < n; ++s) {
        std::vector<std::vector<Index>> pred(static_cast<std::size_t>(n));
        std::vector<double> sigma(static_cast<std::size_t>(n), 0.0);
        std::vector<int> dist(static_cast<std::size_t>(n), -1);
        std::vector<Index> stack;
        std::deque<Index> queue{s};
        sigma[static_cast<std::size_t>(s)] = 1.0;
        dist[static_cast<std::size_t>(s)] = 0;
        while (!queue.empty()) {
            const Index v = queue.front();
            queue.pop_front();
            stack.push_back(v);
            for (Index w : out[static_cast<std::size_t>(v)]) {
                auto& dw = dist[static_cast<std::size_t>(w)];
                if (dw < 0) {
                    dw = dist[static_cast<std::size_t>(v)] + 1;
                    queue.push_back(w);
                }
                if (dw == dist[static_cast<std::size_t>(v)] + 1) {
                    sigma[static_cast<std::size_t>(w)] += sigma[static_cast<std::size_t>(v)];
                    pred[static_cast<std::size_t>(w)].push_back(v);
                }
            }
        }
        std::vector<double> delta(static_cast<std::size_t>(n), 0.0);
        while (!stack.empty()) {
            const Index w = stack.back();
            stack.pop_back();
            for (Index v : pred[static_cast<std::size_t>(w)]) {
                delta[static_cast<std::size_t>(v)] += sigma[static_cast<std::size_t>(v)] /
                                                      sigma[static_cast<std::size_t>(w)] *
                                                      (1.0 + delta[static_cast<std::size_t>(w)]);
            }
            if (w != s) c(w) += delta[static_cast<std::size_t>(w)];
        }
    }
    return c;
}

double centrality_cosine_distance(const Fcm& a, const Fcm& b, CentralityKind kind, double epsilon) {
    const auto labels = label_union(a, b);
    const Eigen::VectorXd va = aligned_vector(a, centrality(a, kind, epsilon), labels);
    const Eigen::VectorXd vb = aligned_vector(b, centrality(b, kind, epsilon), labels);
    const double na = va.norm();
    const double nb = vb.norm();
    if (na == 0.0 || nb == 0.0) {
        throw UndefinedDistance("centrality cosine: " + to_string(kind) + " centrality vector has zero norm");
    }
    const double c = std::clamp(va.dot(vb) / (na * nb), -1.0, 1.0);
    return (1.0 - c) / 2.0;
}

// Distributions ----------------------------------------------------------------------

Eigen::VectorXd smoothed_histogram(std::span<const double> samples, const HistogramBins& bins, double alpha) {
    if (samples.empty()) throw UndefinedDistance("histogram: empty sample");
    if (bins.count < 1 || !(bins.hi > bins.lo)) throw ConfigError("histogram: invalid bins");
    Eigen::VectorXd h = Eigen::VectorXd::Zero(bins.count);
    const double width = bins.hi - bins.lo;
    for (double x : samples) {
        auto k = static_cast<long>(std::floor((x - bins.lo) / width * bins.count));
        k = std::clamp(k, 0L, static_cast<long>(bins.count) - 1);
        h(k) += 1.0;
    }
    h /= static_cast<double>(samples.size());
    h.array() += alpha;
    return h / h.sum();
}

double kl_divergence(std::span<const double> p_samples, std::span<const double> q_samples, const HistogramBins& bins,
                     double alpha) {
    const Eigen::VectorXd p = smoothed_histogram(p_samples, bins, alpha);
    const Eigen::VectorXd q = smoothed_histogram(q_samples, bins, alpha);
    double d = 0.0;
    for (Index i = 0; i < p.size(); ++i) {
        if (p(i) != q(i)) d += p(i) * std::log(p(i) / q(i));
    }
    return std::max(0.0, d);
}

std::vector<double> edge_weights(const Fcm& f) {
    std::vector<double> out;
    const auto& w = f.weights();
    for (Index i = 0; i < f.size(); ++i) {
        for (Index j = 0; j < f.size(); ++j) {
            if (w(i, j) != 0.0) out.push_back(w(i, j));
        }
    }
    return out;
}

std::vector<double> node_values(const Fcm& f) {
    const auto& a = f.initial_activation();
    return {a.data(), a.data() + a.size()};
}

double kl_edges_divergence(const Fcm& p, const Fcm& q, const DiscretizationSpec& spec) {
    const auto wp = edge_weights(p);
    const auto wq = edge_weights(q);
    if (wp.empty() || wq.empty()) throw UndefinedDistance("kl edges: a map has no edges");
    return kl_divergence(wp, wq, HistogramBins{-1.0, 1.0, spec.edge_bins}, spec.alpha);
}

double kl_nodes_divergence(const Fcm& p, const Fcm& q, const DiscretizationSpec& spec) {
    const auto vp = node_values(p);
    const auto vq = node_values(q);
    if (vp.empty() || vq.empty()) throw UndefinedDistance("kl nodes: a map has no concepts");
    return kl_divergence(vp, vq, HistogramBins{0.0, 1.0, spec.node_bins}, spec.alpha);
}

double kl_edges_distance(const Fcm& a, const Fcm& b, const DiscretizationSpec& spec) {
    return 0.5 * (kl_edges_divergence(a, b, spec) + kl_edges_divergence(b, a, spec));
}

double kl_nodes_distance(const Fcm& a, const Fcm& b, const DiscretizationSpec& spec) {
    return 0.5 * (kl_nodes_divergence(a, b, spec) + kl_nodes_divergence(b, a, spec));
}

double ks_statistic(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw UndefinedDistance("ks: empty sample");
    std::vector<double> x(a.begin(), a.end());
    std::vector<double> y(b.begin(), b.end());
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    const double nx = static_cast<double>(x.size());
    const double ny = static_cast<double>(y.size());
    std::size_t i = 0;
    std::size_t j = 0;
    double d = 0.0;
    while (i < x.size() && j < y.size()) {
        const double v = std::min(x[i], y[j]);
        while (i < x.size() && x[i] == v) ++i;
        while (j < y.size() && y[j] == v) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
    }
    return d;
}

double ks_edge_distance(const Fcm& a, const Fcm& b) {
    const auto wa = edge_weights(a);
    const auto wb = edge_weights(b);
    if (wa.empty() || wb.empty()) throw UndefinedDistance("ks edges: a map has no edges");
    return ks_statistic(wa, wb);
}

double compare_graphs_distance(const Fcm& a, const Fcm& b) {
    const auto labels = label_union(a, b);
    const Eigen::MatrixXd wa = aligned_weights(a, labels);
    const Eigen::MatrixXd wb = aligned_weights(b, labels);
    const double denom = wa.norm() + wb.norm();
    if (denom == 0.0) return 0.0;
    return (wa - wb).norm() / denom;
}

// ---------------------------------------------------------------------------------

double dissimilarity(MetricKind kind, const Fcm& a, const Fcm& b, const MetricConfig& config) {
    switch (kind) {
        case MetricKind::ConceptCount: return concept_count_distance(a, b);
        case MetricKind::Density: return density_distance(a, b, config.epsilon);
        case MetricKind::RtRatio: return rt_distance(a, b, config.epsilon);
        case MetricKind::Clustering: return clustering_distance(a, b, config.epsilon);
        case MetricKind::Tsp: return tsp_distance(a, b, config);
        case MetricKind::JaccardEdges: return jaccard_edge_distance(a, b);
        case MetricKind::KsEdges: return ks_edge_distance(a, b);
        case MetricKind::KlEdges: return kl_edges_distance(a, b, config.discretization);
        case MetricKind::KlNodes: return kl_nodes_distance(a, b, config.discretization);
        case MetricKind::CentralityCosine: return centrality_cosine_distance(a, b, config.centrality, config.epsilon);
        case MetricKind::CompareGraphs: return compare_graphs_distance(a, b);
    }
    throw ContractViolation("dissimilarity: unknown metric");
}

std::vector<TieWeight> weigh_ties(const std::vector<Agent>& agents, const SocialGraph& graph, MetricKind kind,
                                  const MetricConfig& config, int threads) {
    config.validate();
    if (agents.size() != graph.size()) {
        throw ContractViolation("weigh_ties: " + std::to_string(agents.size()) + " agents for a graph of " +
                                std::to_string(graph.size()));
    }
    auto tie_error = [&](std::size_t k, const std::exception& e) {
        const auto& t = graph.tie(k);
        return UndefinedDistance("weigh_ties: tie {" + std::to_string(t.first) + "," + std::to_string(t.second) +
                                 "} under " + to_string(kind) + ": " + e.what());
    };

    std::vector<TieWeight> weights(graph.tie_count());
    if (kind == MetricKind::Tsp) {
        std::vector<TriadProfile> profiles(agents.size());
        std::vector<char> needed(agents.size(), 0);
        for (const auto& t : graph.ties()) {
            needed[static_cast<std::size_t>(t.first)] = 1;
            needed[static_cast<std::size_t>(t.second)] = 1;
        }
        std::vector<std::exception_ptr> errors(agents.size());
        parallel_for(agents.size(), threads, [&](std::size_t i) {
            if (!needed[i]) return;
            try {
                profiles[i] = seeded_profile(agents[i].fcm, config);
            } catch (const std::exception& e) {
                errors[i] = std::make_exception_ptr(
                    UndefinedDistance("weigh_ties: agent " + std::to_string(i) + " under tsp: " + e.what()));
            }
        });
        for (const auto& e : errors) {
            if (e) std::rethrow_exception(e);
        }
        for (std::size_t k = 0; k < graph.tie_count(); ++k) {
            const auto& t = graph.tie(k);
            weights[k] = TieWeight::from_dissimilarity(profile_distance(profiles[static_cast<std::size_t>(t.first)],
                                                                        profiles[static_cast<std::size_t>(t.second)]));
        }
        return weights;
    }

    std::vector<std::exception_ptr> errors(graph.tie_count());
    parallel_for(graph.tie_count(), threads, [&](std::size_t k) {
        const auto& t = graph.tie(k);
        try {
            weights[k] = TieWeight::from_dissimilarity(dissimilarity(kind, agents[static_cast<std::size_t>(t.first)].fcm,
                                                                     agents[static_cast<std::size_t>(t.second)].fcm,
                                                                     config));
        } catch (const std::exception& e) {
            errors[k] = std::make_exception_ptr(tie_error(k, e));
        }
    });
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return weights;
}

}  // namespace fcmreduce
