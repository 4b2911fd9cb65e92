#include "fcmreduce/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace fcmreduce {

using nlohmann::json;

json fcm_to_json(const Fcm& f) {
    json edges = json::array();
    const auto& w = f.weights();
    for (Index i = 0; i < f.size(); ++i) {
        for (Index j = 0; j < f.size(); ++j) {
            if (w(i, j) != 0.0) {
                edges.push_back({{"source", f.concept_label(i)}, {"target", f.concept_label(j)}, {"weight", w(i, j)}});
            }
        }
    }
    json activation = json::object();
    for (Index i = 0; i < f.size(); ++i) activation[f.concept_label(i)] = f.initial_activation()(i);
    return {{"concepts", f.concepts()}, {"edges", std::move(edges)}, {"activation", std::move(activation)}};
}

Fcm fcm_from_json(const json& j) {
    if (!j.is_object()) throw LoadError("fcm must be a JSON object");
    if (!j.contains("concepts") || !j.at("concepts").is_array()) throw LoadError("fcm needs a 'concepts' array");
    std::vector<std::string> concepts;
    std::map<std::string, Index> index;
    for (const auto& c : j.at("concepts")) {
        if (!c.is_string()) throw LoadError("concept labels must be strings");
        auto label = c.get<std::string>();
        if (label.empty()) throw LoadError("empty concept label");
        if (!index.emplace(label, static_cast<Index>(concepts.size())).second) {
            throw LoadError("duplicate concept label '" + label + "'");
        }
        concepts.push_back(std::move(label));
    }
    const auto n = static_cast<Index>(concepts.size());
    auto lookup = [&](const json& e, const char* key, std::size_t k) {
        if (!e.contains(key) || !e.at(key).is_string()) {
            throw LoadError("edge " + std::to_string(k) + ": missing '" + key + "'");
        }
        const auto label = e.at(key).get<std::string>();
        const auto it = index.find(label);
        if (it == index.end()) throw LoadError("edge " + std::to_string(k) + ": unknown concept '" + label + "'");
        return it->second;
    };

    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
    if (j.contains("edges")) {
        if (!j.at("edges").is_array()) throw LoadError("'edges' must be an array");
        std::size_t k = 0;
        for (const auto& e : j.at("edges")) {
            const Index s = lookup(e, "source", k);
            const Index t = lookup(e, "target", k);
            if (!e.contains("weight") || !e.at("weight").is_number()) {
                throw LoadError("edge " + std::to_string(k) + ": missing numeric 'weight'");
            }
            const double weight = e.at("weight").get<double>();
            const std::string name = "edge " + std::to_string(k) + " (" + concepts[static_cast<std::size_t>(s)] +
                                     " -> " + concepts[static_cast<std::size_t>(t)] + ")";
            if (!(weight >= -1.0 && weight <= 1.0)) {
                throw LoadError(name + ": weight " + format_double(weight) + " outside [-1, 1]");
            }
            if (w(s, t) != 0.0) throw LoadError(name + ": listed twice");
            w(s, t) = weight;
            ++k;
        }
    }

    Eigen::VectorXd a = Eigen::VectorXd::Zero(n);
    if (j.contains("activation")) {
        if (!j.at("activation").is_object()) throw LoadError("'activation' must be an object");
        for (const auto& [label, value] : j.at("activation").items()) {
            const auto it = index.find(label);
            if (it == index.end()) throw LoadError("activation for unknown concept '" + label + "'");
            if (!value.is_number()) throw LoadError("activation of '" + label + "' must be a number");
            const double v = value.get<double>();
            if (!(v >= 0.0 && v <= 1.0)) throw LoadError("activation of '" + label + "' outside [0, 1]");
            a(it->second) = v;
        }
    }
    return Fcm(std::move(concepts), std::move(w), std::move(a));
}

json population_to_json(const std::vector<Fcm>& fcms) {
    json out = json::array();
    for (const auto& f : fcms) out.push_back(fcm_to_json(f));
    return out;
}

std::vector<Fcm> population_from_json(const json& j) {
    if (!j.is_array()) throw LoadError("population file must hold a JSON array of maps");
    std::vector<Fcm> out;
    out.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) {
        try {
            out.push_back(fcm_from_json(j[i]));
        } catch (const Error& e) {
            throw LoadError("record " + std::to_string(i) + ": " + e.what());
        }
    }
    return out;
}

void export_population(const std::filesystem::path& path, const std::vector<Fcm>& fcms) {
    write_json(path, population_to_json(fcms));
}

std::vector<Fcm> import_population(const std::filesystem::path& path) {
    const auto j = read_json(path);
    try {
        return population_from_json(j);
    } catch (const LoadError& e) {
        throw LoadError(path.string() + ": " + e.what());
    }
}

// CSV ---------------------------------------------------------------------------

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    if (quoted) throw LoadError("csv: unterminated quote in '" + line + "'");
    fields.push_back(std::move(cur));
    return fields;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

namespace {

struct CsvReader {
    std::istream& in;
    std::string expected_header;
    std::size_t line_no = 0;

    // Returns rows after the header; blank lines are skipped.
    std::vector<std::vector<std::string>> rows(std::size_t width) {
        std::string line;
        if (!std::getline(in, line)) throw LoadError("csv: empty input, expected header '" + expected_header + "'");
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line != expected_header) {
            throw LoadError("csv: header '" + line + "' does not match '" + expected_header + "'");
        }
        std::vector<std::vector<std::string>> out;
        while (std::getline(in, line)) {
            ++line_no;
            if (line.empty() || line == "\r") continue;
            auto fields = split_csv_line(line);
            if (fields.size() != width) {
                throw LoadError("csv line " + std::to_string(line_no) + ": expected " + std::to_string(width) +
                                " fields, got " + std::to_string(fields.size()));
            }
            out.push_back(std::move(fields));
        }
        return out;
    }

    long parse_int(const std::string& s) const {
        long v = 0;
        const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
        if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
            throw LoadError("csv line " + std::to_string(line_no) + ": '" + s + "' is not an integer");
        }
        return v;
    }

    double parse_double(const std::string& s) const {
        double v = 0;
        const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
        if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
            throw LoadError("csv: '" + s + "' is not a number");
        }
        return v;
    }
};

}  // namespace

void write_topology_csv(std::ostream& out, const SocialGraph& graph) {
    out << "i,j,channel_label\n";
    for (std::size_t k = 0; k < graph.tie_count(); ++k) {
        const auto& t = graph.tie(k);
        out << t.first << ',' << t.second << ',' << (graph.channels().empty() ? "" : csv_field(graph.channel(k)))
            << '\n';
    }
}

SocialGraph read_topology_csv(std::istream& in, std::size_t n) {
    CsvReader reader{in, "i,j,channel_label"};
    std::vector<Tie> ties;
    std::vector<std::string> channels;
    bool any_channel = false;
    for (auto& row : reader.rows(3)) {
        ties.emplace_back(static_cast<int>(reader.parse_int(row[0])), static_cast<int>(reader.parse_int(row[1])));
        any_channel = any_channel || !row[2].empty();
        channels.push_back(std::move(row[2]));
    }
    if (!any_channel) return SocialGraph(n, std::move(ties));
    for (const auto& c : channels) {
        if (c.empty()) throw LoadError("topology csv: some ties have channels and some do not");
    }
    return SocialGraph(n, std::move(ties), std::move(channels));
}

void write_tie_weights_csv(std::ostream& out, const SocialGraph& graph, MetricKind metric,
                           const std::vector<TieWeight>& weights) {
    if (weights.size() != graph.tie_count()) throw ContractViolation("tie csv: one weight per tie required");
    out << "i,j,metric,dissimilarity,similarity\n";
    const auto name = to_string(metric);
    for (std::size_t k = 0; k < weights.size(); ++k) {
        const auto& t = graph.tie(k);
        out << t.first << ',' << t.second << ',' << name << ',' << format_double(weights[k].dissimilarity) << ','
            << format_double(weights[k].similarity) << '\n';
    }
}

WeightedTies read_tie_weights_csv(std::istream& in) {
    CsvReader reader{in, "i,j,metric,dissimilarity,similarity"};
    WeightedTies out;
    for (const auto& row : reader.rows(5)) {
        out.ties.emplace_back(static_cast<int>(reader.parse_int(row[0])), static_cast<int>(reader.parse_int(row[1])));
        out.weights.push_back(TieWeight{reader.parse_double(row[3]), reader.parse_double(row[4])});
    }
    return out;
}

void write_partition_csv(std::ostream& out, const Partition& p) {
    out << "agent_id,community_id\n";
    for (std::size_t i = 0; i < p.agent_count(); ++i) out << i << ',' << p.community_of(i) << '\n';
}

Partition read_partition_csv(std::istream& in) {
    CsvReader reader{in, "agent_id,community_id"};
    std::vector<std::pair<long, int>> entries;
    for (const auto& row : reader.rows(2)) {
        entries.emplace_back(reader.parse_int(row[0]), static_cast<int>(reader.parse_int(row[1])));
    }
    std::sort(entries.begin(), entries.end());
    std::vector<int> labels;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (entries[i].first != static_cast<long>(i)) throw LoadError("partition csv: agent ids must be 0..n-1");
        labels.push_back(entries[i].second);
    }
    return Partition(labels);
}

void write_distribution_csv(std::ostream& out, const OutputDistribution& d) {
    out << "run_index,output_value\n";
    for (std::size_t i = 0; i < d.samples.size(); ++i) out << i << ',' << format_double(d.samples[i]) << '\n';
}

OutputDistribution read_distribution_csv(std::istream& in) {
    CsvReader reader{in, "run_index,output_value"};
    std::vector<std::pair<long, double>> entries;
    for (const auto& row : reader.rows(2)) entries.emplace_back(reader.parse_int(row[0]), reader.parse_double(row[1]));
    std::sort(entries.begin(), entries.end());
    OutputDistribution d;
    for (const auto& [i, v] : entries) d.samples.push_back(v);
    return d;
}

void write_long_format_csv(std::ostream& out,
                           const std::vector<std::pair<std::string, const OutputDistribution*>>& models) {
    out << "model,run_index,value\n";
    for (const auto& [name, dist] : models) {
        for (std::size_t i = 0; i < dist->samples.size(); ++i) {
            out << csv_field(name) << ',' << i << ',' << format_double(dist->samples[i]) << '\n';
        }
    }
}

json provenance_to_json(const ReducedModel& model) {
    json communities = json::object();
    for (std::size_t c = 0; c < model.provenance.size(); ++c) {
        communities[std::to_string(c)] = {{"representative", model.provenance[c].representative},
                                          {"members", model.provenance[c].members}};
    }
    json redrawn = json::array();
    for (const auto& r : model.redrawn) {
        redrawn.push_back({{"community_a", r.community_a}, {"community_b", r.community_b}, {"channel", r.channel}});
    }
    return {{"communities", std::move(communities)},
            {"redrawn_channels", std::move(redrawn)},
            {"removed_count", model.removed_count}};
}

void write_text(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << content;
    if (!out) throw Error("failed writing " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw LoadError("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_json(const std::filesystem::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

json read_json(const std::filesystem::path& path) {
    const auto text = read_text(path);
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw LoadError(path.string() + ": malformed JSON: " + e.what());
    }
}

}  // namespace fcmreduce
