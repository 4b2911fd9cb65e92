#include <doctest.h>

#include <sstream>

#include "fcmreduce/io.hpp"
#include "fcmreduce/population.hpp"
#include "helpers.hpp"

using namespace fcmreduce;
using nlohmann::json;

TEST_CASE("fcm json") {
    SUBCASE("round trip") {
        Rng rng(6);
        std::vector<Fcm> fcms;
        for (int i = 0; i < 20; ++i) fcms.push_back(testing::random_fcm(rng));
        fcms.push_back(build_obesity_fcm());
        CHECK(population_from_json(json::parse(population_to_json(fcms).dump())) == fcms);
    }
    SUBCASE("unlisted activations are zero") {
        const auto f = fcm_from_json(json::parse(R"({"concepts": ["a", "b"],
            "edges": [{"source": "a", "target": "b", "weight": -0.4}], "activation": {"b": 0.25}})"));
        CHECK(f.initial_activation()(0) == 0.0);
        CHECK(f.initial_activation()(1) == 0.25);
        CHECK(f.weights()(0, 1) == -0.4);
    }
    SUBCASE("errors name the record and edge") {
        const auto bad = json::parse(R"([{"concepts": ["a"], "edges": []},
            {"concepts": ["a", "b"], "edges": [{"source": "a", "target": "b", "weight": 1.5}]}])");
        try {
            population_from_json(bad);
            FAIL("expected a load error");
        } catch (const LoadError& e) {
            const std::string what = e.what();
            CHECK(what.find("record 1") != std::string::npos);
            CHECK(what.find("edge 0") != std::string::npos);
        }
        CHECK_THROWS_AS(fcm_from_json(json::parse(R"({"concepts": ["a", "a"], "edges": []})")), LoadError);
        CHECK_THROWS_AS(fcm_from_json(json::parse(
                            R"({"concepts": ["a"], "edges": [{"source": "a", "target": "z", "weight": 0.1}]})")),
                        LoadError);
        CHECK_THROWS_AS(population_from_json(json::parse("{}")), LoadError);
    }
}

TEST_CASE("csv round trips") {
    const auto agents = make_agents(generate_cmaes_style(25, 1));
    TopologySpec spec{TopologyKind::ScaleFree, 25};
    const auto g = assign_channels(build_topology(spec), agents, 3);

    std::stringstream topo;
    write_topology_csv(topo, g);
    CHECK(topo.str().rfind("i,j,channel_label\n", 0) == 0);
    CHECK(read_topology_csv(topo, 25) == g);

    std::vector<TieWeight> w;
    for (std::size_t k = 0; k < g.tie_count(); ++k) w.push_back(TieWeight::from_dissimilarity(0.1 * k + 1.0 / 3.0));
    std::stringstream ties;
    write_tie_weights_csv(ties, g, MetricKind::KsEdges, w);
    const auto back = read_tie_weights_csv(ties);
    CHECK(back.ties == g.ties());
    for (std::size_t k = 0; k < w.size(); ++k) {
        CHECK(back.weights[k].dissimilarity == w[k].dissimilarity);
        CHECK(back.weights[k].similarity == w[k].similarity);
    }

    const Partition p({0, 1, 1, 2, 0});
    std::stringstream part;
    write_partition_csv(part, p);
    CHECK(read_partition_csv(part) == p);

    const OutputDistribution d{{0.1, 1.0 / 3.0, 0.999999999999}};
    std::stringstream dist;
    write_distribution_csv(dist, d);
    CHECK(read_distribution_csv(dist).samples == d.samples);

    std::stringstream longf;
    write_long_format_csv(longf, {{"original", &d}, {"simplified", &d}});
    CHECK(longf.str().rfind("model,run_index,value\noriginal,0,", 0) == 0);
}

TEST_CASE("csv primitives") {
    CHECK(split_csv_line("a,\"b,c\",d") == std::vector<std::string>{"a", "b,c", "d"});
    CHECK(split_csv_line("\"say \"\"hi\"\"\",x") == std::vector<std::string>{"say \"hi\"", "x"});
    CHECK(csv_field("plain") == "plain");
    CHECK(csv_field("Action planning: when, which") == "\"Action planning: when, which\"");
    CHECK(std::stod(format_double(0.1)) == 0.1);
    std::stringstream bad("i,j,channel_label\n0,x,a\n");
    CHECK_THROWS_AS(read_topology_csv(bad, 3), LoadError);
    std::stringstream header("wrong\n");
    CHECK_THROWS_AS(read_partition_csv(header), LoadError);
}
