#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "bellccp/serialize.hpp"

using namespace bellccp;

TEST_CASE("behavior json round-trip") {
    Behavior p = hexagon_realization().behavior();
    Json j = behavior_to_json(p);
    Behavior q = behavior_from_json(j);
    CHECK(q.partyACard() == 3);
    CHECK(q.outB() == 2);
    for (std::size_t i = 0; i < p.raw().size(); ++i)
        CHECK(q.raw()[i] == doctest::Approx(p.raw()[i]).epsilon(1e-15));
}

TEST_CASE("tiny negative round-off is clamped at output only") {
    std::vector<double> probs = {1.0 + 1e-13, -1e-13, 0.0, 0.0};
    Behavior p(1, 1, 2, 2, std::move(probs));
    CHECK(p.p(0, 1, 0, 0) < 0.0);  // internal value untouched
    Json j = behavior_to_json(p);
    CHECK(j["probs"][0][0][0][1].get<double>() == 0.0);
}

TEST_CASE("functional json round-trips preserve evaluation") {
    BellFunctional i = i3322_functional();
    Json j = functional_to_json(i);
    CHECK(j["kind"] == "general");
    BellFunctional i2 = bell_functional_from_json(j);
    Behavior hex = hexagon_realization().behavior();
    CHECK(evaluate(i2, hex) == evaluate(i, hex));
    CHECK(i2.marginalCoeffsA() == i.marginalCoeffsA());

    CorrelationFunctional c = cglmp4_functional();
    Json jc = functional_to_json(c);
    CHECK(jc["kind"] == "correlation");
    CorrelationFunctional c2 = correlation_functional_from_json(jc);
    CHECK(c2.terms().size() == c.terms().size());
    CHECK(c2.lhv_bound_value() == c.lhv_bound_value());
    MultiBehavior u = MultiBehavior::uniform({2, 2}, {4, 4});
    CHECK(evaluate_correlation(c2, u) == evaluate_correlation(c, u));
}

TEST_CASE("task json round-trip is byte-identical") {
    CCPTask task = bell_to_ccp(cglmp3_correlation());
    Json j = task_to_json(task);
    std::string once = j.dump();
    CCPTask back = task_from_json(j);
    CHECK(back.factored());
    CHECK(back.x0Card() == 3);
    std::string twice = task_to_json(back).dump();
    CHECK(once == twice);
}

TEST_CASE("strategy tables round-trip byte-identically") {
    // The four-outcome tuple strategy, stored as flat arrays.
    DeterministicStrategy s;
    s.kind = DeterministicStrategy::Kind::Classical;
    s.messageSize = 4;
    s.guessSize = 4;
    s.encoder = {0, 0, 0, 1, 0, 2, 3, 0};
    s.decoder = {0, 3, 1, 2, 2, 3, 0, 1};
    std::string once = strategy_to_json(s).dump();
    DeterministicStrategy back = strategy_from_json(Json::parse(once));
    std::string twice = strategy_to_json(back).dump();
    CHECK(once == twice);
    CHECK(back.encoder == s.encoder);
    CHECK(back.decoder == s.decoder);

    DeterministicStrategy add = additive_strategy(3, 2, 2);
    std::string a = strategy_to_json(add).dump();
    DeterministicStrategy add2 = strategy_from_json(Json::parse(a));
    CHECK(strategy_to_json(add2).dump() == a);
    CHECK(add2.kind == DeterministicStrategy::Kind::BellAssisted);
}

TEST_CASE("ccp behavior json round-trip") {
    Behavior p = chsh_optimal_realization().behavior();
    CCPBehavior q = quantum_ccp_behavior(p, additive_strategy(2, 2, 2));
    CCPBehavior back = ccp_behavior_from_json(ccp_behavior_to_json(q));
    for (std::size_t i = 0; i < q.raw().size(); ++i)
        CHECK(back.raw()[i] == doctest::Approx(q.raw()[i]).epsilon(1e-15));
}

TEST_CASE("small vertex sets export to json") {
    VertexSet v = classical_vertices(3, 2, 2, 2);
    Json j = vertex_set_to_json(v);
    CHECK(j["count"].get<std::size_t>() == v.size());
    CHECK(j["vertices"].size() == v.size());
    CHECK(j["vertices"][0].size() == 6);
}

TEST_CASE("sweep report exports carry the schema version") {
    SweepReport r;
    r.strategiesVisited = 10;
    r.distinctBehaviors = 4;
    r.hasMin = true;
    r.minVStar = 0.9;
    ShardOutcome o;
    o.strategiesVisited = 10;
    o.agg.hasMin = true;
    o.agg.minVStar = 0.9;
    r.shards.push_back(o);
    Json j = sweep_report_to_json(r);
    CHECK(j["schema"] == "bellccp.sweep-report/1");
    CHECK(j["summary"]["distinctBehaviors"] == 4);
    std::string csv = sweep_report_to_csv(r);
    // Header plus one shard row plus the summary row.
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
}
