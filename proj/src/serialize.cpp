#include "bellccp/serialize.hpp"

#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace bellccp {

namespace {

// Negative round-off is clamped to zero only here, at output formatting.
double clamp_output(double v) { return v < 0.0 && v > -1e-12 ? 0.0 : v; }

}  // namespace

Json behavior_to_json(const Behavior& p) {
    Json probs = Json::array();
    for (int x = 0; x < p.partyACard(); ++x) {
        Json jx = Json::array();
        for (int y = 0; y < p.partyBCard(); ++y) {
            Json jy = Json::array();
            for (int a = 0; a < p.outA(); ++a) {
                Json ja = Json::array();
                for (int b = 0; b < p.outB(); ++b)
                    ja.push_back(clamp_output(p.p(a, b, x, y)));
                jy.push_back(std::move(ja));
            }
            jx.push_back(std::move(jy));
        }
        probs.push_back(std::move(jx));
    }
    return Json{{"partyACard", p.partyACard()},
                {"partyBCard", p.partyBCard()},
                {"outA", p.outA()},
                {"outB", p.outB()},
                {"probs", std::move(probs)}};
}

Behavior behavior_from_json(const Json& j) {
    int xc = j.at("partyACard"), yc = j.at("partyBCard");
    int ac = j.at("outA"), bc = j.at("outB");
    const Json& probs = j.at("probs");
    std::vector<double> flat;
    flat.reserve(static_cast<std::size_t>(xc) * yc * ac * bc);
    for (int x = 0; x < xc; ++x)
        for (int y = 0; y < yc; ++y)
            for (int a = 0; a < ac; ++a)
                for (int b = 0; b < bc; ++b)
                    flat.push_back(probs.at(x).at(y).at(a).at(b).get<double>());
    return Behavior(xc, yc, ac, bc, std::move(flat));
}

Json functional_to_json(const BellFunctional& f) {
    Json coeffs = Json::array();
    for (int a = 0; a < f.outA(); ++a) {
        Json ja = Json::array();
        for (int b = 0; b < f.outB(); ++b) {
            Json jb = Json::array();
            for (int x = 0; x < f.partyACard(); ++x) {
                Json jx = Json::array();
                for (int y = 0; y < f.partyBCard(); ++y)
                    jx.push_back(f.coeff(a, b, x, y));
                jb.push_back(std::move(jx));
            }
            ja.push_back(std::move(jb));
        }
        coeffs.push_back(std::move(ja));
    }
    Json out{{"kind", "general"},
             {"partyACard", f.partyACard()},
             {"partyBCard", f.partyBCard()},
             {"outA", f.outA()},
             {"outB", f.outB()},
             {"coeffs", std::move(coeffs)},
             {"constant", f.constant()},
             {"lhvBound", f.lhv_bound_value()}};
    if (f.has_marginals()) {
        out["margA"] = f.marginalCoeffsA();
        out["margB"] = f.marginalCoeffsB();
    }
    return out;
}

Json functional_to_json(const CorrelationFunctional& f) {
    Json terms = Json::array();
    for (const auto& t : f.terms())
        terms.push_back(Json{{"settings", t.settings}, {"r", t.r}, {"t", t.t}, {"f", t.f}});
    return Json{{"kind", "correlation"},
                {"parties", f.parties()},
                {"modulus", f.modulus()},
                {"settingCards", f.settingCards()},
                {"terms", std::move(terms)},
                {"lhvBound", f.lhv_bound_value()}};
}

BellFunctional bell_functional_from_json(const Json& j) {
    if (j.at("kind") != "general")
        throw std::invalid_argument("expected a general-kind functional");
    int xc = j.at("partyACard"), yc = j.at("partyBCard");
    int ac = j.at("outA"), bc = j.at("outB");
    std::vector<double> coeffs;
    const Json& jc = j.at("coeffs");
    for (int a = 0; a < ac; ++a)
        for (int b = 0; b < bc; ++b)
            for (int x = 0; x < xc; ++x)
                for (int y = 0; y < yc; ++y)
                    coeffs.push_back(jc.at(a).at(b).at(x).at(y).get<double>());
    std::vector<double> margA, margB;
    if (j.contains("margA")) margA = j.at("margA").get<std::vector<double>>();
    if (j.contains("margB")) margB = j.at("margB").get<std::vector<double>>();
    return BellFunctional(xc, yc, ac, bc, std::move(coeffs), j.at("constant"),
                          j.at("lhvBound"), std::move(margA), std::move(margB));
}

CorrelationFunctional correlation_functional_from_json(const Json& j) {
    if (j.at("kind") != "correlation")
        throw std::invalid_argument("expected a correlation-kind functional");
    std::vector<CorrelationTerm> terms;
    for (const auto& jt : j.at("terms"))
        terms.push_back(CorrelationTerm{jt.at("settings").get<std::vector<int>>(),
                                        jt.at("r"), jt.at("t"), jt.at("f")});
    return CorrelationFunctional(j.at("parties"), j.at("modulus"),
                                 j.at("settingCards").get<std::vector<int>>(),
                                 std::move(terms), j.at("lhvBound"));
}

Json task_to_json(const CCPTask& t) {
    Json coeffs = Json::array();
    for (int g = 0; g < t.guessSize(); ++g) {
        Json jg = Json::array();
        for (int X = 0; X < t.senderInputs(); ++X) {
            Json jx = Json::array();
            for (int Y = 0; Y < t.receiverInputs(); ++Y) jx.push_back(t.t(g, X, Y));
            jg.push_back(std::move(jx));
        }
        coeffs.push_back(std::move(jg));
    }
    Json out{{"senderInputs", t.senderInputs()},
             {"receiverInputs", t.receiverInputs()},
             {"messageSize", t.messageSize()},
             {"guessSize", t.guessSize()},
             {"coeffs", std::move(coeffs)}};
    if (t.factored()) out["factoredInput"] = Json{{"x0Card", t.x0Card()}, {"xCard", t.xCard()}};
    return out;
}

CCPTask task_from_json(const Json& j) {
    int nA = j.at("senderInputs"), nB = j.at("receiverInputs");
    int M = j.at("messageSize"), G = j.at("guessSize");
    std::vector<double> coeffs;
    const Json& jc = j.at("coeffs");
    for (int g = 0; g < G; ++g)
        for (int X = 0; X < nA; ++X)
            for (int Y = 0; Y < nB; ++Y) coeffs.push_back(jc.at(g).at(X).at(Y).get<double>());
    CCPTask task(nA, nB, M, G, std::move(coeffs));
    if (j.contains("factoredInput"))
        task.set_factored_input(j.at("factoredInput").at("x0Card"),
                                j.at("factoredInput").at("xCard"));
    return task;
}

Json strategy_to_json(const DeterministicStrategy& s) {
    Json out{{"kind", s.kind == DeterministicStrategy::Kind::Classical
                          ? "classical"
                          : "bell-assisted"},
             {"messageSize", s.messageSize},
             {"guessSize", s.guessSize},
             // Flat tables; encoder index a + outA*(x0 + x0Card*x) for
             // bell-assisted, plain X (= x0 + x0Card*x when factored) for
             // classical; decoder index m + M*(b + outB*y), or m + M*Y.
             {"encoder", s.encoder},
             {"decoder", s.decoder}};
    if (s.kind == DeterministicStrategy::Kind::BellAssisted) {
        out["outA"] = s.outA;
        out["x0Card"] = s.x0Card;
        out["xCard"] = s.xCard;
        out["outB"] = s.outB;
        out["yCard"] = s.yCard;
    }
    return out;
}

DeterministicStrategy strategy_from_json(const Json& j) {
    DeterministicStrategy s;
    std::string kind = j.at("kind");
    if (kind == "classical") {
        s.kind = DeterministicStrategy::Kind::Classical;
    } else if (kind == "bell-assisted") {
        s.kind = DeterministicStrategy::Kind::BellAssisted;
        s.outA = j.at("outA");
        s.x0Card = j.at("x0Card");
        s.xCard = j.at("xCard");
        s.outB = j.at("outB");
        s.yCard = j.at("yCard");
    } else {
        throw std::invalid_argument("unknown strategy kind: " + kind);
    }
    s.messageSize = j.at("messageSize");
    s.guessSize = j.at("guessSize");
    s.encoder = j.at("encoder").get<std::vector<int>>();
    s.decoder = j.at("decoder").get<std::vector<int>>();
    s.validate();
    return s;
}

Json ccp_behavior_to_json(const CCPBehavior& p) {
    Json probs = Json::array();
    for (int X = 0; X < p.senderInputs(); ++X) {
        Json jx = Json::array();
        for (int Y = 0; Y < p.receiverInputs(); ++Y) {
            Json jy = Json::array();
            for (int g = 0; g < p.guessSize(); ++g)
                jy.push_back(clamp_output(p.p(g, X, Y)));
            jx.push_back(std::move(jy));
        }
        probs.push_back(std::move(jx));
    }
    return Json{{"senderInputs", p.senderInputs()},
                {"receiverInputs", p.receiverInputs()},
                {"guessSize", p.guessSize()},
                {"probs", std::move(probs)}};
}

CCPBehavior ccp_behavior_from_json(const Json& j) {
    int nA = j.at("senderInputs"), nB = j.at("receiverInputs"), G = j.at("guessSize");
    std::vector<double> flat;
    const Json& probs = j.at("probs");
    for (int X = 0; X < nA; ++X)
        for (int Y = 0; Y < nB; ++Y)
            for (int g = 0; g < G; ++g)
                flat.push_back(probs.at(X).at(Y).at(g).get<double>());
    return CCPBehavior(nA, nB, G, std::move(flat));
}

Json vertex_set_to_json(const VertexSet& v) {
    Json vertices = Json::array();
    for (std::size_t i = 0; i < v.size(); ++i) {
        Json table = Json::array();
        for (int X = 0; X < v.senderInputs(); ++X)
            for (int Y = 0; Y < v.receiverInputs(); ++Y)
                table.push_back(v.guess(i, X, Y));
        vertices.push_back(std::move(table));
    }
    return Json{{"senderInputs", v.senderInputs()},
                {"receiverInputs", v.receiverInputs()},
                {"messageSize", v.messageSize()},
                {"guessSize", v.guessSize()},
                {"count", v.size()},
                {"vertices", std::move(vertices)}};
}

namespace {

Json shard_to_json(const ShardOutcome& o) {
    Json failures = Json::array();
    for (const auto& [mu, msg] : o.agg.failures)
        failures.push_back(Json{{"strategy", mu}, {"error", msg}});
    return Json{{"shardIndex", o.shardIndex},
                {"totalShards", o.totalShards},
                {"strategiesVisited", o.strategiesVisited},
                {"distinctBehaviors", o.distinct.size()},
                {"lpSolves", o.agg.lpSolves},
                {"minVStar", o.agg.hasMin ? Json(o.agg.minVStar) : Json(nullptr)},
                {"argminStrategy", o.agg.hasMin ? Json(o.agg.argminMu) : Json(nullptr)},
                {"maxResidual", o.agg.maxResidual},
                {"flagged", o.agg.flagged},
                {"failures", std::move(failures)}};
}

}  // namespace

Json sweep_report_to_json(const SweepReport& r) {
    Json shards = Json::array();
    for (const auto& o : r.shards) shards.push_back(shard_to_json(o));
    Json failures = Json::array();
    for (const auto& [mu, msg] : r.failures)
        failures.push_back(Json{{"strategy", mu}, {"error", msg}});
    return Json{
        {"schema", "bellccp.sweep-report/1"},
        {"summary",
         Json{{"strategiesVisited", r.strategiesVisited},
              {"distinctBehaviors", r.distinctBehaviors},
              {"lpSolves", r.lpSolves},
              {"minVStar", r.hasMin ? Json(r.minVStar) : Json(nullptr)},
              {"argminStrategy",
               r.hasMin ? Json{{"mu", r.argminMu},
                               {"encoder", r.argminEncoder},
                               {"decoder", r.argminDecoder}}
                        : Json(nullptr)},
              {"maxResidual", r.maxResidual},
              {"flagged", r.flagged},
              {"failures", std::move(failures)}}},
        {"shards", std::move(shards)}};
}

std::string sweep_report_to_csv(const SweepReport& r) {
    std::ostringstream out;
    out << "row,shard,totalShards,strategiesVisited,distinctBehaviors,lpSolves,"
           "minVStar,argminStrategy,maxResidual,flaggedCount,failureCount\n";
    auto emit = [&out](const std::string& row, std::uint64_t shard,
                       std::uint64_t total, std::uint64_t visited,
                       std::uint64_t distinct, std::uint64_t solves, bool hasMin,
                       double minV, std::uint64_t argmin, double residual,
                       std::size_t flagged, std::size_t failures) {
        out << row << ',' << shard << ',' << total << ',' << visited << ','
            << distinct << ',' << solves << ',';
        if (hasMin)
            out << std::setprecision(17) << minV << ',' << argmin << ',';
        else
            out << ",,";
        out << std::setprecision(17) << residual << ',' << flagged << ','
            << failures << '\n';
    };
    for (const auto& o : r.shards)
        emit("shard", o.shardIndex, o.totalShards, o.strategiesVisited,
             o.distinct.size(), o.agg.lpSolves, o.agg.hasMin, o.agg.minVStar,
             o.agg.argminMu, o.agg.maxResidual, o.agg.flagged.size(),
             o.agg.failures.size());
    emit("summary", 0, r.shards.empty() ? 1 : r.shards.front().totalShards,
         r.strategiesVisited, r.distinctBehaviors, r.lpSolves, r.hasMin,
         r.minVStar, r.argminMu, r.maxResidual, r.flagged.size(),
         r.failures.size());
    return out.str();
}

}  // namespace bellccp
