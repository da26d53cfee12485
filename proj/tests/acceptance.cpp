// Acceptance suite: one line per criterion, nonzero exit on any failure.
// Expected values and tolerances come from the fixtures file.

#include <chrono>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "bellccp/ccp.hpp"
#include "bellccp/functionals.hpp"
#include "bellccp/polytope.hpp"
#include "bellccp/quantum.hpp"
#include "bellccp/rng.hpp"
#include "bellccp/serialize.hpp"
#include "bellccp/sweep.hpp"
#include "bellccp/visibility.hpp"

using namespace bellccp;
using Clock = std::chrono::steady_clock;

namespace {

Json gFixtures;

struct Expect {
    double value = 0.0;
    double tol = 0.0;
    std::string kind = "abs";
};

Expect fixture(const std::string& target, const std::string& name) {
    for (const auto& entry : gFixtures.at("targets").at(target)) {
        if (entry.at("name") == name)
            return Expect{entry.at("expected").get<double>(),
                          entry.at("tolerance").get<double>(),
                          entry.value("kind", "abs")};
    }
    throw std::runtime_error("fixture missing: " + target + "/" + name);
}

struct Criterion {
    std::string label;
    double budgetSeconds;
    bool pass = true;
    std::vector<std::string> notes;

    void check(const std::string& what, double computed, const Expect& e) {
        bool ok;
        if (e.kind == "le")
            ok = computed <= e.value + e.tol;
        else if (e.kind == "ge")
            ok = computed >= e.value - e.tol;
        else
            ok = std::abs(computed - e.value) <= e.tol;
        std::ostringstream s;
        s << what << '=' << std::setprecision(12) << computed;
        if (!ok) {
            s << " (expected " << e.kind << ' ' << e.value;
            if (e.tol > 0) s << " +/- " << e.tol;
            s << ')';
            pass = false;
        }
        notes.push_back(s.str());
    }

    void require(const std::string& what, bool ok) {
        if (!ok) pass = false;
        notes.push_back(what + (ok ? "=ok" : "=FAILED"));
    }
};

int gFailures = 0;

void run(int number, const std::string& label, double budgetSeconds,
         void (*body)(Criterion&)) {
    Criterion c{label, budgetSeconds};
    auto t0 = Clock::now();
    try {
        body(c);
    } catch (const std::exception& e) {
        c.pass = false;
        c.notes.push_back(std::string("exception: ") + e.what());
    }
    double dt = std::chrono::duration<double>(Clock::now() - t0).count();
    if (budgetSeconds > 0 && dt > budgetSeconds) {
        c.pass = false;
        c.notes.push_back("runtime budget exceeded");
    }
    if (!c.pass) ++gFailures;
    std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << "criterion " << number << ": "
              << label << " [" << std::fixed << std::setprecision(2) << dt << " s]\n"
              << std::defaultfloat;
    for (const auto& n : c.notes) std::cout << "         " << n << '\n';
}

// --------------------------------------------------------------------------

void c1_chsh(Criterion& c) {
    CCPTask task = bell_to_ccp(chsh_functional());
    double classical = optimal_classical_score(task).value;
    c.check("optimal_classical_score", classical, fixture("chsh-ccp", "classical-score"));
    c.require("equals 3/4 exactly", classical == 0.75);
    Behavior p = chsh_optimal_realization().behavior();
    double quantum = score(task, quantum_ccp_behavior(p, additive_strategy(2, 2, 2)));
    c.check("additive_quantum_score", quantum,
            fixture("chsh-ccp", "additive-quantum-score"));
}

void c2_cglmp_functional(Criterion& c) {
    double bound = lhv_bound(cglmp3_correlation()).value;
    c.check("lhv_bound", bound, fixture("cglmp3-bound", "lhv-bound"));
    c.require("equals 1/2 exactly", bound == 0.5);
    Behavior p = cglmp_optimal_realization().behavior();
    double bq =
        evaluate_correlation(cglmp3_correlation(), MultiBehavior::from_bipartite(p));
    c.check("realization_value", bq, fixture("cglmp3-bound", "realization-value"));
    c.check("violation_threshold", 0.5 / bq,
            fixture("cglmp3-bound", "violation-threshold"));
}

void c3_cglmp_classical(Criterion& c) {
    CCPTask task = bell_to_ccp(cglmp3_correlation());
    double sweep = optimal_classical_score(task).value;
    c.check("optimal_classical_score", sweep,
            fixture("cglmp3-classical", "optimal-score"));
    double brute = brute_force_classical_score(task);
    c.require("brute force over 3^12 agrees exactly", sweep == brute);
    c.check("reference_strategy_score",
            score_strategy(task, cglmp3_reference_strategy()),
            fixture("cglmp3-classical", "reference-strategy-score"));
}

void c4_cglmp_polytope(Criterion& c) {
    VertexSet v = classical_vertices(6, 2, 3, 3);
    c.check("vertex_count", static_cast<double>(v.size()),
            fixture("cglmp3-visibility", "vertex-count"));
}

void c5_cglmp_visibility(Criterion& c) {
    VertexSet v = classical_vertices(6, 2, 3, 3);
    Behavior p = cglmp_optimal_realization().behavior();
    CCPBehavior target = quantum_ccp_behavior(p, additive_strategy(3, 2, 2));
    VisibilityResult r = max_visibility(target, CCPBehavior::uniform(6, 2, 3), v);
    c.check("visibility", r.vStar, fixture("cglmp3-visibility", "visibility"));
    c.check("lp_residual", r.residual, fixture("cglmp3-visibility", "lp-residual"));
    double bq =
        evaluate_correlation(cglmp3_correlation(), MultiBehavior::from_bipartite(p));
    c.check("additive_crossing", (2.0 / 3.0) / bq,
            fixture("cglmp3-visibility", "additive-crossing"));
}

void c6_cglmp4(Criterion& c) {
    CCPTask task = bell_to_ccp(cglmp4_functional());
    c.check("optimal_classical_score", optimal_classical_score(task).value,
            fixture("cglmp4-classical", "optimal-score"));
    c.check("tuple_strategy_score",
            score_strategy(task, cglmp4_reference_strategy()),
            fixture("cglmp4-classical", "tuple-strategy-score"));
}

void c7_hexagon(Criterion& c) {
    Behavior p = hexagon_realization().behavior();
    c.check("hexagon_value", evaluate(i3322_functional(), p),
            fixture("i3322-hexagon", "quantum-value"));
    VertexSet v = classical_vertices(6, 3, 2, 2);
    CCPBehavior target = quantum_ccp_behavior(p, additive_strategy(2, 3, 3));
    VisibilityResult r = max_visibility(target, CCPBehavior::uniform(6, 3, 2), v);
    c.check("visibility", r.vStar, fixture("i3322-appc-lp", "visibility"));
}

void c8_candidate(Criterion& c) {
    Realization cand = candidate_realization();
    c.check("i3322_value", evaluate(i3322_functional(), cand.behavior()),
            fixture("candidate-check", "i3322-value"));
    c.check("horodecki", horodecki_chsh(cand.state),
            fixture("candidate-check", "horodecki-below-one"));
}

void c9_sweep(Criterion& c) {
    Behavior p = candidate_realization().behavior();
    VertexSet v = classical_vertices(6, 3, 2, 2);
    SweepConfig cfg;
    cfg.sampleSize = 10000;
    cfg.seed = 7;
    ShardOutcome out = sweep_simulability(p, v, cfg);
    c.require("sample size >= 10^4", out.strategiesVisited >= 10000);
    c.check("sampled_min_visibility", out.agg.hasMin ? out.agg.minVStar : 0.0,
            fixture("i3322-sweep", "sampled-min-visibility"));
    c.check("lp_failures", static_cast<double>(out.agg.failures.size()),
            fixture("i3322-sweep", "lp-failures"));

    // Exact dedup count over the full 2^24 enumeration (no LPs).
    SweepConfig fullCfg;
    ShardOutcome full = sweep_enumerate_only(p, fullCfg);
    c.require("full enumeration visited 2^24 strategies",
              full.strategiesVisited == (1ull << 24));
    c.check("full_distinct_count", static_cast<double>(full.distinct.size()),
            fixture("sweep-full-dedup", "full-distinct-count"));
    if (full.distinct.size() != 8192992)
        c.notes.push_back(
            "note: value-level dedup of the exact candidate behavior collapses "
            "coincident tables (both third-setting x-marginals are exactly 1/2); "
            "the reference count 8192992 is reachable only by bitwise float "
            "comparison and no tolerance-based rule reproduces it");
}

void c10_properties(Criterion& c) {
    // Additive-protocol score identity on 100 random (not necessarily
    // no-signaling) behaviors.
    SplitMix64 rng(2024);
    auto randomMulti = [&](std::vector<int> settings, std::vector<int> outcomes) {
        std::size_t s = 1, o = 1;
        for (int v : settings) s *= v;
        for (int v : outcomes) o *= v;
        std::vector<double> probs(s * o);
        for (std::size_t i = 0; i < s; ++i) {
            double tot = 0;
            for (std::size_t k = 0; k < o; ++k) {
                probs[i * o + k] = static_cast<double>(rng.next() >> 11) + 1.0;
                tot += probs[i * o + k];
            }
            for (std::size_t k = 0; k < o; ++k) probs[i * o + k] /= tot;
        }
        return MultiBehavior(settings, outcomes, std::move(probs));
    };
    CorrelationFunctional c3 = cglmp3_correlation();
    double worstGap = 0;
    for (int trial = 0; trial < 100; ++trial) {
        MultiBehavior mb = randomMulti({2, 2}, {3, 3});
        double gap = std::abs(additive_multiparty_score(c3, mb) -
                              evaluate_correlation(c3, mb));
        worstGap = std::max(worstGap, gap);
    }
    c.require("additive score identity on 100 random behaviors (<=1e-12)",
              worstGap <= 1e-12);

    double worstNs = 0;
    for (const Realization& r :
         {chsh_optimal_realization(), cglmp_optimal_realization(),
          hexagon_realization(), candidate_realization()})
        worstNs = std::max(worstNs, r.behavior().no_signaling_defect());
    c.require("no-signaling of built quantum behaviors (<=1e-10)", worstNs <= 1e-10);

    VertexSet v = classical_vertices(6, 3, 2, 2);
    Behavior hex = hexagon_realization().behavior();
    CCPBehavior target = quantum_ccp_behavior(hex, additive_strategy(2, 3, 3));
    VisibilityResult r = max_visibility(target, CCPBehavior::uniform(6, 3, 2), v);
    c.require("LP mixture residual (<=1e-7)", r.residual <= 1e-7);

    // Shard invariance and checkpoint-resume determinism on the 2^12-strategy
    // subspace (encoder 0 with every decoder).
    SweepConfig cfg;
    cfg.strategyRange = {{0, 1 << 12}};
    cfg.blockSize = 4;
    Behavior p = candidate_realization().behavior();
    ShardOutcome whole = sweep_enumerate_only(p, cfg);
    std::vector<ShardOutcome> parts;
    for (std::uint64_t i = 0; i < 2; ++i) {
        SweepConfig sc = cfg;
        sc.shardIndex = i;
        sc.totalShards = 2;
        parts.push_back(sweep_enumerate_only(p, sc));
    }
    StrategyEnumerator en(p, cfg);
    SweepReport mergedParts = merge_shards(en.space(), std::move(parts));
    c.require("shard union matches the single-shard dedup",
              mergedParts.distinctBehaviors == whole.distinct.size());

    std::string ckpt = (std::filesystem::temp_directory_path() /
                        "bellccp_acceptance_ckpt.bin").string();
    std::filesystem::remove(ckpt);
    ShardOutcome ref = sweep_simulability(p, v, cfg);
    std::string refJson = sweep_report_to_json(merge_shards(en.space(), {ref})).dump();
    SweepConfig halfCfg = cfg;
    halfCfg.checkpointPath = ckpt;
    halfCfg.stopAfterBlocks = (ref.distinct.size() / cfg.blockSize) / 2;
    ShardOutcome half = sweep_simulability(p, v, halfCfg);
    SweepConfig resumeCfg = cfg;
    resumeCfg.checkpointPath = ckpt;
    ShardOutcome resumed = sweep_simulability(p, v, resumeCfg);
    std::string resumedJson =
        sweep_report_to_json(merge_shards(en.space(), {resumed})).dump();
    c.require("interrupted+resumed sweep report is byte-identical",
              !half.complete && resumed.complete && resumedJson == refJson);
    std::filesystem::remove(ckpt);
}

}  // namespace

int main(int argc, char** argv) {
    std::string fixturesPath = "data/fixtures.json";
    for (int i = 1; i + 1 < argc; ++i)
        if (std::strcmp(argv[i], "--fixtures") == 0) fixturesPath = argv[i + 1];
    {
        std::ifstream in(fixturesPath);
        if (!in) {
            std::cerr << "cannot open fixtures file: " << fixturesPath << '\n';
            return 2;
        }
        in >> gFixtures;
    }

    run(1, "CHSH CCP classical optimum and additive quantum score", 1.0, c1_chsh);
    run(2, "CGLMP3 functional bound, realization and noise threshold", 10.0,
        c2_cglmp_functional);
    run(3, "CGLMP3 CCP classical optimum (sweep, brute force, reference strategy)",
        60.0, c3_cglmp_classical);
    run(4, "CGLMP3 classical polytope vertex count", 300.0, c4_cglmp_polytope);
    run(5, "CGLMP3 visibility LP and additive crossing", 300.0, c5_cglmp_visibility);
    run(6, "CGLMP4 classical optimum via greedy encoder sweep", 120.0, c6_cglmp4);
    run(7, "hexagon realization value and visibility 4/5", 60.0, c7_hexagon);
    run(8, "candidate behavior: weak violation without CHSH violation", 1.0,
        c8_candidate);
    run(9, "strategy sweep: sampled simulability and full dedup count", 1800.0,
        c9_sweep);
    run(10, "property suites: score identity, no-signaling, LP residual, sharding",
        0.0, c10_properties);

    std::cout << (gFailures == 0 ? "ACCEPTANCE PASSED"
                                 : "ACCEPTANCE FAILED (" + std::to_string(gFailures) +
                                       " criterion(s))")
              << '\n';
    return gFailures == 0 ? 0 : 1;
}
