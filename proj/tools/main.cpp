// Command-line surface: one reproduction subcommand per headline result,
// plus the configurable strategy sweep.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bellccp/ccp.hpp"
#include "bellccp/functionals.hpp"
#include "bellccp/polytope.hpp"
#include "bellccp/quantum.hpp"
#include "bellccp/serialize.hpp"
#include "bellccp/sweep.hpp"
#include "bellccp/visibility.hpp"

using bellccp::Json;

namespace {

struct CheckResult {
    std::string name;
    double computed = 0.0;
    double expected = 0.0;
    double tolerance = 0.0;
    std::string kind = "abs";  // abs | le | ge
    bool informational = false;
    bool pass = false;
};

struct Fixtures {
    Json root;

    static Fixtures load(const std::string& explicitPath) {
        std::vector<std::string> candidates;
        if (!explicitPath.empty()) candidates.push_back(explicitPath);
        if (const char* env = std::getenv("BELLCCP_FIXTURES")) candidates.push_back(env);
        candidates.push_back("data/fixtures.json");
#ifdef BELLCCP_FIXTURES_DEFAULT
        candidates.push_back(BELLCCP_FIXTURES_DEFAULT);
#endif
        for (const auto& path : candidates) {
            std::ifstream in(path);
            if (!in) continue;
            Fixtures f;
            in >> f.root;
            return f;
        }
        throw std::runtime_error(
            "fixtures file not found; pass --fixtures or set BELLCCP_FIXTURES");
    }

    // Returns (expected, tolerance, kind) for a named check, if specified.
    std::optional<std::tuple<double, double, std::string>> lookup(
        const std::string& target, const std::string& check) const {
        const auto& targets = root.at("targets");
        if (!targets.contains(target)) return std::nullopt;
        for (const auto& entry : targets.at(target)) {
            if (entry.at("name") == check)
                return std::make_tuple(entry.at("expected").get<double>(),
                                       entry.at("tolerance").get<double>(),
                                       entry.value("kind", "abs"));
        }
        return std::nullopt;
    }
};

CheckResult make_check(const Fixtures& fx, const std::string& target,
                       const std::string& name, double computed) {
    CheckResult c;
    c.name = name;
    c.computed = computed;
    auto spec = fx.lookup(target, name);
    if (!spec) {
        c.informational = true;
        c.pass = true;
        return c;
    }
    std::tie(c.expected, c.tolerance, c.kind) = *spec;
    if (c.kind == "le")
        c.pass = computed <= c.expected + c.tolerance;
    else if (c.kind == "ge")
        c.pass = computed >= c.expected - c.tolerance;
    else
        c.pass = std::abs(computed - c.expected) <= c.tolerance;
    return c;
}

Json checks_to_json(const std::vector<CheckResult>& checks) {
    Json arr = Json::array();
    for (const auto& c : checks) {
        Json j{{"name", c.name}, {"computed", c.computed}};
        if (!c.informational) {
            j["expected"] = c.expected;
            j["tolerance"] = c.tolerance;
            j["kind"] = c.kind;
            j["pass"] = c.pass;
        } else {
            j["informational"] = true;
        }
        arr.push_back(std::move(j));
    }
    return arr;
}

std::string checks_to_csv(const std::string& target,
                          const std::vector<CheckResult>& checks) {
    std::ostringstream out;
    out << "target,check,computed,expected,tolerance,kind,status\n";
    for (const auto& c : checks) {
        out << target << ',' << c.name << ',' << std::setprecision(17) << c.computed
            << ',';
        if (c.informational)
            out << ",,,INFO\n";
        else
            out << c.expected << ',' << c.tolerance << ',' << c.kind << ','
                << (c.pass ? "PASS" : "FAIL") << '\n';
    }
    return out.str();
}

void print_text(const std::string& target, const std::vector<CheckResult>& checks) {
    for (const auto& c : checks) {
        if (c.informational) {
            std::cout << "[info] " << target << '/' << c.name << " computed=" << c.computed
                      << '\n';
            continue;
        }
        std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << target << '/' << c.name
                  << " computed=" << std::setprecision(12) << c.computed
                  << " expected=" << c.expected << " tolerance=" << c.tolerance;
        if (c.kind != "abs") std::cout << " (" << c.kind << ")";
        std::cout << '\n';
    }
}

void write_or_print(const std::string& output, const std::string& payload) {
    if (output.empty()) {
        std::cout << payload << '\n';
        return;
    }
    std::ofstream out(output, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + output);
    out << payload;
}

bellccp::Behavior behavior_by_name(const std::string& name) {
    if (name == "candidate") return bellccp::candidate_realization().behavior();
    if (name == "hexagon") return bellccp::hexagon_realization().behavior();
    throw CLI::ValidationError("--behavior", "unknown behavior: " + name);
}

// ---------------------------------------------------------------------------
// reproduce pipelines

std::vector<CheckResult> run_reproduce(const std::string& name, const Fixtures& fx,
                                       unsigned threads, std::uint64_t seed,
                                       std::uint64_t sample) {
    using namespace bellccp;
    std::vector<CheckResult> checks;
    auto add = [&](const std::string& check, double value) {
        checks.push_back(make_check(fx, name, check, value));
    };

    if (name == "chsh-ccp") {
        CCPTask task = bell_to_ccp(chsh_functional());
        add("classical-score", optimal_classical_score(task).value);
        add("brute-force-score", brute_force_classical_score(task));
        Behavior p = chsh_optimal_realization().behavior();
        add("additive-quantum-score",
            score(task, quantum_ccp_behavior(p, additive_strategy(2, 2, 2))));
    } else if (name == "cglmp3-bound") {
        add("lhv-bound", lhv_bound(cglmp3_correlation()).value);
        Behavior p = cglmp_optimal_realization().behavior();
        double bq = evaluate_correlation(cglmp3_correlation(),
                                         MultiBehavior::from_bipartite(p));
        add("realization-value", bq);
        add("violation-threshold", 0.5 / bq);
    } else if (name == "cglmp3-classical") {
        CCPTask task = bell_to_ccp(cglmp3_correlation());
        ClassicalOptimum best = optimal_classical_score(task);
        add("optimal-score", best.value);
        double brute = brute_force_classical_score(task);
        add("sweep-vs-brute-gap", std::abs(best.value - brute));
        add("reference-strategy-score",
            score_strategy(task, cglmp3_reference_strategy()));
    } else if (name == "cglmp3-visibility") {
        VertexSet v = classical_vertices(6, 2, 3, 3);
        add("vertex-count", static_cast<double>(v.size()));
        Behavior p = cglmp_optimal_realization().behavior();
        CCPBehavior target = quantum_ccp_behavior(p, additive_strategy(3, 2, 2));
        VisibilityResult r =
            max_visibility(target, CCPBehavior::uniform(6, 2, 3), v);
        add("visibility", r.vStar);
        add("lp-residual", r.residual);
        double bq = evaluate_correlation(cglmp3_correlation(),
                                         MultiBehavior::from_bipartite(p));
        add("additive-crossing", (2.0 / 3.0) / bq);
    } else if (name == "cglmp4-classical") {
        CCPTask task = bell_to_ccp(cglmp4_functional());
        add("optimal-score", optimal_classical_score(task).value);
        add("tuple-strategy-score",
            score_strategy(task, cglmp4_reference_strategy()));
    } else if (name == "i3322-hexagon") {
        Behavior p = hexagon_realization().behavior();
        add("quantum-value", evaluate(i3322_functional(), p));
        add("lhv-bound", lhv_bound(i3322_functional()).value);
        double atUniform = evaluate(i3322_functional(), mix_with_uniform(p, 0.0));
        add("uniform-value", atUniform);
        // I(p^v) = v I(p) + (1-v) I(uniform) crosses 0 at the mixing threshold.
        add("violation-threshold",
            -atUniform / (evaluate(i3322_functional(), p) - atUniform));
    } else if (name == "i3322-appc-lp") {
        VertexSet v = classical_vertices(6, 3, 2, 2);
        add("vertex-count", static_cast<double>(v.size()));
        Behavior p = hexagon_realization().behavior();
        CCPBehavior target = quantum_ccp_behavior(p, additive_strategy(2, 3, 3));
        VisibilityResult r =
            max_visibility(target, CCPBehavior::uniform(6, 3, 2), v);
        add("visibility", r.vStar);
        add("lp-residual", r.residual);
    } else if (name == "candidate-check") {
        Realization cand = candidate_realization();
        add("i3322-value", evaluate(i3322_functional(), cand.behavior()));
        double m = horodecki_chsh(cand.state);
        add("horodecki", m);
        add("horodecki-below-one", m);
    } else if (name == "i3322-sweep") {
        Behavior p = candidate_realization().behavior();
        VertexSet v = classical_vertices(6, 3, 2, 2);
        SweepConfig cfg;
        cfg.sampleSize = sample;
        cfg.seed = seed;
        cfg.threads = threads;
        ShardOutcome out = sweep_simulability(p, v, cfg);
        add("sampled-min-visibility", out.agg.hasMin ? out.agg.minVStar : 0.0);
        add("sampled-distinct", static_cast<double>(out.distinct.size()));
        add("lp-failures", static_cast<double>(out.agg.failures.size()));
        add("max-lp-residual", out.agg.maxResidual);
    } else {
        throw CLI::ValidationError(
            "name", "unknown reproduction target: " + name +
                        " (expected one of chsh-ccp, cglmp3-bound, cglmp3-classical, "
                        "cglmp3-visibility, cglmp4-classical, i3322-hexagon, "
                        "i3322-appc-lp, candidate-check, i3322-sweep)");
    }
    return checks;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bell-inequality / communication-complexity toolkit"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand

    std::string output, format = "text", fixturesPath;
    unsigned threads = 0;
    std::uint64_t seed = 0;

    app.add_option("--output", output, "Write the report to this file instead of stdout");
    app.add_option("--format", format, "Report format: json, csv or text")
        ->check(CLI::IsMember({"json", "csv", "text"}));
    app.add_option("--threads", threads, "Worker thread cap (0 = hardware)");
    app.add_option("--seed", seed, "Seed for sampled runs");
    app.add_option("--fixtures", fixturesPath,
                   "Expected-values file (default: BELLCCP_FIXTURES or data/fixtures.json)");

    auto* rep = app.add_subcommand("reproduce", "Re-run one named result end to end");
    std::string target;
    std::uint64_t repSample = 10000;
    rep->add_option("name", target, "Result identifier")->required();
    rep->add_option("--sample", repSample, "Sample size for the sweep target");

    auto* sw = app.add_subcommand("sweep", "Strategy sweep with simulability LPs");
    std::string behaviorName = "candidate", shardSpec;
    std::uint64_t swSample = 10000;
    bool full = false, dedupOnly = false, includeAdditive = false;
    double dedupTol = 1e-10;
    sw->add_option("--behavior", behaviorName, "Bell behavior: candidate or hexagon");
    sw->add_option("--sample", swSample, "Sampled mode size (default 10000)");
    sw->add_flag("--full", full, "Exhaustive mode over every strategy (long)");
    sw->add_flag("--dedup-only", dedupOnly, "Enumerate and deduplicate, no LPs");
    sw->add_option("--shard", shardSpec, "Shard specification i/n");
    sw->add_flag("--include-additive", includeAdditive,
                 "Force the additive strategy into the swept set");
    sw->add_option("--tolerance", dedupTol, "Dedup tolerance (default 1e-10)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (rep->parsed()) {
            Fixtures fx = Fixtures::load(fixturesPath);
            auto t0 = std::chrono::steady_clock::now();
            std::vector<CheckResult> checks =
                run_reproduce(target, fx, threads, seed, repSample);
            double dt =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                    .count();
            bool pass = true;
            for (const auto& c : checks) pass = pass && c.pass;

            Json report{{"schema", "bellccp.reproduce-report/1"},
                        {"target", target},
                        {"config", Json{{"threads", threads},
                                        {"seed", seed},
                                        {"sample", repSample},
                                        {"format", format}}},
                        {"checks", checks_to_json(checks)},
                        {"pass", pass},
                        {"runtimeSeconds", dt}};
            if (format == "json")
                write_or_print(output, report.dump(2));
            else if (format == "csv")
                write_or_print(output, checks_to_csv(target, checks));
            else {
                print_text(target, checks);
                std::cout << (pass ? "PASS" : "FAIL") << " (" << dt << " s)\n";
                if (!output.empty()) write_or_print(output, report.dump(2));
            }
            return pass ? 0 : 1;
        }

        // sweep
        using namespace bellccp;
        Behavior p = behavior_by_name(behaviorName);
        SweepConfig cfg;
        cfg.threads = threads;
        cfg.seed = seed;
        cfg.dedupTolerance = dedupTol;
        if (!shardSpec.empty()) {
            auto slash = shardSpec.find('/');
            if (slash == std::string::npos)
                throw CLI::ValidationError("--shard", "expected i/n");
            cfg.shardIndex = std::stoull(shardSpec.substr(0, slash));
            cfg.totalShards = std::stoull(shardSpec.substr(slash + 1));
        }
        if (!full) cfg.sampleSize = swSample;
        if (full && !dedupOnly)
            std::cerr << "warning: --full solves one LP per distinct behavior; "
                         "this is a multi-day run on a single machine\n";
        if (includeAdditive) {
            StrategySpace space = StrategySpace::create(p, 2, 2, 2);
            cfg.forcedStrategies.push_back(
                space.index_of(additive_strategy(2, p.partyACard(), p.partyBCard())));
        }
        if (const char* dir = std::getenv("BELLCCP_CHECKPOINT_DIR")) {
            std::filesystem::create_directories(dir);
            cfg.checkpointPath =
                (std::filesystem::path(dir) /
                 ("sweep-" + behaviorName + "-" + std::to_string(cfg.shardIndex) + "of" +
                  std::to_string(cfg.totalShards) + (full ? "-full" : "-sampled") +
                  ".ckpt"))
                    .string();
            if (std::filesystem::exists(cfg.checkpointPath)) {
                auto prog = checkpoint_progress(cfg.checkpointPath);
                std::cerr << "resuming from " << cfg.checkpointPath << " ("
                          << prog.completedBlocks << '/' << prog.totalBlocks
                          << " blocks done, next block " << prog.firstPendingBlock
                          << ")\n";
            }
        }

        ShardOutcome out;
        if (dedupOnly) {
            out = sweep_enumerate_only(p, cfg);
        } else {
            VertexSet v = classical_vertices(p.partyACard() * 2, p.partyBCard(), 2, 2);
            out = sweep_simulability(p, v, cfg);
        }
        StrategyEnumerator en(p, cfg);
        SweepReport report = merge_shards(en.space(), {out});

        Json j = sweep_report_to_json(report);
        j["config"] = Json{{"behavior", behaviorName},
                           {"mode", dedupOnly ? "dedup-only" : (full ? "full" : "sampled")},
                           {"sample", full ? Json(nullptr) : Json(swSample)},
                           {"seed", seed},
                           {"shard", std::to_string(cfg.shardIndex) + "/" +
                                         std::to_string(cfg.totalShards)},
                           {"threads", threads},
                           {"dedupTolerance", dedupTol},
                           {"includeAdditive", includeAdditive},
                           {"checkpoint", cfg.checkpointPath}};
        if (format == "csv")
            write_or_print(output, sweep_report_to_csv(report));
        else if (format == "json")
            write_or_print(output, j.dump(2));
        else {
            std::cout << "strategies visited: " << report.strategiesVisited
                      << "\ndistinct behaviors: " << report.distinctBehaviors << '\n';
            if (report.hasMin) {
                std::cout << "min v*: " << std::setprecision(12) << report.minVStar
                          << " at strategy " << report.argminMu << " (encoder "
                          << report.argminEncoder << ", decoder " << report.argminDecoder
                          << ")\nmax LP residual: " << report.maxResidual
                          << "\nLP failures: " << report.failures.size() << '\n';
            }
            if (!output.empty()) write_or_print(output, j.dump(2));
        }

        if (dedupOnly) return 0;
        if (report.hasMin && report.minVStar < 1.0 - 1e-6) {
            std::cerr << "classical simulation fails at strategy " << report.argminMu
                      << " (encoder " << report.argminEncoder << ", decoder "
                      << report.argminDecoder << "): v* = " << std::setprecision(12)
                      << report.minVStar << '\n';
            return 1;
        }
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
