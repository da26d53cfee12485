#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "bellccp/ccp.hpp"
#include "bellccp/quantum.hpp"
#include "bellccp/rng.hpp"

using namespace bellccp;

namespace {

MultiBehavior random_multibehavior(SplitMix64& rng, std::vector<int> settings,
                                   std::vector<int> outcomes) {
    std::size_t s = 1, o = 1;
    for (int c : settings) s *= c;
    for (int c : outcomes) o *= c;
    std::vector<double> probs(s * o);
    for (std::size_t i = 0; i < s; ++i) {
        double tot = 0;
        for (std::size_t k = 0; k < o; ++k) {
            double v = static_cast<double>(rng.next() >> 11) + 1.0;
            probs[i * o + k] = v;
            tot += v;
        }
        for (std::size_t k = 0; k < o; ++k) probs[i * o + k] /= tot;
    }
    return MultiBehavior(std::move(settings), std::move(outcomes), std::move(probs));
}

// Mermin-style three-party correlation functional (d=2, bound 2).
CorrelationFunctional mermin3() {
    std::vector<CorrelationTerm> terms;
    auto add = [&](int x, int y, int z, double sign) {
        terms.push_back({{x, y, z}, 1, sign, 0});
        terms.push_back({{x, y, z}, 1, -sign, 1});
    };
    add(0, 0, 1, 1.0);
    add(0, 1, 0, 1.0);
    add(1, 0, 0, 1.0);
    add(1, 1, 1, -1.0);
    return CorrelationFunctional(3, 2, {2, 2, 2}, std::move(terms), 2.0);
}

}  // namespace

TEST_CASE("chsh task: classical optimum and quantum additive score") {
    CCPTask task = bell_to_ccp(chsh_functional());
    CHECK(task.senderInputs() == 4);
    CHECK(task.receiverInputs() == 2);
    CHECK(task.messageSize() == 2);
    CHECK(task.guessSize() == 2);
    // Intro form: coefficient 1/8 on g = x0 + x*y.
    for (int x0 = 0; x0 < 2; ++x0)
        for (int x = 0; x < 2; ++x)
            for (int y = 0; y < 2; ++y)
                CHECK(task.t((x0 + x * y) % 2, x0 + 2 * x, y) == 0.125);

    ClassicalOptimum best = optimal_classical_score(task);
    CHECK(best.value == 0.75);
    CHECK(brute_force_classical_score(task) == 0.75);
    CHECK(score_strategy(task, best.strategy) == best.value);

    CHECK(score(task, CCPBehavior::uniform(4, 2, 2)) == doctest::Approx(0.5).epsilon(1e-15));

    Behavior chsh = chsh_optimal_realization().behavior();
    CCPBehavior q = quantum_ccp_behavior(chsh, additive_strategy(2, 2, 2));
    CHECK(score(task, q) ==
          doctest::Approx(0.5 + 0.5 / std::sqrt(2.0)).epsilon(1e-9));
}

TEST_CASE("cglmp3 task: exact classical optimum 2/3") {
    CCPTask task = bell_to_ccp(cglmp3_correlation());
    CHECK(task.senderInputs() == 6);
    CHECK(task.messageSize() == 3);
    // Eq.-(8) prefactor 1/12 on the positive targets.
    double expected = 1.0 / 12.0;
    CHECK(task.t(0, 0, 0) == doctest::Approx(expected).epsilon(1e-15));

    ClassicalOptimum best = optimal_classical_score(task);
    CHECK(best.value == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    double brute = brute_force_classical_score(task);
    CHECK(brute == best.value);  // exact agreement between both enumerators

    // Reference optimal strategy: m = delta_{x,0} delta_{x0,2} + 2 delta_{x,1} delta_{x0,1},
    // g = 2 delta_{y,0} m + delta_{y,1} (m + 1)   (mod 3)
    DeterministicStrategy ref = cglmp3_reference_strategy();
    CHECK(ref.encoder == std::vector<int>{0, 0, 1, 0, 2, 0});
    CHECK(ref.decoder == std::vector<int>{0, 2, 1, 1, 2, 0});
    // m = 1, 2 reveal the value of x to the receiver.
    CHECK(score_strategy(task, ref) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("cglmp3 task: additive quantum behavior reproduces the functional value") {
    CCPTask task = bell_to_ccp(cglmp3_correlation());
    Behavior p = cglmp_optimal_realization().behavior();
    CCPBehavior q = quantum_ccp_behavior(p, additive_strategy(3, 2, 2));
    double bq = evaluate_correlation(cglmp3_correlation(),
                                     MultiBehavior::from_bipartite(p));
    CHECK(score(task, q) == doctest::Approx(bq).epsilon(1e-12));
    CHECK(std::abs(score(task, q) - 0.7287) < 1e-3);

    // The additive score scales linearly with visibility and crosses 2/3
    // at v = (2/3) / B_q.
    double crossing = (2.0 / 3.0) / bq;
    CHECK(std::abs(crossing - 0.9149) < 1e-3);
    CCPBehavior qmix =
        quantum_ccp_behavior(mix_with_uniform(p, crossing), additive_strategy(3, 2, 2));
    CHECK(score(task, qmix) == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
}

TEST_CASE("cglmp4 task: greedy encoder sweep reaches 2/3 and the tuple strategy attains it") {
    CCPTask task = bell_to_ccp(cglmp4_functional());
    CHECK(task.senderInputs() == 8);
    CHECK(task.messageSize() == 4);
    // (x,y) = (0,0): +1/16 at g=0, -1/16 at g=1, +1/48 at g=3, -1/48 at g=2.
    CHECK(task.t(0, 0, 0) == doctest::Approx(1.0 / 16.0).epsilon(1e-15));
    CHECK(task.t(1, 0, 0) == doctest::Approx(-1.0 / 16.0).epsilon(1e-15));
    CHECK(task.t(2, 0, 0) == doctest::Approx(-1.0 / 48.0).epsilon(1e-15));
    CHECK(task.t(3, 0, 0) == doctest::Approx(1.0 / 48.0).epsilon(1e-15));

    ClassicalOptimum best = optimal_classical_score(task);
    CHECK(best.value == doctest::Approx(2.0 / 3.0).epsilon(1e-12));

    // Tuple strategy m = [0,0,0,1,0,2,3,0], g = [0,3,1,2,2,3,0,1] over (x, x0)
    // and (y, m) pairs; stored flat as X = x0 + 4x and m + 4y.
    DeterministicStrategy ref = cglmp4_reference_strategy();
    CHECK(ref.encoder == std::vector<int>{0, 0, 0, 1, 0, 2, 3, 0});
    CHECK(ref.decoder == std::vector<int>{0, 3, 1, 2, 2, 3, 0, 1});
    CHECK(score_strategy(task, ref) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("brute force matches the greedy sweep on small random tasks") {
    SplitMix64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        int nA = 4, nB = 2, M = 2, G = 3;
        std::vector<double> coeffs(static_cast<std::size_t>(G) * nA * nB);
        for (auto& c : coeffs)
            c = (static_cast<double>(rng.next() >> 11) * 0x1.0p-53 - 0.3);
        CCPTask task(nA, nB, M, G, std::move(coeffs));
        CHECK(optimal_classical_score(task).value == brute_force_classical_score(task));
    }
}

TEST_CASE("optimal classical score dominates random classical strategies") {
    CCPTask task = bell_to_ccp(cglmp3_correlation());
    double best = optimal_classical_score(task).value;
    SplitMix64 rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        DeterministicStrategy s;
        s.kind = DeterministicStrategy::Kind::Classical;
        s.messageSize = 3;
        s.guessSize = 3;
        s.encoder.resize(6);
        s.decoder.resize(6);
        for (auto& v : s.encoder) v = static_cast<int>(rng.below(3));
        for (auto& v : s.decoder) v = static_cast<int>(rng.below(3));
        CHECK(score_strategy(task, s) <= best + 1e-12);
    }
}

TEST_CASE("task with single message and guess has one strategy") {
    // M = G = 1: score is the full coefficient sum over g=0.
    std::vector<double> coeffs = {0.1, 0.2, -0.3, 0.4};
    CCPTask task(2, 2, 1, 1, coeffs);
    double expect = 0.1 + 0.2 - 0.3 + 0.4;
    CHECK(brute_force_classical_score(task) == doctest::Approx(expect).epsilon(1e-15));
    CHECK(optimal_classical_score(task).value ==
          doctest::Approx(expect).epsilon(1e-15));
}

TEST_CASE("additive strategy construction") {
    DeterministicStrategy s = additive_strategy(3, 2, 2);
    s.validate();
    // Encoder ignores the Bell setting x.
    for (int a = 0; a < 3; ++a)
        for (int x0 = 0; x0 < 3; ++x0)
            CHECK(s.encoder[a + 3 * (x0 + 3 * 0)] == s.encoder[a + 3 * (x0 + 3 * 1)]);
    // d=2 reduces to the parity protocol m = a + x0 mod 2.
    DeterministicStrategy s2 = additive_strategy(2, 2, 2);
    for (int a = 0; a < 2; ++a)
        for (int x0 = 0; x0 < 2; ++x0)
            for (int x = 0; x < 2; ++x)
                CHECK(s2.encoder[a + 2 * (x0 + 2 * x)] == (a + x0) % 2);
}

TEST_CASE("quantum_ccp_behavior of a deterministic bell behavior is deterministic") {
    // p(a,b) = delta_{a,0} delta_{b,0} regardless of settings.
    std::vector<double> probs(2 * 2 * 2 * 2, 0.0);
    Behavior p(2, 2, 2, 2, [&] {
        for (int x = 0; x < 2; ++x)
            for (int y = 0; y < 2; ++y)
                probs[((static_cast<std::size_t>(x) * 2 + y) * 2 + 0) * 2 + 0] = 1.0;
        return probs;
    }());
    CCPBehavior q = quantum_ccp_behavior(p, additive_strategy(2, 2, 2));
    // a = b = 0 forces m = x0 and g = x0, with x0 = X mod 2.
    for (int X = 0; X < 4; ++X)
        for (int Y = 0; Y < 2; ++Y)
            for (int g = 0; g < 2; ++g)
                CHECK(q.p(g, X, Y) == (g == X % 2 ? 1.0 : 0.0));
}

TEST_CASE("additive multiparty score equals the functional value") {
    SplitMix64 rng(17);
    // Two-party: the CHSH functional on its optimal behavior.
    Behavior chsh = chsh_optimal_realization().behavior();
    MultiBehavior m2 = MultiBehavior::from_bipartite(chsh);
    double s2 = additive_multiparty_score(chsh_functional(), m2);
    CHECK(std::abs(s2 - 0.854) < 1e-3);
    CHECK(s2 == doctest::Approx(evaluate_correlation(chsh_functional(), m2)).epsilon(1e-14));

    // Three-party Mermin form on random (signaling) behaviors.
    CorrelationFunctional mer = mermin3();
    for (int trial = 0; trial < 100; ++trial) {
        MultiBehavior p = random_multibehavior(rng, {2, 2, 2}, {2, 2, 2});
        double lhs = additive_multiparty_score(mer, p);
        double rhs = evaluate_correlation(mer, p);
        CHECK(std::abs(lhs - rhs) <= 1e-12);
    }

    // Uniform behavior: score equals the functional value at uniform.
    MultiBehavior u = MultiBehavior::uniform({2, 2, 2}, {2, 2, 2});
    CHECK(additive_multiparty_score(mer, u) ==
          doctest::Approx(evaluate_correlation(mer, u)).epsilon(1e-14));
}

TEST_CASE("additive-only classical strategies cannot beat the lhv bound") {
    // Restricted enumeration over outcome assignments o_i(x_i) only.
    CCPTask task = bell_to_ccp(cglmp3_correlation());
    double best = -1e9;
    for (int a0 = 0; a0 < 3; ++a0)
        for (int a1 = 0; a1 < 3; ++a1)
            for (int b0 = 0; b0 < 3; ++b0)
                for (int b1 = 0; b1 < 3; ++b1) {
                    std::vector<double> probs(36, 0.0);
                    int ax[2] = {a0, a1}, by[2] = {b0, b1};
                    for (int x = 0; x < 2; ++x)
                        for (int y = 0; y < 2; ++y)
                            probs[((static_cast<std::size_t>(x) * 2 + y) * 3 + ax[x]) * 3 +
                                  by[y]] = 1.0;
                    Behavior det(2, 2, 3, 3, std::move(probs));
                    CCPBehavior q = quantum_ccp_behavior(det, additive_strategy(3, 2, 2));
                    best = std::max(best, score(task, q));
                }
    CHECK(best == doctest::Approx(cglmp3_correlation().lhv_bound_value()).epsilon(1e-12));
}

TEST_CASE("guards reject oversized enumerations") {
    // 4^16 decoder/encoder pairs exceed the brute-force guard.
    CCPTask task = bell_to_ccp(cglmp4_functional());
    CHECK_THROWS_AS(brute_force_classical_score(task), std::runtime_error);
    // Encoder sweep guard: 2^40 encoders.
    std::vector<double> coeffs(static_cast<std::size_t>(2) * 40 * 1, 0.0);
    CHECK_THROWS_AS(optimal_classical_score(CCPTask(40, 1, 2, 2, coeffs)),
                    std::runtime_error);
}

TEST_CASE("additive multiparty guards") {
    // Five parties are past the supported range.
    CorrelationFunctional five(5, 2, {1, 1, 1, 1, 1},
                               {{{0, 0, 0, 0, 0}, 1, 1.0, 0}}, 1.0);
    MultiBehavior u5 = MultiBehavior::uniform({1, 1, 1, 1, 1}, {2, 2, 2, 2, 2});
    CHECK_THROWS_AS(additive_multiparty_score(five, u5), std::runtime_error);
    // Input space d^{N-1} * prod(settings) above 1e7 is rejected.
    CorrelationFunctional wide(4, 2, {40, 40, 40, 40},
                               {{{0, 0, 0, 0}, 1, 1.0, 0}}, 1.0);
    MultiBehavior u4 = MultiBehavior::uniform({40, 40, 40, 40}, {2, 2, 2, 2});
    CHECK_THROWS_AS(additive_multiparty_score(wide, u4), std::runtime_error);
}

TEST_CASE("task invariant: message alphabet strictly smaller than inputs") {
    std::vector<double> coeffs(2 * 2 * 2, 0.0);
    CHECK_THROWS_AS((CCPTask(2, 2, 2, 2, coeffs)), std::invalid_argument);
}
