// Communication complexity tasks: scenario model, exact optimal classical
// scores by encoder sweep (greedy decoder) and by full double enumeration,
// the correlation-functional-to-task compiler, and entanglement-assisted
// behavior construction.

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "bellccp/functionals.hpp"
#include "bellccp/quantum.hpp"

namespace bellccp {

// Score coefficients t[g][X][Y] over a (N_A, N_B, M, G) scenario.
// The sender's input may carry a factored structure X = x0 + x0Card * x.
class CCPTask {
public:
    CCPTask(int senderInputs, int receiverInputs, int messageSize, int guessSize,
            std::vector<double> coeffs);

    void set_factored_input(int x0Card, int xCard);

    int senderInputs() const { return nA_; }
    int receiverInputs() const { return nB_; }
    int messageSize() const { return m_; }
    int guessSize() const { return g_; }
    bool factored() const { return x0Card_ > 0; }
    int x0Card() const { return x0Card_; }
    int xCard() const { return xCard_; }

    double t(int g, int X, int Y) const {
        return coeffs_[(static_cast<std::size_t>(g) * nA_ + X) * nB_ + Y];
    }
    const std::vector<double>& coeffs() const { return coeffs_; }

private:
    int nA_, nB_, m_, g_;
    int x0Card_ = 0, xCard_ = 0;
    std::vector<double> coeffs_;  // [g][X][Y]
};

// Total encoder/decoder tables. Classical strategies map X directly;
// bell-assisted strategies take the Bell outcome as an extra argument.
//   classical:     encoder[X] = m,                 decoder[m + M*Y] = g
//   bell-assisted: encoder[a + outA*(x0 + x0Card*x)] = m,
//                  decoder[m + M*(b + outB*y)] = g
struct DeterministicStrategy {
    enum class Kind { Classical, BellAssisted };

    Kind kind = Kind::Classical;
    int messageSize = 0;
    int guessSize = 0;
    std::vector<int> encoder;
    std::vector<int> decoder;
    // Bell-assisted dimensions (zero for classical strategies).
    int outA = 0, x0Card = 0, xCard = 0;
    int outB = 0, yCard = 0;

    void validate() const;
};

// p(g | X, Y), normalized per input pair.
class CCPBehavior {
public:
    CCPBehavior(int senderInputs, int receiverInputs, int guessSize,
                std::vector<double> probs);

    static CCPBehavior uniform(int senderInputs, int receiverInputs, int guessSize);

    int senderInputs() const { return nA_; }
    int receiverInputs() const { return nB_; }
    int guessSize() const { return g_; }

    double p(int g, int X, int Y) const {
        return probs_[(static_cast<std::size_t>(X) * nB_ + Y) * g_ + g];
    }
    const std::vector<double>& raw() const { return probs_; }

private:
    int nA_, nB_, g_;
    std::vector<double> probs_;  // [X][Y][g]
};

double score(const CCPTask& task, const CCPBehavior& p);

// Deterministic behavior of a classical strategy.
CCPBehavior classical_behavior(const CCPTask& task, const DeterministicStrategy& s);
double score_strategy(const CCPTask& task, const DeterministicStrategy& s);

struct ClassicalOptimum {
    double value = 0.0;
    DeterministicStrategy strategy;
};

// Exact maximum over all deterministic (E, D): sweeps encoders and builds the
// optimal decoder greedily per (m, Y) cell. Guard: M^{N_A} <= 1e8.
ClassicalOptimum optimal_classical_score(const CCPTask& task);

// Independent oracle: full enumeration of encoder/decoder pairs.
// Guard: M^{N_A} * G^{M*N_B} <= 1e8.
double brute_force_classical_score(const CCPTask& task);

// Eq.-(6)-style compilation of a two-party correlation functional into a CCP
// with factored sender input (x0, x) and coefficients t/d on g = f + x0.
CCPTask bell_to_ccp(const CorrelationFunctional& f);

// m = (a + x0) mod d, g = (m + b) mod d; the encoder ignores x.
DeterministicStrategy additive_strategy(int d, int settingsA, int settingsB);

// Known non-additive strategies attaining the classical optimum 2/3 of the
// three- and four-outcome tasks. Both leak the Bell setting through m.
DeterministicStrategy cglmp3_reference_strategy();
DeterministicStrategy cglmp4_reference_strategy();

// p(g|x0,x,y) = sum_{a,b} p(a,b|x,y) [g = D(E(a,x0,x), b, y)]
CCPBehavior quantum_ccp_behavior(const Behavior& p, const DeterministicStrategy& s);

// Score of the compiled N-party task under the additive protocol
// (m_i = o_i + x0_i, g = o_N + sum m_i), computed the long way over the
// full input space. Equals evaluate_correlation(f, p) identically.
double additive_multiparty_score(const CorrelationFunctional& f,
                                 const MultiBehavior& p);

}  // namespace bellccp
