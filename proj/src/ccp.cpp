#include "bellccp/ccp.hpp"

#include <cmath>
#include <stdexcept>

namespace bellccp {

namespace {

constexpr double kSweepGuard = 1e8;
constexpr double kMultipartyGuard = 1e7;

bool advance(std::vector<int>& digits, int card) {
    for (std::size_t i = digits.size(); i-- > 0;) {
        if (++digits[i] < card) return true;
        digits[i] = 0;
    }
    return false;
}

// Per-encoder cell sums: qsum[m][Y][g] = sum_{X: E(X)=m} t[g][X][Y].
// The score of any decoder on this encoder is additive over (m, Y) cells;
// accumulation order is fixed so that both enumerators produce bitwise
// identical scores for identical strategies.
struct CellSums {
    int m, nB, g;
    std::vector<double> q;

    CellSums(int messageSize, int receiverInputs, int guessSize)
        : m(messageSize), nB(receiverInputs), g(guessSize),
          q(static_cast<std::size_t>(m) * nB * g) {}

    double& at(int mm, int Y, int gg) {
        return q[(static_cast<std::size_t>(mm) * nB + Y) * g + gg];
    }
    double at(int mm, int Y, int gg) const {
        return q[(static_cast<std::size_t>(mm) * nB + Y) * g + gg];
    }

    void rebuild(const CCPTask& task, const std::vector<int>& encoder) {
        std::fill(q.begin(), q.end(), 0.0);
        for (int X = 0; X < task.senderInputs(); ++X)
            for (int Y = 0; Y < nB; ++Y)
                for (int gg = 0; gg < g; ++gg)
                    at(encoder[X], Y, gg) += task.t(gg, X, Y);
    }

    double decoder_score(const std::vector<int>& decoder) const {
        double s = 0;
        for (int mm = 0; mm < m; ++mm)
            for (int Y = 0; Y < nB; ++Y) s += at(mm, Y, decoder[mm + m * Y]);
        return s;
    }

    // Optimal decoder cellwise; argmax ties resolve to the smallest g.
    std::vector<int> greedy_decoder() const {
        std::vector<int> dec(static_cast<std::size_t>(m) * nB, 0);
        for (int mm = 0; mm < m; ++mm)
            for (int Y = 0; Y < nB; ++Y) {
                int bestG = 0;
                double bestV = at(mm, Y, 0);
                for (int gg = 1; gg < g; ++gg)
                    if (at(mm, Y, gg) > bestV) {
                        bestV = at(mm, Y, gg);
                        bestG = gg;
                    }
                dec[mm + m * Y] = bestG;
            }
        return dec;
    }
};

}  // namespace

CCPTask::CCPTask(int senderInputs, int receiverInputs, int messageSize,
                 int guessSize, std::vector<double> coeffs)
    : nA_(senderInputs), nB_(receiverInputs), m_(messageSize), g_(guessSize),
      coeffs_(std::move(coeffs)) {
    if (nA_ < 1 || nB_ < 1 || m_ < 1 || g_ < 1)
        throw std::invalid_argument("task: bad cardinalities");
    if (m_ >= nA_)
        throw std::invalid_argument("task: message alphabet must be smaller than input alphabet");
    if (coeffs_.size() != static_cast<std::size_t>(g_) * nA_ * nB_)
        throw std::invalid_argument("task: coefficient table size mismatch");
}

void CCPTask::set_factored_input(int x0Card, int xCard) {
    if (x0Card < 1 || xCard < 1 || x0Card * xCard != nA_)
        throw std::invalid_argument("task: factored input does not match sender alphabet");
    x0Card_ = x0Card;
    xCard_ = xCard;
}

void DeterministicStrategy::validate() const {
    if (messageSize < 1 || guessSize < 1)
        throw std::invalid_argument("strategy: bad alphabet sizes");
    if (encoder.empty() || decoder.empty())
        throw std::invalid_argument("strategy: empty tables");
    if (kind == Kind::Classical) {
        if (decoder.size() % static_cast<std::size_t>(messageSize) != 0)
            throw std::invalid_argument("strategy: decoder table size mismatch");
    } else {
        if (outA < 1 || x0Card < 1 || xCard < 1 || outB < 1 || yCard < 1)
            throw std::invalid_argument("strategy: missing bell-assisted dimensions");
        if (encoder.size() != static_cast<std::size_t>(outA) * x0Card * xCard ||
            decoder.size() != static_cast<std::size_t>(messageSize) * outB * yCard)
            throw std::invalid_argument("strategy: table size mismatch");
    }
    for (int v : encoder)
        if (v < 0 || v >= messageSize)
            throw std::invalid_argument("strategy: encoder value out of range");
    for (int v : decoder)
        if (v < 0 || v >= guessSize)
            throw std::invalid_argument("strategy: decoder value out of range");
}

CCPBehavior::CCPBehavior(int senderInputs, int receiverInputs, int guessSize,
                         std::vector<double> probs)
    : nA_(senderInputs), nB_(receiverInputs), g_(guessSize),
      probs_(std::move(probs)) {
    if (nA_ < 1 || nB_ < 1 || g_ < 1)
        throw std::invalid_argument("ccp behavior: bad cardinalities");
    if (probs_.size() != static_cast<std::size_t>(nA_) * nB_ * g_)
        throw std::invalid_argument("ccp behavior: table size mismatch");
    for (double v : probs_)
        if (v < -1e-12) throw std::invalid_argument("ccp behavior: negative probability");
    for (int X = 0; X < nA_; ++X)
        for (int Y = 0; Y < nB_; ++Y) {
            double s = 0;
            for (int gg = 0; gg < g_; ++gg) s += p(gg, X, Y);
            if (std::abs(s - 1.0) > 1e-10)
                throw std::invalid_argument("ccp behavior: not normalized");
        }
}

CCPBehavior CCPBehavior::uniform(int senderInputs, int receiverInputs, int guessSize) {
    std::vector<double> probs(
        static_cast<std::size_t>(senderInputs) * receiverInputs * guessSize,
        1.0 / guessSize);
    return CCPBehavior(senderInputs, receiverInputs, guessSize, std::move(probs));
}

double score(const CCPTask& task, const CCPBehavior& p) {
    if (task.senderInputs() != p.senderInputs() ||
        task.receiverInputs() != p.receiverInputs() ||
        task.guessSize() != p.guessSize())
        throw std::invalid_argument("score: dimension mismatch");
    double s = 0;
    for (int g = 0; g < task.guessSize(); ++g)
        for (int X = 0; X < task.senderInputs(); ++X)
            for (int Y = 0; Y < task.receiverInputs(); ++Y)
                s += task.t(g, X, Y) * p.p(g, X, Y);
    return s;
}

CCPBehavior classical_behavior(const CCPTask& task, const DeterministicStrategy& s) {
    s.validate();
    if (s.kind != DeterministicStrategy::Kind::Classical)
        throw std::invalid_argument("classical_behavior: strategy is not classical");
    if (s.encoder.size() != static_cast<std::size_t>(task.senderInputs()) ||
        s.decoder.size() !=
            static_cast<std::size_t>(task.messageSize()) * task.receiverInputs() ||
        s.messageSize != task.messageSize() || s.guessSize != task.guessSize())
        throw std::invalid_argument("classical_behavior: strategy does not fit task");
    std::vector<double> probs(static_cast<std::size_t>(task.senderInputs()) *
                                  task.receiverInputs() * task.guessSize(),
                              0.0);
    for (int X = 0; X < task.senderInputs(); ++X)
        for (int Y = 0; Y < task.receiverInputs(); ++Y) {
            int g = s.decoder[s.encoder[X] + task.messageSize() * Y];
            probs[(static_cast<std::size_t>(X) * task.receiverInputs() + Y) *
                      task.guessSize() +
                  g] = 1.0;
        }
    return CCPBehavior(task.senderInputs(), task.receiverInputs(), task.guessSize(),
                       std::move(probs));
}

double score_strategy(const CCPTask& task, const DeterministicStrategy& s) {
    return score(task, classical_behavior(task, s));
}

ClassicalOptimum optimal_classical_score(const CCPTask& task) {
    const int nA = task.senderInputs(), nB = task.receiverInputs();
    const int M = task.messageSize(), G = task.guessSize();
    if (std::pow(static_cast<double>(M), nA) > kSweepGuard)
        throw std::runtime_error("optimal_classical_score: encoder space too large");

    CellSums cells(M, nB, G);
    ClassicalOptimum best;
    bool first = true;
    std::vector<int> encoder(nA, 0);
    do {
        cells.rebuild(task, encoder);
        std::vector<int> decoder = cells.greedy_decoder();
        double s = cells.decoder_score(decoder);
        if (first || s > best.value) {
            best.value = s;
            best.strategy = DeterministicStrategy{
                DeterministicStrategy::Kind::Classical, M, G, encoder, decoder};
            first = false;
        }
    } while (advance(encoder, M));
    return best;
}

double brute_force_classical_score(const CCPTask& task) {
    const int nA = task.senderInputs(), nB = task.receiverInputs();
    const int M = task.messageSize(), G = task.guessSize();
    double encoders = std::pow(static_cast<double>(M), nA);
    double decoders = std::pow(static_cast<double>(G), M * nB);
    if (encoders * decoders > kSweepGuard)
        throw std::runtime_error("brute_force_classical_score: strategy space too large");

    CellSums cells(M, nB, G);
    double best = 0;
    bool first = true;
    std::vector<int> encoder(nA, 0);
    do {
        cells.rebuild(task, encoder);
        std::vector<int> decoder(static_cast<std::size_t>(M) * nB, 0);
        do {
            double s = cells.decoder_score(decoder);
            if (first || s > best) {
                best = s;
                first = false;
            }
        } while (advance(decoder, G));
    } while (advance(encoder, M));
    return best;
}

CCPTask bell_to_ccp(const CorrelationFunctional& f) {
    if (f.parties() != 2)
        throw std::invalid_argument("bell_to_ccp: concrete task needs two parties");
    const int d = f.modulus();
    const int sA = f.settingCards()[0], sB = f.settingCards()[1];
    const int nA = d * sA, nB = sB;
    std::vector<double> coeffs(static_cast<std::size_t>(d) * nA * nB, 0.0);
    for (const auto& term : f.terms()) {
        int x = term.settings[0], y = term.settings[1];
        for (int x0 = 0; x0 < d; ++x0) {
            int g = (term.f + x0) % d;
            int X = x0 + d * x;
            coeffs[(static_cast<std::size_t>(g) * nA + X) * nB + y] += term.t / d;
        }
    }
    CCPTask task(nA, nB, d, d, std::move(coeffs));
    task.set_factored_input(d, sA);
    return task;
}

DeterministicStrategy additive_strategy(int d, int settingsA, int settingsB) {
    if (d < 2) throw std::invalid_argument("additive_strategy: modulus must be >= 2");
    if (settingsA < 1 || settingsB < 1)
        throw std::invalid_argument("additive_strategy: bad setting counts");
    DeterministicStrategy s;
    s.kind = DeterministicStrategy::Kind::BellAssisted;
    s.messageSize = d;
    s.guessSize = d;
    s.outA = d;
    s.x0Card = d;
    s.xCard = settingsA;
    s.outB = d;
    s.yCard = settingsB;
    s.encoder.resize(static_cast<std::size_t>(d) * d * settingsA);
    for (int x = 0; x < settingsA; ++x)
        for (int x0 = 0; x0 < d; ++x0)
            for (int a = 0; a < d; ++a)
                s.encoder[a + d * (x0 + d * x)] = (a + x0) % d;  // x is ignored
    s.decoder.resize(static_cast<std::size_t>(d) * d * settingsB);
    for (int y = 0; y < settingsB; ++y)
        for (int b = 0; b < d; ++b)
            for (int m = 0; m < d; ++m)
                s.decoder[m + d * (b + d * y)] = (m + b) % d;
    return s;
}

DeterministicStrategy cglmp3_reference_strategy() {
    // m(x0, x) = delta_{x,0} delta_{x0,2} + 2 delta_{x,1} delta_{x0,1}  (mod 3)
    // g(m, y)  = 2 delta_{y,0} m + delta_{y,1} (m + 1)                  (mod 3)
    DeterministicStrategy s;
    s.kind = DeterministicStrategy::Kind::Classical;
    s.messageSize = 3;
    s.guessSize = 3;
    s.encoder.resize(6);
    for (int x0 = 0; x0 < 3; ++x0)
        for (int x = 0; x < 2; ++x)
            s.encoder[x0 + 3 * x] =
                ((x == 0 && x0 == 2 ? 1 : 0) + (x == 1 && x0 == 1 ? 2 : 0)) % 3;
    s.decoder.resize(6);
    for (int m = 0; m < 3; ++m)
        for (int y = 0; y < 2; ++y) s.decoder[m + 3 * y] = (y == 0 ? 2 * m : m + 1) % 3;
    return s;
}

DeterministicStrategy cglmp4_reference_strategy() {
    // Response tuples over (x, x0) and (y, m), both row-major in the first slot.
    static const int mTuple[8] = {0, 0, 0, 1, 0, 2, 3, 0};
    static const int gTuple[8] = {0, 3, 1, 2, 2, 3, 0, 1};
    DeterministicStrategy s;
    s.kind = DeterministicStrategy::Kind::Classical;
    s.messageSize = 4;
    s.guessSize = 4;
    s.encoder.resize(8);
    for (int x = 0; x < 2; ++x)
        for (int x0 = 0; x0 < 4; ++x0) s.encoder[x0 + 4 * x] = mTuple[4 * x + x0];
    s.decoder.resize(8);
    for (int y = 0; y < 2; ++y)
        for (int m = 0; m < 4; ++m) s.decoder[m + 4 * y] = gTuple[4 * y + m];
    return s;
}

CCPBehavior quantum_ccp_behavior(const Behavior& p, const DeterministicStrategy& s) {
    s.validate();
    if (s.kind != DeterministicStrategy::Kind::BellAssisted)
        throw std::invalid_argument("quantum_ccp_behavior: strategy must be bell-assisted");
    if (s.outA != p.outA() || s.outB != p.outB() || s.xCard != p.partyACard() ||
        s.yCard != p.partyBCard())
        throw std::invalid_argument("quantum_ccp_behavior: behavior does not fit strategy");
    const int nA = s.x0Card * s.xCard, nB = s.yCard, G = s.guessSize;
    std::vector<double> probs(static_cast<std::size_t>(nA) * nB * G, 0.0);
    for (int x0 = 0; x0 < s.x0Card; ++x0)
        for (int x = 0; x < s.xCard; ++x) {
            int X = x0 + s.x0Card * x;
            for (int y = 0; y < nB; ++y)
                for (int a = 0; a < s.outA; ++a) {
                    int m = s.encoder[a + s.outA * (x0 + s.x0Card * x)];
                    for (int b = 0; b < s.outB; ++b) {
                        int g = s.decoder[m + s.messageSize * (b + s.outB * y)];
                        probs[(static_cast<std::size_t>(X) * nB + y) * G + g] +=
                            p.p(a, b, x, y);
                    }
                }
        }
    return CCPBehavior(nA, nB, G, std::move(probs));
}

double additive_multiparty_score(const CorrelationFunctional& f,
                                 const MultiBehavior& p) {
    const int n = f.parties(), d = f.modulus();
    if (n > 4) throw std::runtime_error("additive_multiparty_score: too many parties");
    if (p.parties() != n)
        throw std::invalid_argument("additive_multiparty_score: party count mismatch");
    for (int i = 0; i < n; ++i) {
        if (p.settingCards()[i] != f.settingCards()[i])
            throw std::invalid_argument("additive_multiparty_score: setting cards mismatch");
        if (p.outcomeCards()[i] != d)
            throw std::invalid_argument("additive_multiparty_score: outcomes must equal modulus");
    }
    double x0Space = std::pow(static_cast<double>(d), n - 1);
    if (x0Space * static_cast<double>(p.settingSpace()) > kMultipartyGuard)
        throw std::runtime_error("additive_multiparty_score: input space too large");

    const double weight = 1.0 / x0Space;
    double total = 0;
    std::vector<int> xs(n, 0);
    std::size_t sIdx = 0;
    do {
        // All terms at this setting vector.
        std::vector<const CorrelationTerm*> active;
        for (const auto& term : f.terms())
            if (term.settings == xs) active.push_back(&term);
        if (!active.empty()) {
            std::vector<int> x0(n - 1, 0);
            do {
                int shift = 0;
                for (int v : x0) shift += v;
                // Guess distribution under the additive protocol:
                // g = sum_i o_i + sum_i x0_i (mod d).
                std::vector<double> q(d, 0.0);
                std::vector<int> o(n, 0);
                std::size_t oIdx = 0;
                do {
                    int s = shift;
                    for (int v : o) s += v;
                    q[s % d] += p.p(sIdx, oIdx);
                    ++oIdx;
                } while (advance(o, d));
                for (const auto* term : active)
                    total += weight * term->t * q[(term->f + shift) % d];
            } while (advance(x0, d));
        }
        ++sIdx;
        // Mixed-radix odometer over per-party setting cardinalities.
        bool carried = false;
        for (std::size_t i = xs.size(); i-- > 0;) {
            if (++xs[i] < f.settingCards()[i]) {
                carried = true;
                break;
            }
            xs[i] = 0;
        }
        if (!carried) break;
    } while (true);
    return total;
}

}  // namespace bellccp
