#include "bellccp/functionals.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace bellccp {

namespace {

constexpr double kNoSignalingAssertTol = 1e-8;
constexpr double kEnumerationGuard = 1e8;

std::size_t product_of(const std::vector<int>& cards) {
    std::size_t n = 1;
    for (int c : cards) n *= static_cast<std::size_t>(c);
    return n;
}

int mod(int v, int d) { return ((v % d) + d) % d; }

// Odometer increment over per-position cardinalities; index 0 is the most
// significant digit so iteration order is lexicographic.
bool advance(std::vector<int>& digits, int card) {
    for (std::size_t i = digits.size(); i-- > 0;) {
        if (++digits[i] < card) return true;
        digits[i] = 0;
    }
    return false;
}

}  // namespace

MultiBehavior::MultiBehavior(std::vector<int> settingCards,
                             std::vector<int> outcomeCards,
                             std::vector<double> probs)
    : settingCards_(std::move(settingCards)),
      outcomeCards_(std::move(outcomeCards)),
      settingSpace_(product_of(settingCards_)),
      outcomeSpace_(product_of(outcomeCards_)),
      probs_(std::move(probs)) {
    if (settingCards_.empty() || settingCards_.size() != outcomeCards_.size())
        throw std::invalid_argument("multibehavior: party cardinality mismatch");
    for (int c : settingCards_)
        if (c < 1) throw std::invalid_argument("multibehavior: bad setting cardinality");
    for (int c : outcomeCards_)
        if (c < 1) throw std::invalid_argument("multibehavior: bad outcome cardinality");
    if (probs_.size() != settingSpace_ * outcomeSpace_)
        throw std::invalid_argument("multibehavior: table size mismatch");
    for (std::size_t s = 0; s < settingSpace_; ++s) {
        double sum = 0;
        for (std::size_t o = 0; o < outcomeSpace_; ++o) sum += p(s, o);
        if (std::abs(sum - 1.0) > 1e-10)
            throw std::invalid_argument("multibehavior: not normalized");
    }
}

MultiBehavior MultiBehavior::from_bipartite(const Behavior& p) {
    std::vector<double> probs(static_cast<std::size_t>(p.partyACard()) * p.partyBCard() *
                              p.outA() * p.outB());
    std::size_t i = 0;
    for (int x = 0; x < p.partyACard(); ++x)
        for (int y = 0; y < p.partyBCard(); ++y)
            for (int a = 0; a < p.outA(); ++a)
                for (int b = 0; b < p.outB(); ++b) probs[i++] = p.p(a, b, x, y);
    return MultiBehavior({p.partyACard(), p.partyBCard()}, {p.outA(), p.outB()},
                         std::move(probs));
}

MultiBehavior MultiBehavior::uniform(std::vector<int> settingCards,
                                     std::vector<int> outcomeCards) {
    std::size_t s = product_of(settingCards), o = product_of(outcomeCards);
    std::vector<double> probs(s * o, 1.0 / static_cast<double>(o));
    return MultiBehavior(std::move(settingCards), std::move(outcomeCards),
                         std::move(probs));
}

BellFunctional::BellFunctional(int partyACard, int partyBCard, int outA, int outB,
                               std::vector<double> coeffs, double constant,
                               double lhvBound, std::vector<double> margA,
                               std::vector<double> margB)
    : xCard_(partyACard), yCard_(partyBCard), aCard_(outA), bCard_(outB),
      coeffs_(std::move(coeffs)), constant_(constant), lhvBound_(lhvBound),
      margA_(std::move(margA)), margB_(std::move(margB)) {
    if (xCard_ < 1 || yCard_ < 1 || aCard_ < 1 || bCard_ < 1)
        throw std::invalid_argument("functional: bad cardinalities");
    if (coeffs_.size() !=
        static_cast<std::size_t>(aCard_) * bCard_ * xCard_ * yCard_)
        throw std::invalid_argument("functional: coefficient table size mismatch");
    if (!margA_.empty() && margA_.size() != static_cast<std::size_t>(xCard_))
        throw std::invalid_argument("functional: marginal A size mismatch");
    if (!margB_.empty() && margB_.size() != static_cast<std::size_t>(yCard_))
        throw std::invalid_argument("functional: marginal B size mismatch");
}

CorrelationFunctional::CorrelationFunctional(int parties, int outcomeModulus,
                                             std::vector<int> settingCards,
                                             std::vector<CorrelationTerm> terms,
                                             double lhvBound)
    : parties_(parties), d_(outcomeModulus), settingCards_(std::move(settingCards)),
      terms_(std::move(terms)), lhvBound_(lhvBound) {
    if (parties_ < 1 || d_ < 2)
        throw std::invalid_argument("correlation functional: bad dimensions");
    if (settingCards_.size() != static_cast<std::size_t>(parties_))
        throw std::invalid_argument("correlation functional: setting cards mismatch");
    for (const auto& term : terms_) {
        if (term.settings.size() != static_cast<std::size_t>(parties_))
            throw std::invalid_argument("correlation term: wrong party count");
        for (int i = 0; i < parties_; ++i)
            if (term.settings[i] < 0 || term.settings[i] >= settingCards_[i])
                throw std::invalid_argument("correlation term: setting out of range");
        if (term.f < 0 || term.f >= d_)
            throw std::invalid_argument("correlation term: target out of range");
    }
}

double evaluate(const BellFunctional& f, const Behavior& p) {
    if (f.partyACard() != p.partyACard() || f.partyBCard() != p.partyBCard() ||
        f.outA() != p.outA() || f.outB() != p.outB())
        throw std::invalid_argument("evaluate: dimension mismatch");
    if (f.has_marginals() && p.no_signaling_defect() > kNoSignalingAssertTol)
        throw std::invalid_argument(
            "evaluate: marginal-expanded functional needs a no-signaling behavior");
    double val = f.constant();
    for (int a = 0; a < f.outA(); ++a)
        for (int b = 0; b < f.outB(); ++b)
            for (int x = 0; x < f.partyACard(); ++x)
                for (int y = 0; y < f.partyBCard(); ++y)
                    val += f.coeff(a, b, x, y) * p.p(a, b, x, y);
    return val;
}

double evaluate_correlation(const CorrelationFunctional& f, const MultiBehavior& p) {
    if (p.parties() != f.parties())
        throw std::invalid_argument("evaluate_correlation: party count mismatch");
    for (int i = 0; i < f.parties(); ++i) {
        if (p.settingCards()[i] != f.settingCards()[i])
            throw std::invalid_argument("evaluate_correlation: setting cards mismatch");
        if (p.outcomeCards()[i] != f.modulus())
            throw std::invalid_argument("evaluate_correlation: outcomes must equal modulus");
    }
    const int n = f.parties(), d = f.modulus();
    double val = 0;
    for (const auto& term : f.terms()) {
        std::size_t sIdx = 0;
        for (int i = 0; i < n; ++i)
            sIdx = sIdx * p.settingCards()[i] + term.settings[i];
        double hit = 0;
        std::vector<int> o(n, 0);
        do {
            int s = 0;
            for (int v : o) s += v;
            if (s % d == term.f) {
                std::size_t oIdx = 0;
                for (int v : o) oIdx = oIdx * d + v;
                hit += p.p(sIdx, oIdx);
            }
        } while (advance(o, d));
        val += term.t * hit;
    }
    return val;
}

LhvResult lhv_bound(const BellFunctional& f) {
    double total = std::pow(static_cast<double>(f.outA()), f.partyACard()) *
                   std::pow(static_cast<double>(f.outB()), f.partyBCard());
    if (total > kEnumerationGuard)
        throw std::runtime_error("lhv_bound: strategy space too large to enumerate");
    LhvResult best;
    bool first = true;
    std::vector<int> ax(f.partyACard(), 0);
    do {
        std::vector<int> by(f.partyBCard(), 0);
        do {
            double val = f.constant();
            for (int x = 0; x < f.partyACard(); ++x)
                for (int y = 0; y < f.partyBCard(); ++y)
                    val += f.coeff(ax[x], by[y], x, y);
            if (first || val > best.value) {
                best.value = val;
                best.assignments = {ax, by};
                first = false;
            }
        } while (advance(by, f.outB()));
    } while (advance(ax, f.outA()));
    return best;
}

LhvResult lhv_bound(const CorrelationFunctional& f) {
    const int n = f.parties(), d = f.modulus();
    double total = 1;
    for (int i = 0; i < n; ++i)
        total *= std::pow(static_cast<double>(d), f.settingCards()[i]);
    if (total > kEnumerationGuard)
        throw std::runtime_error("lhv_bound: strategy space too large to enumerate");

    // One concatenated digit string covering every party's response table.
    std::vector<int> offsets(n);
    int len = 0;
    for (int i = 0; i < n; ++i) {
        offsets[i] = len;
        len += f.settingCards()[i];
    }
    std::vector<int> digits(len, 0);
    LhvResult best;
    bool first = true;
    do {
        double val = 0;
        for (const auto& term : f.terms()) {
            int s = 0;
            for (int i = 0; i < n; ++i) s += digits[offsets[i] + term.settings[i]];
            if (s % d == term.f) val += term.t;
        }
        if (first || val > best.value) {
            best.value = val;
            best.assignments.assign(n, {});
            for (int i = 0; i < n; ++i)
                best.assignments[i].assign(digits.begin() + offsets[i],
                                           digits.begin() + offsets[i] +
                                               f.settingCards()[i]);
            first = false;
        }
    } while (advance(digits, d));
    return best;
}

BellFunctional cglmp3_functional() {
    const int xc = 2, yc = 2, ac = 3, bc = 3;
    std::vector<double> c(static_cast<std::size_t>(ac) * bc * xc * yc, 0.0);
    auto at = [&](int a, int b, int x, int y) -> double& {
        return c[((static_cast<std::size_t>(a) * bc + b) * xc + x) * yc + y];
    };
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
            int f1 = mod(-x * y, 3);
            int f2 = mod(-x * y + ((x + y) % 2 == 0 ? 1 : -1), 3);
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b) {
                    int s = (a + b) % 3;
                    if (s == f1) at(a, b, x, y) += 0.25;
                    if (s == f2) at(a, b, x, y) -= 0.25;
                }
        }
    return BellFunctional(xc, yc, ac, bc, std::move(c), 0.0, 0.5);
}

CorrelationFunctional cglmp3_correlation() {
    std::vector<CorrelationTerm> terms;
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
            int sign = (x + y) % 2 == 0 ? 1 : -1;
            terms.push_back({{x, y}, 1, 0.25, mod(-x * y, 3)});
            terms.push_back({{x, y}, 2, -0.25, mod(-x * y + sign, 3)});
        }
    return CorrelationFunctional(2, 3, {2, 2}, std::move(terms), 0.5);
}

CorrelationFunctional cglmp4_functional() {
    std::vector<CorrelationTerm> terms;
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
            int sign = (x + y) % 2 == 0 ? 1 : -1;
            terms.push_back({{x, y}, 1, 0.25, mod(-x * y, 4)});
            terms.push_back({{x, y}, 2, -0.25, mod(-x * y + sign, 4)});
            terms.push_back({{x, y}, 3, 1.0 / 12.0, mod(-x * y - sign, 4)});
            terms.push_back({{x, y}, 4, -1.0 / 12.0, mod(-x * y + 2 * sign, 4)});
        }
    return CorrelationFunctional(2, 4, {2, 2}, std::move(terms), 0.5);
}

BellFunctional i3322_functional() {
    const int xc = 3, yc = 3, ac = 2, bc = 2;
    static const int T[3][3] = {{1, 1, 1}, {1, 1, -1}, {1, -1, 0}};
    std::vector<double> margA = {-1, 0, 0};
    std::vector<double> margB = {-2, -1, 0};
    std::vector<double> c(static_cast<std::size_t>(ac) * bc * xc * yc, 0.0);
    auto at = [&](int a, int b, int x, int y) -> double& {
        return c[((static_cast<std::size_t>(a) * bc + b) * xc + x) * yc + y];
    };
    for (int x = 0; x < 3; ++x)
        for (int y = 0; y < 3; ++y) at(0, 0, x, y) += T[x][y];
    // Marginals folded at reference settings y0 = 0 and x0 = 0.
    for (int x = 0; x < 3; ++x)
        for (int b = 0; b < 2; ++b) at(0, b, x, 0) += margA[x];
    for (int y = 0; y < 3; ++y)
        for (int a = 0; a < 2; ++a) at(a, 0, 0, y) += margB[y];
    return BellFunctional(xc, yc, ac, bc, std::move(c), 0.0, 0.0, std::move(margA),
                          std::move(margB));
}

CorrelationFunctional chsh_functional() {
    std::vector<CorrelationTerm> terms;
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) terms.push_back({{x, y}, 1, 0.25, (x * y) % 2});
    return CorrelationFunctional(2, 2, {2, 2}, std::move(terms), 0.75);
}

}  // namespace bellccp
