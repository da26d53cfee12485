// Bell functionals: general linear form with optional marginal terms,
// correlation (full-correlation) form, LHV bounds by enumeration, and the
// named inequalities used throughout.

#pragma once

#include <vector>

#include "bellccp/quantum.hpp"

namespace bellccp {

// N-party conditional probability table p(o_1..o_N | x_1..x_N).
// Party 0 is the slowest-varying index on both axes.
class MultiBehavior {
public:
    MultiBehavior(std::vector<int> settingCards, std::vector<int> outcomeCards,
                  std::vector<double> probs);

    static MultiBehavior from_bipartite(const Behavior& p);
    static MultiBehavior uniform(std::vector<int> settingCards,
                                 std::vector<int> outcomeCards);

    int parties() const { return static_cast<int>(settingCards_.size()); }
    const std::vector<int>& settingCards() const { return settingCards_; }
    const std::vector<int>& outcomeCards() const { return outcomeCards_; }
    std::size_t settingSpace() const { return settingSpace_; }
    std::size_t outcomeSpace() const { return outcomeSpace_; }

    double p(std::size_t settingIndex, std::size_t outcomeIndex) const {
        return probs_[settingIndex * outcomeSpace_ + outcomeIndex];
    }
    const std::vector<double>& raw() const { return probs_; }

private:
    std::vector<int> settingCards_, outcomeCards_;
    std::size_t settingSpace_, outcomeSpace_;
    std::vector<double> probs_;
};

// constant + sum_{a,b,x,y} c[a][b][x][y] p(a,b|x,y), with an LHV bound.
// Marginal terms (when present) are pre-folded into the joint coefficients
// at a reference setting; evaluation then requires no-signaling inputs.
class BellFunctional {
public:
    BellFunctional(int partyACard, int partyBCard, int outA, int outB,
                   std::vector<double> coeffs, double constant, double lhvBound,
                   std::vector<double> margA = {}, std::vector<double> margB = {});

    int partyACard() const { return xCard_; }
    int partyBCard() const { return yCard_; }
    int outA() const { return aCard_; }
    int outB() const { return bCard_; }
    double constant() const { return constant_; }
    double lhv_bound_value() const { return lhvBound_; }
    bool has_marginals() const { return !margA_.empty() || !margB_.empty(); }
    const std::vector<double>& marginalCoeffsA() const { return margA_; }
    const std::vector<double>& marginalCoeffsB() const { return margB_; }
    const std::vector<double>& coeffs() const { return coeffs_; }

    double coeff(int a, int b, int x, int y) const {
        return coeffs_[((static_cast<std::size_t>(a) * bCard_ + b) * xCard_ + x) * yCard_ + y];
    }

private:
    int xCard_, yCard_, aCard_, bCard_;
    std::vector<double> coeffs_;  // [a][b][x][y]
    double constant_;
    double lhvBound_;
    std::vector<double> margA_, margB_;  // informational: pre-fold inputs
};

// sum over terms of t * P_{x}(sum_i o_i = f mod d).
struct CorrelationTerm {
    std::vector<int> settings;  // one entry per party
    int r = 0;                  // grouping index, informational
    double t = 0.0;
    int f = 0;                  // target residue in [d]
};

class CorrelationFunctional {
public:
    CorrelationFunctional(int parties, int outcomeModulus,
                          std::vector<int> settingCards,
                          std::vector<CorrelationTerm> terms, double lhvBound);

    int parties() const { return parties_; }
    int modulus() const { return d_; }
    const std::vector<int>& settingCards() const { return settingCards_; }
    const std::vector<CorrelationTerm>& terms() const { return terms_; }
    double lhv_bound_value() const { return lhvBound_; }

private:
    int parties_, d_;
    std::vector<int> settingCards_;
    std::vector<CorrelationTerm> terms_;
    double lhvBound_;
};

double evaluate(const BellFunctional& f, const Behavior& p);
double evaluate_correlation(const CorrelationFunctional& f, const MultiBehavior& p);

struct LhvResult {
    double value = 0.0;
    // Deterministic outcome assignment per party, per setting; the first
    // maximizer in lexicographic order over the concatenated assignments.
    std::vector<std::vector<int>> assignments;
};

LhvResult lhv_bound(const BellFunctional& f);
LhvResult lhv_bound(const CorrelationFunctional& f);

// Named inequalities. LHV bounds: 1/2, 1/2, 0, 3/4.
BellFunctional cglmp3_functional();
CorrelationFunctional cglmp3_correlation();
CorrelationFunctional cglmp4_functional();
BellFunctional i3322_functional();
CorrelationFunctional chsh_functional();

}  // namespace bellccp
