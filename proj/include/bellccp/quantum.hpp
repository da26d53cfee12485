// Small-dimension quantum toolkit: density matrices, projective measurement
// sets, Born-rule behaviors and the built-in two-party realizations.

#pragma once

#include <array>
#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace bellccp {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr double kHermTol = 1e-12;
inline constexpr double kTraceTol = 1e-12;
inline constexpr double kPsdTol = 1e-10;
inline constexpr int kMaxDim = 9;

CMatrix kron(const CMatrix& a, const CMatrix& b);
double min_eigenvalue_hermitian(const CMatrix& m);

// Trace-one Hermitian PSD matrix; validated on construction.
class DensityMatrix {
public:
    explicit DensityMatrix(CMatrix entries);
    static DensityMatrix pure(const CVector& state);

    int dim() const { return static_cast<int>(mat_.rows()); }
    const CMatrix& matrix() const { return mat_; }

private:
    CMatrix mat_;
};

// One measurement operator per (setting, outcome); each setting's operators
// are PSD and sum to the identity.
class MeasurementSet {
public:
    MeasurementSet(int settings, int outcomes, std::vector<CMatrix> operators);

    int settings() const { return settings_; }
    int outcomes() const { return outcomes_; }
    int dim() const { return static_cast<int>(ops_.front().rows()); }
    const CMatrix& op(int setting, int outcome) const {
        return ops_[static_cast<std::size_t>(setting) * outcomes_ + outcome];
    }

private:
    int settings_;
    int outcomes_;
    std::vector<CMatrix> ops_;  // indexed setting * outcomes + outcome
};

// Two-party conditional probability table p(a,b|x,y).
class Behavior {
public:
    Behavior(int partyACard, int partyBCard, int outA, int outB,
             std::vector<double> probs);

    int partyACard() const { return xCard_; }
    int partyBCard() const { return yCard_; }
    int outA() const { return aCard_; }
    int outB() const { return bCard_; }

    double p(int a, int b, int x, int y) const {
        return probs_[index(a, b, x, y)];
    }
    const std::vector<double>& raw() const { return probs_; }

    // Largest deviation of any marginal from setting-independence.
    double no_signaling_defect() const;

    // Marginals at the given reference settings (requires no-signaling to be
    // meaningful; callers assert it).
    double marginalA(int a, int x, int yRef = 0) const;
    double marginalB(int b, int y, int xRef = 0) const;

    std::size_t index(int a, int b, int x, int y) const {
        return ((static_cast<std::size_t>(x) * yCard_ + y) * aCard_ + a) * bCard_ + b;
    }

private:
    int xCard_, yCard_, aCard_, bCard_;
    std::vector<double> probs_;  // [x][y][a][b]
};

// p(a,b|x,y) = Tr[(A_x^a (x) B_y^b) rho]
Behavior born_behavior(const DensityMatrix& rho, const MeasurementSet& A,
                       const MeasurementSet& B);

// (1 + (-1)^outcome bloch.sigma)/2 ; |bloch| <= 1
CMatrix qubit_projector(const std::array<double, 3>& bloch, int outcome);

// v p + (1-v)/(outA*outB), entrywise
Behavior mix_with_uniform(const Behavior& p, double v);

// Sum of the two largest eigenvalues of T^T T, T_ij = Tr[rho sigma_i (x) sigma_j].
// CHSH is violable iff the result exceeds 1.
double horodecki_chsh(const DensityMatrix& rho);

struct Realization {
    DensityMatrix state;
    MeasurementSet alice;
    MeasurementSet bob;

    Behavior behavior() const { return born_behavior(state, alice, bob); }
};

// Two-qubit maximal-CHSH realization (score 1/2 + 1/(2 sqrt 2)).
Realization chsh_optimal_realization();
// Two-qutrit realization maximizing the CGLMP functional (value ~0.7287).
Realization cglmp_optimal_realization();
// Singlet with hexagon Bloch vectors; I3322 value 1/4.
Realization hexagon_realization();
// Nonmaximally entangled noisy two-qubit state violating I3322 (~0.0129)
// but not CHSH.
Realization candidate_realization();

}  // namespace bellccp
