#include "bellccp/quantum.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace bellccp {

namespace {

const CMatrix& pauli(int i) {
    static const CMatrix sx = [] {
        CMatrix m(2, 2);
        m << 0, 1, 1, 0;
        return m;
    }();
    static const CMatrix sy = [] {
        CMatrix m(2, 2);
        m << 0, Complex(0, -1), Complex(0, 1), 0;
        return m;
    }();
    static const CMatrix sz = [] {
        CMatrix m(2, 2);
        m << 1, 0, 0, -1;
        return m;
    }();
    switch (i) {
        case 0: return sx;
        case 1: return sy;
        default: return sz;
    }
}

// Tr[a b] without forming the full product.
double real_trace_product(const CMatrix& a, const CMatrix& b) {
    Complex s = 0;
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, i);
    return s.real();
}

}  // namespace

CMatrix kron(const CMatrix& a, const CMatrix& b) {
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

double min_eigenvalue_hermitian(const CMatrix& m) {
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(m, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

DensityMatrix::DensityMatrix(CMatrix entries) : mat_(std::move(entries)) {
    if (mat_.rows() != mat_.cols()) throw std::invalid_argument("density matrix must be square");
    if (mat_.rows() < 1 || mat_.rows() > kMaxDim)
        throw std::invalid_argument("density matrix dimension out of range");
    if ((mat_ - mat_.adjoint()).cwiseAbs().maxCoeff() > kHermTol)
        throw std::invalid_argument("density matrix not Hermitian");
    if (std::abs(mat_.trace().real() - 1.0) > kTraceTol || std::abs(mat_.trace().imag()) > kTraceTol)
        throw std::invalid_argument("density matrix trace must be 1");
    if (min_eigenvalue_hermitian(mat_) < -kPsdTol)
        throw std::invalid_argument("density matrix not positive semidefinite");
}

DensityMatrix DensityMatrix::pure(const CVector& state) {
    CVector psi = state / state.norm();
    return DensityMatrix(psi * psi.adjoint());
}

MeasurementSet::MeasurementSet(int settings, int outcomes, std::vector<CMatrix> operators)
    : settings_(settings), outcomes_(outcomes), ops_(std::move(operators)) {
    if (settings_ < 1 || outcomes_ < 1)
        throw std::invalid_argument("measurement set needs positive cardinalities");
    if (ops_.size() != static_cast<std::size_t>(settings_) * outcomes_)
        throw std::invalid_argument("measurement operator count mismatch");
    const Eigen::Index d = ops_.front().rows();
    for (const auto& op : ops_) {
        if (op.rows() != d || op.cols() != d)
            throw std::invalid_argument("measurement operator dimension mismatch");
        if (min_eigenvalue_hermitian(op) < -kPsdTol)
            throw std::invalid_argument("measurement operator not PSD");
    }
    for (int x = 0; x < settings_; ++x) {
        CMatrix sum = CMatrix::Zero(d, d);
        for (int a = 0; a < outcomes_; ++a) sum += op(x, a);
        if ((sum - CMatrix::Identity(d, d)).cwiseAbs().maxCoeff() > kHermTol)
            throw std::invalid_argument("measurement operators do not sum to identity");
    }
}

Behavior::Behavior(int partyACard, int partyBCard, int outA, int outB,
                   std::vector<double> probs)
    : xCard_(partyACard), yCard_(partyBCard), aCard_(outA), bCard_(outB),
      probs_(std::move(probs)) {
    if (xCard_ < 1 || yCard_ < 1 || aCard_ < 1 || bCard_ < 1)
        throw std::invalid_argument("behavior needs positive cardinalities");
    if (probs_.size() !=
        static_cast<std::size_t>(xCard_) * yCard_ * aCard_ * bCard_)
        throw std::invalid_argument("behavior table size mismatch");
    for (double v : probs_)
        if (v < -1e-12) throw std::invalid_argument("behavior has negative probability");
    for (int x = 0; x < xCard_; ++x) {
        for (int y = 0; y < yCard_; ++y) {
            double s = 0;
            for (int a = 0; a < aCard_; ++a)
                for (int b = 0; b < bCard_; ++b) s += p(a, b, x, y);
            if (std::abs(s - 1.0) > 1e-10)
                throw std::invalid_argument("behavior not normalized");
        }
    }
}

double Behavior::no_signaling_defect() const {
    double worst = 0;
    for (int x = 0; x < xCard_; ++x) {
        for (int a = 0; a < aCard_; ++a) {
            double lo = 2, hi = -1;
            for (int y = 0; y < yCard_; ++y) {
                double m = 0;
                for (int b = 0; b < bCard_; ++b) m += p(a, b, x, y);
                lo = std::min(lo, m);
                hi = std::max(hi, m);
            }
            worst = std::max(worst, hi - lo);
        }
    }
    for (int y = 0; y < yCard_; ++y) {
        for (int b = 0; b < bCard_; ++b) {
            double lo = 2, hi = -1;
            for (int x = 0; x < xCard_; ++x) {
                double m = 0;
                for (int a = 0; a < aCard_; ++a) m += p(a, b, x, y);
                lo = std::min(lo, m);
                hi = std::max(hi, m);
            }
            worst = std::max(worst, hi - lo);
        }
    }
    return worst;
}

double Behavior::marginalA(int a, int x, int yRef) const {
    double s = 0;
    for (int b = 0; b < bCard_; ++b) s += p(a, b, x, yRef);
    return s;
}

double Behavior::marginalB(int b, int y, int xRef) const {
    double s = 0;
    for (int a = 0; a < aCard_; ++a) s += p(a, b, xRef, y);
    return s;
}

Behavior born_behavior(const DensityMatrix& rho, const MeasurementSet& A,
                       const MeasurementSet& B) {
    if (A.dim() * B.dim() != rho.dim())
        throw std::invalid_argument("born_behavior: dimension mismatch");
    const int nx = A.settings(), ny = B.settings();
    const int na = A.outcomes(), nb = B.outcomes();
    std::vector<double> probs(static_cast<std::size_t>(nx) * ny * na * nb);
    std::size_t i = 0;
    for (int x = 0; x < nx; ++x)
        for (int y = 0; y < ny; ++y)
            for (int a = 0; a < na; ++a)
                for (int b = 0; b < nb; ++b)
                    probs[i++] = real_trace_product(kron(A.op(x, a), B.op(y, b)),
                                                    rho.matrix());
    return Behavior(nx, ny, na, nb, std::move(probs));
}

CMatrix qubit_projector(const std::array<double, 3>& bloch, int outcome) {
    double norm = std::sqrt(bloch[0] * bloch[0] + bloch[1] * bloch[1] + bloch[2] * bloch[2]);
    if (norm > 1.0 + 1e-12)
        throw std::invalid_argument("qubit_projector: Bloch vector longer than 1");
    if (outcome != 0 && outcome != 1)
        throw std::invalid_argument("qubit_projector: outcome must be 0 or 1");
    double s = outcome == 0 ? 1.0 : -1.0;
    CMatrix m = CMatrix::Identity(2, 2);
    for (int i = 0; i < 3; ++i) m += s * bloch[i] * pauli(i);
    return m / 2.0;
}

Behavior mix_with_uniform(const Behavior& p, double v) {
    if (v < 0.0 || v > 1.0)
        throw std::invalid_argument("mix_with_uniform: v must be in [0,1]");
    double uniform = (1.0 - v) / (p.outA() * p.outB());
    std::vector<double> probs = p.raw();
    for (double& e : probs) e = v * e + uniform;
    return Behavior(p.partyACard(), p.partyBCard(), p.outA(), p.outB(), std::move(probs));
}

double horodecki_chsh(const DensityMatrix& rho) {
    if (rho.dim() != 4) throw std::invalid_argument("horodecki_chsh: need a two-qubit state");
    Eigen::Matrix3d t;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            t(i, j) = real_trace_product(kron(pauli(i), pauli(j)), rho.matrix());
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(t.transpose() * t,
                                                          Eigen::EigenvaluesOnly);
    auto ev = solver.eigenvalues();
    return ev(2) + ev(1);
}

namespace {

MeasurementSet bloch_measurements(const std::vector<std::array<double, 3>>& vecs) {
    std::vector<CMatrix> ops;
    ops.reserve(vecs.size() * 2);
    for (const auto& v : vecs) {
        ops.push_back(qubit_projector(v, 0));
        ops.push_back(qubit_projector(v, 1));
    }
    return MeasurementSet(static_cast<int>(vecs.size()), 2, std::move(ops));
}

MeasurementSet xz_plane_measurements(const std::vector<double>& angles) {
    std::vector<std::array<double, 3>> vecs;
    for (double t : angles) vecs.push_back({std::sin(t), 0.0, std::cos(t)});
    return bloch_measurements(vecs);
}

// Fourier-type qutrit basis: |k> = 3^{-1/2} sum_j exp(i 2pi/3 j (k + phase)) |j>
MeasurementSet qutrit_phase_measurements(const std::vector<double>& phases) {
    std::vector<CMatrix> ops;
    for (double phase : phases) {
        for (int k = 0; k < 3; ++k) {
            CVector v(3);
            for (int j = 0; j < 3; ++j) {
                double arg = 2.0 * std::numbers::pi / 3.0 * j * (k + phase);
                v(j) = Complex(std::cos(arg), std::sin(arg)) / std::sqrt(3.0);
            }
            ops.push_back(v * v.adjoint());
        }
    }
    return MeasurementSet(static_cast<int>(phases.size()), 3, std::move(ops));
}

DensityMatrix schmidt_qutrit_state(double gamma) {
    CVector psi = CVector::Zero(9);
    double norm = std::sqrt(2.0 + gamma * gamma);
    psi(0) = 1.0 / norm;   // |00>
    psi(4) = gamma / norm; // |11>
    psi(8) = 1.0 / norm;   // |22>
    return DensityMatrix::pure(psi);
}

double cglmp_value(const Behavior& p) {
    // 1/4 sum_{x,y} P(a+b = -xy) - P(a+b = -xy + (-1)^{x+y}), mod 3
    double val = 0;
    for (int x = 0; x < 2; ++x) {
        for (int y = 0; y < 2; ++y) {
            int f1 = ((-x * y) % 3 + 3) % 3;
            int f2 = ((-x * y + ((x + y) % 2 == 0 ? 1 : -1)) % 3 + 3) % 3;
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b) {
                    int s = (a + b) % 3;
                    if (s == f1) val += p.p(a, b, x, y);
                    if (s == f2) val -= p.p(a, b, x, y);
                }
        }
    }
    return val / 4.0;
}

}  // namespace

Realization chsh_optimal_realization() {
    CVector phi = CVector::Zero(4);
    phi(0) = phi(3) = 1.0 / std::sqrt(2.0);  // |phi+>
    double r = 1.0 / std::sqrt(2.0);
    return Realization{
        DensityMatrix::pure(phi),
        bloch_measurements({{0, 0, 1}, {1, 0, 0}}),
        bloch_measurements({{r, 0, r}, {-r, 0, r}}),
    };
}

Realization cglmp_optimal_realization() {
    MeasurementSet alice = qutrit_phase_measurements({0.0, 0.5});
    MeasurementSet bob = qutrit_phase_measurements({-0.25, 0.25});
    // One-parameter maximization over the middle Schmidt coefficient.
    auto value = [&](double g) {
        return cglmp_value(born_behavior(schmidt_qutrit_state(g), alice, bob));
    };
    double lo = 0.3, hi = 1.0;
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = hi - invphi * (hi - lo), d = lo + invphi * (hi - lo);
    double fc = value(c), fd = value(d);
    while (hi - lo > 1e-10) {
        if (fc > fd) {
            hi = d; d = c; fd = fc;
            c = hi - invphi * (hi - lo);
            fc = value(c);
        } else {
            lo = c; c = d; fc = fd;
            d = lo + invphi * (hi - lo);
            fd = value(d);
        }
    }
    return Realization{schmidt_qutrit_state((lo + hi) / 2.0), std::move(alice),
                       std::move(bob)};
}

Realization hexagon_realization() {
    CVector psi = CVector::Zero(4);
    psi(1) = 1.0 / std::sqrt(2.0);
    psi(2) = -1.0 / std::sqrt(2.0);  // |psi->
    double h = std::sqrt(3.0) / 2.0;
    return Realization{
        DensityMatrix::pure(psi),
        bloch_measurements({{0, 0, 1}, {h, 0, 0.5}, {h, 0, -0.5}}),
        bloch_measurements({{-h, 0, -0.5}, {0, 0, -1}, {h, 0, -0.5}}),
    };
}

Realization candidate_realization() {
    CVector phi = CVector::Zero(4);
    phi(0) = 2.0 / std::sqrt(5.0);
    phi(3) = 1.0 / std::sqrt(5.0);  // (2|00> + |11>)/sqrt(5)
    CMatrix rho = 0.85 * (phi * phi.adjoint());
    rho(1, 1) += 0.15;  // |01><01|
    double eta = std::acos(std::sqrt(7.0 / 8.0));
    double chi = std::acos(std::sqrt(2.0 / 3.0));
    double halfpi = std::numbers::pi / 2.0;
    return Realization{
        DensityMatrix(std::move(rho)),
        xz_plane_measurements({eta, -eta, -halfpi}),
        xz_plane_measurements({-chi, chi, halfpi}),
    };
}

}  // namespace bellccp
