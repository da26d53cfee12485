#include "bellccp/visibility.hpp"

#include <cmath>
#include <stdexcept>

namespace bellccp {

namespace {

// One g-row per (X,Y) is implied by the weight-normalization row and is
// dropped to keep the constraint matrix full rank.
int cell_row(int g, int X, int Y, int nB, int G) {
    return (X * nB + Y) * (G - 1) + g;
}

}  // namespace

VisibilitySolver::VisibilitySolver(const VertexSet& vertices, CCPBehavior noise)
    : vertices_(vertices), noise_(std::move(noise)) {
    const int nA = vertices_.senderInputs(), nB = vertices_.receiverInputs();
    const int G = vertices_.guessSize();
    if (noise_.senderInputs() != nA || noise_.receiverInputs() != nB ||
        noise_.guessSize() != G)
        throw std::invalid_argument("visibility: noise does not match vertex scenario");

    const int cellRows = (G - 1) * nA * nB;
    rows_ = cellRows + 2;  // + weight normalization + v cap
    const int sumRow = cellRows;
    const int capRow = cellRows + 1;

    lp_.numRows = rows_;
    lp_.columns.resize(vertices_.size() + 2);
    lp_.objective.assign(vertices_.size() + 2, 0.0);
    lp_.rhs.assign(rows_, 0.0);

    for (std::size_t l = 0; l < vertices_.size(); ++l) {
        auto& col = lp_.columns[l];
        col.rows.reserve(static_cast<std::size_t>(nA) * nB + 1);
        for (int X = 0; X < nA; ++X)
            for (int Y = 0; Y < nB; ++Y) {
                int g = vertices_.guess(l, X, Y);
                if (g < G - 1) col.push(cell_row(g, X, Y, nB, G), 1.0);
            }
        col.push(sumRow, 1.0);
    }
    // v column rebuilt per target in solve(); slack for v <= 1.
    lp_.columns[vertices_.size() + 1].push(capRow, 1.0);
    lp_.objective[vertices_.size()] = 1.0;

    for (int X = 0; X < nA; ++X)
        for (int Y = 0; Y < nB; ++Y)
            for (int g = 0; g < G - 1; ++g)
                lp_.rhs[cell_row(g, X, Y, nB, G)] = noise_.p(g, X, Y);
    lp_.rhs[sumRow] = 1.0;
    lp_.rhs[capRow] = 1.0;
}

VisibilityResult VisibilitySolver::solve(const CCPBehavior& target) {
    const int nA = vertices_.senderInputs(), nB = vertices_.receiverInputs();
    const int G = vertices_.guessSize();
    if (target.senderInputs() != nA || target.receiverInputs() != nB ||
        target.guessSize() != G)
        throw std::invalid_argument("visibility: target does not match vertex scenario");

    auto& vcol = lp_.columns[vertices_.size()];
    vcol.rows.clear();
    vcol.values.clear();
    for (int X = 0; X < nA; ++X)
        for (int Y = 0; Y < nB; ++Y)
            for (int g = 0; g < G - 1; ++g) {
                double diff = target.p(g, X, Y) - noise_.p(g, X, Y);
                if (diff != 0.0) vcol.push(cell_row(g, X, Y, nB, G), -diff);
            }
    vcol.push(rows_ - 1, 1.0);

    SimplexSolution sol = solve_simplex(lp_);
    VisibilityResult out;
    out.iterations = sol.iterations;
    if (sol.status == SolveStatus::Infeasible) {
        out.status = VisibilityResult::Status::InfeasibleAtZero;
        return out;
    }
    if (sol.status != SolveStatus::Optimal)
        throw std::runtime_error("visibility LP failed: " + to_string(sol.status));

    out.status = VisibilityResult::Status::Optimal;
    out.vStar = sol.x[vertices_.size()];
    out.weights.assign(sol.x.begin(), sol.x.begin() + vertices_.size());

    // Mixture residual over the full (undropped) equation system.
    double wsum = 0;
    for (double w : out.weights) wsum += w;
    double residual = std::abs(wsum - 1.0);
    std::vector<double> mix(static_cast<std::size_t>(nA) * nB * G, 0.0);
    for (std::size_t l = 0; l < vertices_.size(); ++l) {
        if (out.weights[l] == 0.0) continue;
        for (int X = 0; X < nA; ++X)
            for (int Y = 0; Y < nB; ++Y)
                mix[(static_cast<std::size_t>(X) * nB + Y) * G +
                    vertices_.guess(l, X, Y)] += out.weights[l];
    }
    for (int X = 0; X < nA; ++X)
        for (int Y = 0; Y < nB; ++Y)
            for (int g = 0; g < G; ++g) {
                double want = out.vStar * target.p(g, X, Y) +
                              (1.0 - out.vStar) * noise_.p(g, X, Y);
                double got = mix[(static_cast<std::size_t>(X) * nB + Y) * G + g];
                residual = std::max(residual, std::abs(got - want));
            }
    out.residual = residual;
    if (residual > 1e-7)
        throw std::runtime_error("visibility LP residual exceeds contract");
    return out;
}

VisibilityResult max_visibility(const CCPBehavior& target, const CCPBehavior& noise,
                                const VertexSet& vertices) {
    VisibilitySolver solver(vertices, noise);
    return solver.solve(target);
}

bool is_classically_simulable(const CCPBehavior& target, const VertexSet& vertices) {
    VisibilityResult r = max_visibility(
        target,
        CCPBehavior::uniform(target.senderInputs(), target.receiverInputs(),
                             target.guessSize()),
        vertices);
    if (!r.optimal())
        throw std::runtime_error("is_classically_simulable: LP infeasible at v=0");
    return r.vStar >= 1.0 - 1e-7;
}

}  // namespace bellccp
