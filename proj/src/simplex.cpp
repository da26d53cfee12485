#include "bellccp/simplex.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace bellccp {

std::string to_string(SolveStatus status) {
    switch (status) {
        case SolveStatus::Optimal: return "optimal";
        case SolveStatus::Infeasible: return "infeasible";
        case SolveStatus::IterationLimit: return "iteration-limit";
        case SolveStatus::Singular: return "singular-basis";
    }
    return "unknown";
}

namespace {

class RevisedSimplex {
public:
    RevisedSimplex(const LinearProgram& lp, const SimplexOptions& opts)
        : lp_(lp), opts_(opts), m_(lp.numRows),
          n_(static_cast<int>(lp.columns.size())) {
        if (lp_.rhs.size() != static_cast<std::size_t>(m_) ||
            lp_.objective.size() != static_cast<std::size_t>(n_))
            throw std::invalid_argument("simplex: inconsistent problem sizes");
        for (const auto& col : lp_.columns)
            for (int r : col.rows)
                if (r < 0 || r >= m_) throw std::invalid_argument("simplex: row index out of range");
        rhs_ = lp_.rhs;
        rowSign_.assign(m_, 1.0);
        for (int i = 0; i < m_; ++i)
            if (rhs_[i] < 0) {
                rhs_[i] = -rhs_[i];
                rowSign_[i] = -1.0;
            }
        basis_.resize(m_);
        for (int i = 0; i < m_; ++i) basis_[i] = n_ + i;  // artificials
        binv_.assign(static_cast<std::size_t>(m_) * m_, 0.0);
        for (int i = 0; i < m_; ++i) binv_[idx(i, i)] = 1.0;
        xb_ = rhs_;
        work_.resize(m_);
        y_.resize(m_);
    }

    SimplexSolution run() {
        SimplexSolution out;
        inBasis_.assign(n_ + m_, 0);
        for (int b : basis_) inBasis_[b] = 1;

        // Phase 1: maximize -(sum of artificials).
        phase_ = 1;
        SolveStatus st = iterate();
        if (st != SolveStatus::Optimal) {
            out.status = st;
            out.iterations = iterations_;
            return out;
        }
        double infeas = 0;
        for (int i = 0; i < m_; ++i)
            if (basis_[i] >= n_) infeas += xb_[i];
        if (infeas > 1e-7) {
            out.status = SolveStatus::Infeasible;
            out.iterations = iterations_;
            return out;
        }
        drive_out_artificials();

        // Phase 2: artificials stay barred from entering. Any artificial left
        // basic covers a redundant row and must stay at zero; verified below.
        phase_ = 2;
        st = iterate();
        out.status = st;
        out.iterations = iterations_;
        if (st != SolveStatus::Optimal) return out;

        for (int i = 0; i < m_; ++i)
            if (basis_[i] >= n_ && std::abs(xb_[i]) > 1e-8) {
                out.status = SolveStatus::Singular;
                return out;
            }
        out.x.assign(n_, 0.0);
        for (int i = 0; i < m_; ++i)
            if (basis_[i] < n_) out.x[basis_[i]] = xb_[i];
        double obj = 0;
        for (int j = 0; j < n_; ++j) obj += lp_.objective[j] * out.x[j];
        out.objective = obj;
        return out;
    }

private:
    std::size_t idx(int r, int c) const { return static_cast<std::size_t>(r) * m_ + c; }

    double cost(int j) const {
        if (phase_ == 1) return j >= n_ ? -1.0 : 0.0;
        return j >= n_ ? 0.0 : lp_.objective[j];
    }

    // Column j of the (sign-adjusted) constraint matrix into out[].
    void scatter_column(int j, std::vector<double>& out) const {
        std::fill(out.begin(), out.end(), 0.0);
        if (j >= n_) {
            out[j - n_] = 1.0;
            return;
        }
        const auto& col = lp_.columns[j];
        for (std::size_t k = 0; k < col.rows.size(); ++k)
            out[col.rows[k]] = col.values[k] * rowSign_[col.rows[k]];
    }

    // u = Binv * A_j, exploiting column sparsity.
    void ftran(int j, std::vector<double>& u) const {
        std::fill(u.begin(), u.end(), 0.0);
        if (j >= n_) {
            int r = j - n_;
            for (int i = 0; i < m_; ++i) u[i] = binv_[idx(i, r)];
            return;
        }
        const auto& col = lp_.columns[j];
        for (std::size_t k = 0; k < col.rows.size(); ++k) {
            const double v = col.values[k] * rowSign_[col.rows[k]];
            const int r = col.rows[k];
            const double* bcol = &binv_[r];
            for (int i = 0; i < m_; ++i) u[i] += v * bcol[static_cast<std::size_t>(i) * m_];
        }
    }

    // y = c_B^T Binv
    void compute_duals() {
        std::fill(y_.begin(), y_.end(), 0.0);
        for (int i = 0; i < m_; ++i) {
            double cb = cost(basis_[i]);
            if (cb == 0.0) continue;
            const double* row = &binv_[idx(i, 0)];
            for (int k = 0; k < m_; ++k) y_[k] += cb * row[k];
        }
    }

    double reduced_cost(int j) const {
        double d = cost(j);
        if (j >= n_) return d - y_[j - n_];
        const auto& col = lp_.columns[j];
        for (std::size_t k = 0; k < col.rows.size(); ++k)
            d -= y_[col.rows[k]] * col.values[k] * rowSign_[col.rows[k]];
        return d;
    }

    SolveStatus iterate() {
        int sinceImprove = 0;
        double lastObj = current_objective();

        while (iterations_ < opts_.maxIterations) {
            compute_duals();
            const bool bland = sinceImprove > 4 * (m_ + 16);

            int enter = -1;
            double bestD = opts_.costTol;
            for (int j = 0; j < n_; ++j) {  // artificials never re-enter
                if (inBasis_[j]) continue;
                double d = reduced_cost(j);
                if (d > bestD) {
                    bestD = d;
                    enter = j;
                    if (bland) break;
                }
            }
            if (enter < 0) return SolveStatus::Optimal;

            ftran(enter, work_);
            int leave = -1;
            double bestRatio = std::numeric_limits<double>::infinity();
            for (int i = 0; i < m_; ++i) {
                if (work_[i] > opts_.pivotTol) {
                    double ratio = xb_[i] / work_[i];
                    if (ratio < bestRatio - 1e-12 ||
                        (ratio < bestRatio + 1e-12 &&
                         (leave < 0 || basis_[i] < basis_[leave]))) {
                        bestRatio = ratio;
                        leave = i;
                    }
                }
            }
            if (leave < 0) {
                // Unbounded direction. Phase-1 objective is bounded, and the
                // membership problems are bounded by construction, so treat it
                // as a numerical failure.
                return SolveStatus::Singular;
            }

            pivot(enter, leave);
            ++iterations_;

            double obj = current_objective();
            if (obj > lastObj + 1e-13) {
                sinceImprove = 0;
                lastObj = obj;
            } else {
                ++sinceImprove;
            }
            if (iterations_ % opts_.refactorEvery == 0) {
                if (!refactorize()) return SolveStatus::Singular;
            }
        }
        return SolveStatus::IterationLimit;
    }

    // Degenerate-pivot basic artificials out wherever a structural column has
    // a nonzero component in their row; rows with none are redundant.
    void drive_out_artificials() {
        for (int i = 0; i < m_; ++i) {
            if (basis_[i] < n_) continue;
            const double* brow = &binv_[idx(i, 0)];
            int found = -1;
            for (int j = 0; j < n_ && found < 0; ++j) {
                if (inBasis_[j]) continue;
                const auto& col = lp_.columns[j];
                double comp = 0;
                for (std::size_t k = 0; k < col.rows.size(); ++k)
                    comp += brow[col.rows[k]] * col.values[k] * rowSign_[col.rows[k]];
                if (std::abs(comp) > 1e-7) found = j;
            }
            if (found >= 0) {
                ftran(found, work_);
                pivot(found, i);
            }
        }
    }

    double current_objective() const {
        double obj = 0;
        for (int i = 0; i < m_; ++i) obj += cost(basis_[i]) * xb_[i];
        return obj;
    }

    void pivot(int enter, int leave) {
        const double piv = work_[leave];
        double* brow = &binv_[idx(leave, 0)];
        for (int k = 0; k < m_; ++k) brow[k] /= piv;
        xb_[leave] /= piv;
        for (int i = 0; i < m_; ++i) {
            if (i == leave) continue;
            double f = work_[i];
            if (f == 0.0) continue;
            double* row = &binv_[idx(i, 0)];
            for (int k = 0; k < m_; ++k) row[k] -= f * brow[k];
            xb_[i] -= f * xb_[leave];
            if (xb_[i] < 0 && xb_[i] > -1e-11) xb_[i] = 0;
        }
        inBasis_[basis_[leave]] = 0;
        inBasis_[enter] = 1;
        basis_[leave] = enter;
    }

    // Rebuild Binv from scratch by Gauss-Jordan with partial pivoting.
    bool refactorize() {
        std::vector<double> b(static_cast<std::size_t>(m_) * m_);
        std::vector<double> col(m_);
        for (int j = 0; j < m_; ++j) {
            scatter_column(basis_[j], col);
            for (int i = 0; i < m_; ++i) b[idx(i, j)] = col[i];
        }
        std::vector<double> inv(static_cast<std::size_t>(m_) * m_, 0.0);
        for (int i = 0; i < m_; ++i) inv[idx(i, i)] = 1.0;
        for (int c = 0; c < m_; ++c) {
            int p = c;
            for (int r = c + 1; r < m_; ++r)
                if (std::abs(b[idx(r, c)]) > std::abs(b[idx(p, c)])) p = r;
            if (std::abs(b[idx(p, c)]) < 1e-12) return false;
            if (p != c) {
                for (int k = 0; k < m_; ++k) {
                    std::swap(b[idx(p, k)], b[idx(c, k)]);
                    std::swap(inv[idx(p, k)], inv[idx(c, k)]);
                }
            }
            double d = b[idx(c, c)];
            for (int k = 0; k < m_; ++k) {
                b[idx(c, k)] /= d;
                inv[idx(c, k)] /= d;
            }
            for (int r = 0; r < m_; ++r) {
                if (r == c) continue;
                double f = b[idx(r, c)];
                if (f == 0.0) continue;
                for (int k = 0; k < m_; ++k) {
                    b[idx(r, k)] -= f * b[idx(c, k)];
                    inv[idx(r, k)] -= f * inv[idx(c, k)];
                }
            }
        }
        binv_ = std::move(inv);
        // Refresh basic values from the rebuilt inverse.
        for (int i = 0; i < m_; ++i) {
            double v = 0;
            for (int k = 0; k < m_; ++k) v += binv_[idx(i, k)] * rhs_[k];
            xb_[i] = v < 0 && v > -1e-11 ? 0.0 : v;
        }
        return true;
    }

    const LinearProgram& lp_;
    SimplexOptions opts_;
    int m_, n_;
    int phase_ = 1;
    int iterations_ = 0;
    std::vector<double> rhs_;
    std::vector<double> rowSign_;
    std::vector<int> basis_;
    std::vector<char> inBasis_;
    std::vector<double> binv_;  // row-major m x m
    std::vector<double> xb_;
    std::vector<double> work_;
    std::vector<double> y_;
};

}  // namespace

SimplexSolution solve_simplex(const LinearProgram& lp, const SimplexOptions& opts) {
    RevisedSimplex solver(lp, opts);
    return solver.run();
}

}  // namespace bellccp
