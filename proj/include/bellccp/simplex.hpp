// Dense two-phase revised simplex for small equality-form problems:
//   max c^T x  s.t.  A x = b, x >= 0
// Problem shapes here are a few dozen rows by up to ~50k sparse columns.

#pragma once

#include <string>
#include <vector>

namespace bellccp {

struct SparseColumn {
    std::vector<int> rows;
    std::vector<double> values;

    void push(int row, double value) {
        rows.push_back(row);
        values.push_back(value);
    }
};

struct LinearProgram {
    int numRows = 0;
    std::vector<SparseColumn> columns;
    std::vector<double> objective;  // one entry per column
    std::vector<double> rhs;        // one entry per row
};

enum class SolveStatus { Optimal, Infeasible, IterationLimit, Singular };

struct SimplexSolution {
    SolveStatus status = SolveStatus::IterationLimit;
    double objective = 0.0;
    std::vector<double> x;
    int iterations = 0;

    bool optimal() const { return status == SolveStatus::Optimal; }
};

struct SimplexOptions {
    double pivotTol = 1e-9;
    double costTol = 1e-9;
    int maxIterations = 200000;
    int refactorEvery = 128;
};

SimplexSolution solve_simplex(const LinearProgram& lp, const SimplexOptions& opts = {});

std::string to_string(SolveStatus status);

}  // namespace bellccp
