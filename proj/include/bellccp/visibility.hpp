// Visibility / membership linear programs over the classical CCP polytope:
//   max v  s.t.  sum_l w_l p_l = v*target + (1-v)*noise,  w >= 0, sum w = 1,
// with v capped at 1.

#pragma once

#include <vector>

#include "bellccp/ccp.hpp"
#include "bellccp/polytope.hpp"
#include "bellccp/simplex.hpp"

namespace bellccp {

struct VisibilityResult {
    enum class Status { Optimal, InfeasibleAtZero };

    double vStar = 0.0;
    std::vector<double> weights;  // convex coefficients over the vertex set
    Status status = Status::Optimal;
    double residual = 0.0;  // max mixture-equation defect at vStar
    int iterations = 0;

    bool optimal() const { return status == Status::Optimal; }
};

// Reusable solver: the vertex columns depend only on (V, noise), so repeated
// solves against many targets only swap the v column.
class VisibilitySolver {
public:
    VisibilitySolver(const VertexSet& vertices, CCPBehavior noise);

    VisibilityResult solve(const CCPBehavior& target);

private:
    const VertexSet& vertices_;
    CCPBehavior noise_;
    int rows_;
    LinearProgram lp_;
};

VisibilityResult max_visibility(const CCPBehavior& target, const CCPBehavior& noise,
                                const VertexSet& vertices);

// True iff max_visibility against uniform noise reaches 1 within 1e-7.
bool is_classically_simulable(const CCPBehavior& target, const VertexSet& vertices);

}  // namespace bellccp
