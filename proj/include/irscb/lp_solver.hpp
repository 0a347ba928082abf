// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <vector>

namespace irscb {

// Dense-ish linear program in the canonical box form
//   maximize c^T x   s.t.  A x = b,   l <= x <= u   (all bounds finite),
// stored column-wise sparse. Solved by a primal-dual interior-point method.
//
// For branch-and-bound the solver also produces a rigorous upper bound from
// the (possibly inexact) equality multipliers y:
//   max  c^T x  <=  b^T y + sum_j max(r_j l_j, r_j u_j),  r = c - A^T y,
// which is valid for any y because only box constraints remain after
// dualizing the equalities.
struct LpProblem {
    int n = 0;  // columns
    int m = 0;  // equality rows
    std::vector<std::vector<std::pair<int, double>>> cols;  // per column: (row, value)
    Eigen::VectorXd c;
    Eigen::VectorXd b;
    Eigen::VectorXd lo;
    Eigen::VectorXd hi;

    void validate() const;
};

enum class LpStatus { kOptimal, kIterationLimit, kNumericalFailure };

struct LpResult {
    Eigen::VectorXd x;
    Eigen::VectorXd y;          // equality multipliers
    double objective = 0.0;     // c^T x at the returned (approximately optimal) x
    double safe_upper_bound = 0.0;  // rigorous bound, valid regardless of status
    LpStatus status = LpStatus::kNumericalFailure;
    int iterations = 0;
};

struct LpOptions {
    int max_iterations = 120;
    double tolerance = 1e-9;  // relative residual / gap target
};

LpResult solve_box_lp(const LpProblem& lp, const LpOptions& opt = {});

}  // namespace irscb
