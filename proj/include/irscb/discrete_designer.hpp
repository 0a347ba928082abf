// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "irscb/grid.hpp"
#include "irscb/lp_solver.hpp"

#include <string>

namespace irscb {

// Discrete phase set {0, dv, ..., (S-1) dv} with dv = 2 pi / S, S = 2^bits,
// plus the extended difference table [-(S-1) dv, ..., (S-1) dv] and its
// cos/sin values used by the linearized quadratic form.
struct PhaseAlphabet {
    int bits = 1;
    int levels = 2;              // S
    double delta = kPi;          // dv
    std::vector<double> base;    // S entries
    std::vector<double> ext;     // 2S-1 entries, antisymmetric
    std::vector<double> cos_ext;
    std::vector<double> sin_ext;

    static PhaseAlphabet from_bits(int bits);
    int ext_size() const { return 2 * levels - 1; }
    // Index into ext for a level difference dq - di in [-(S-1), S-1].
    int ext_index(int level_diff) const { return level_diff + levels - 1; }
};

// One phase level per element; level[0] is pinned to 0 by the gauge cut.
// x() and y_selector() materialize the one-hot encodings.
struct BinaryAssignment {
    int levels = 2;
    std::vector<int> level;  // length Q, values in [0, S)

    Eigen::MatrixXi x() const;  // Q x S one-hot rows
    // Index of the selected slot of y_{q,i} (difference one-hot of length 2S-1).
    int y_selector(int q, int i) const { return level[static_cast<std::size_t>(q)] -
                                                level[static_cast<std::size_t>(i)] + levels - 1; }
    void validate() const;
};

// Linear description of the sampled gain rows over pair-difference selectors:
// row_r(assignment) = Q + sum_{q<i} coeff_r(q,i,.) y_{q,i}, with
// coeff_r(q,i,u) = 2 |A_r(q,i)| cos(Ang A_r(q,i) + ext_u). Diagonal terms are
// folded into the constant Q and the lower triangle into the factor 2.
struct DiscreteProgram {
    int q = 0;
    PhaseAlphabet alphabet;
    std::vector<CVector> sample_vectors;     // a_r, for exact evaluation
    std::vector<std::pair<int, int>> pairs;  // (q < i), lexicographic
    // rows[r] is a matrix of size pairs.size() x (2S-1).
    std::vector<Eigen::MatrixXd> rows;

    // Linearized row value for a full assignment.
    double row_value(int r, const BinaryAssignment& asg) const;
    // Exact |w^H a_r|^2 from the assignment's phases; this is the official
    // objective evaluation shared by the solver and the oracle.
    double exact_gain(int r, const BinaryAssignment& asg) const;
    double exact_floor(const BinaryAssignment& asg) const;
};

DiscreteProgram build_discrete_program(const IrsGeometry& geom, const SampleSet& samples,
                                       const PhaseAlphabet& alphabet);

struct BnbConfig {
    long node_limit = 100000;
    double gap_tolerance = 1e-6;  // absolute, gain units
    std::string branching = "most-fractional";
    // Nodes whose remaining completion space is at most this size are closed
    // by exact enumeration instead of further LP branching.
    long leaf_enumeration_budget = 2048;

    void validate() const;
};

struct BnbResult {
    BinaryAssignment assignment;
    double alpha = 0.0;  // exact floor of the returned assignment
    double upper_bound = 0.0;
    long nodes = 0;
    bool optimal = false;  // bound gap <= gap_tolerance proven
};

// Exact max-min design over the discrete alphabet via LP-based
// branch-and-bound on the one-hot encoding; the gauge cut pins element 0 to
// level 0. If the node limit is hit, the incumbent is returned with
// optimal = false and the global bound still valid. warm_start, when given,
// seeds the incumbent (the designers pass quantized conjugate steering).
BnbResult solve_exact_bnb(const DiscreteProgram& program, const BnbConfig& cfg = {},
                          const BinaryAssignment* warm_start = nullptr);

struct OracleResult {
    std::vector<double> phases;
    double alpha = 0.0;
};

// Exhaustive enumeration with nu_0 = 0; ties resolved toward the
// lexicographically smallest level vector. Guarded by S^(Q-1) <= 2^20.
OracleResult enumerate_oracle(const IrsGeometry& geom, const SampleSet& samples,
                              const PhaseAlphabet& alphabet);

Codeword assignment_to_codeword(const BinaryAssignment& asg, const PhaseAlphabet& alphabet);
BinaryAssignment codeword_to_assignment(const Codeword& cw, const PhaseAlphabet& alphabet);

// Conjugate-steering phases at the sample-box center rounded to the nearest
// level; the standard warm start.
BinaryAssignment quantized_steering_assignment(const IrsGeometry& geom, const SampleSet& samples,
                                               const PhaseAlphabet& alphabet);

}  // namespace irscb
