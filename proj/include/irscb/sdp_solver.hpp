// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "irscb/array_model.hpp"

namespace irscb {

struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class SdpStatus { kOptimal, kIterationLimit, kNumericalFailure };

struct SdpOptions {
    // Target absolute duality gap in units of the scaled objective (the
    // solver works internally with gains divided by Q^2).
    double gap_tol = 1e-7;
    double mu_shrink = 0.12;
    int max_newton_steps = 600;
    int max_inner_steps = 60;
    double newton_decrement_tol = 0.25;
    // Optional warm start; must have unit diagonal and be PSD. Blended
    // toward the identity to restore strict interiority.
    const CMatrix* warm_start = nullptr;
    double warm_blend = 1e-3;
    double warm_mu0 = 1e-3;
};

struct SdpResult {
    CMatrix w;          // Hermitian, diag = 1 exactly, positive definite
    double alpha = 0;   // min_p a_p^H W a_p, recomputed at the solution
    double objective = 0;  // alpha + eta * u^H W u (unscaled)
    double gap = 0;        // duality-gap estimate, unscaled gain units
    double mu_final = 0;   // last completed barrier level (scaled units)
    int newton_steps = 0;
    SdpStatus status = SdpStatus::kNumericalFailure;
};

// Maximizes   alpha + eta * u^H W u
// subject to  a_p^H W a_p >= alpha  (p = 1..P),
//             diag(W) = 1,  W Hermitian PSD.
//
// Feasible-start barrier path following: W = I with alpha below the smallest
// constraint value is strictly interior, so every iterate satisfies the
// constraints exactly and the returned W needs no feasibility repair.
// `u` may be empty when eta == 0.
SdpResult solve_gain_floor_sdp(const std::vector<CVector>& constraint_vectors, double eta,
                               const CVector& u, const SdpOptions& opt = {});

}  // namespace irscb
