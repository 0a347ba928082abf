// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "irscb/grid.hpp"
#include "irscb/sdp_solver.hpp"

#include <string>

namespace irscb {

struct CertificateError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown when no subproblem of a design ever produced a usable iterate.
struct DesignError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ScaConfig {
    // Zero means "derive from the natural objective scale Q^2":
    // eta_init = 1e-5 Q^2, eta_max = 1e3 Q^2, tol_rank = 1e-5 Q.
    // The gentle growth schedule matters: an aggressive penalty collapses
    // the iterate to rank one before the beam is shaped and strands the
    // design at a weak local optimum.
    double eta_init = 0.0;
    double eta_growth = 1.6;
    double eta_max = 0.0;
    int i_max = 25;
    double tol_objective = 1e-4;  // relative change of the penalized objective
    double tol_rank = 0.0;        // ||W||_* - ||W||_2 at convergence
    std::uint64_t rng_seed = 1;
    int restarts = 1;

    ScaConfig resolved(int q) const;
    void validate() const;
};

struct IterationRecord {
    double eta = 0.0;
    double objective_before = 0.0;  // penalized objective of the previous iterate under eta
    double objective_after = 0.0;   // ... of the iterate kept after this iteration
    double alpha_sdp = 0.0;         // subproblem floor variable
    double rank_residual = 0.0;     // ||W||_* - ||W||_2 of the kept iterate
    std::string status;             // optimal | null_step | solver_failure | certificate_failure
    bool accepted = false;
};

struct DesignReport {
    int iterations = 0;
    std::vector<IterationRecord> trace;
    double achieved_alpha = 0.0;  // exact min sampled gain of the recovered codeword
    double sdp_alpha = 0.0;       // final subproblem floor
    double final_rank_residual = 0.0;
    bool rank_converged = false;
    // Set when the recovered codeword's exact floor is more than 15% below
    // the SDP floor (relaxation-tightness telemetry, not a failure).
    bool relaxation_gap_flagged = false;
    int restart_index = 0;

    std::vector<double> objective_trace() const;
    std::vector<double> rank_residual_trace() const;
};

// Rank-one sample constraint matrices A = (y (x) z)(y (x) z)^H, one per
// (beta_y, beta_z) pair of the Cartesian sample product, row-major in
// (iy, iz). Every entry has unit modulus; tr(A) = Q.
std::vector<CMatrix> constraint_matrices(const IrsGeometry& geom, const SampleSet& samples);
std::vector<CVector> constraint_vectors(const IrsGeometry& geom, const SampleSet& samples);

// First-order lower bound on the spectral norm at w around w_prev:
// ||w_prev||_2 + Re tr[v v^H (w - w_prev)], v the unit principal eigenvector
// of w_prev. Never exceeds ||w||_2.
double taylor_spectral_lower_bound(const CMatrix& w_prev, const CMatrix& w);

struct SubproblemResult {
    CMatrix w;
    double alpha = 0.0;
    double mu_final = 0.0;
    SdpStatus status = SdpStatus::kNumericalFailure;
    // Spectrum of w, computed for the certificate and reusable by callers.
    Eigen::VectorXd eigenvalues;  // ascending
    CVector principal;            // unit principal eigenvector
};

// One convexified subproblem: maximize alpha - eta (tr W - taylor term)
// subject to the sampled gain floor, PSD cone and unit diagonal. The result
// is certified (min eigenvalue >= -1e-7, diagonal within 1e-6, constraint
// violation <= 1e-6 Q^2); a certificate failure throws CertificateError.
SubproblemResult solve_convex_subproblem(const std::vector<CVector>& constraints,
                                         const CMatrix& w_prev, double eta,
                                         const SdpOptions& opt = {});

// sqrt(tr W) times the unit principal eigenvector, projected entrywise to
// unit modulus; arg(0) := 0 and the global phase is fixed so nu_0 = 0.
Codeword rank_one_recovery(const CMatrix& w);

std::pair<Codeword, DesignReport> sca_design(const IrsGeometry& geom, const SampleSet& samples,
                                             const ScaConfig& cfg);

}  // namespace irscb
