// SPDX-License-Identifier: Apache-2.0

#include "irscb/sca_designer.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

#include "irscb/rng.hpp"

namespace irscb {

ScaConfig ScaConfig::resolved(int q) const {
    ScaConfig c = *this;
    const double q2 = static_cast<double>(q) * q;
    if (c.eta_init <= 0.0) c.eta_init = 1e-5 * q2;
    if (c.eta_max <= 0.0) c.eta_max = 1e3 * q2;
    if (c.tol_rank <= 0.0) c.tol_rank = 1e-5 * q;
    c.validate();
    return c;
}

void ScaConfig::validate() const {
    if (!(eta_init > 0.0)) throw std::invalid_argument("ScaConfig: eta_init must be > 0");
    if (!(eta_growth > 1.0)) throw std::invalid_argument("ScaConfig: eta_growth must be > 1");
    if (!(eta_max >= eta_init)) throw std::invalid_argument("ScaConfig: eta_max must be >= eta_init");
    if (i_max < 1) throw std::invalid_argument("ScaConfig: i_max must be >= 1");
    if (restarts < 1) throw std::invalid_argument("ScaConfig: restarts must be >= 1");
}

std::vector<double> DesignReport::objective_trace() const {
    std::vector<double> v;
    v.reserve(trace.size());
    for (const auto& r : trace) v.push_back(r.objective_after);
    return v;
}

std::vector<double> DesignReport::rank_residual_trace() const {
    std::vector<double> v;
    v.reserve(trace.size());
    for (const auto& r : trace) v.push_back(r.rank_residual);
    return v;
}

std::vector<CVector> constraint_vectors(const IrsGeometry& geom, const SampleSet& samples) {
    std::vector<CVector> out;
    out.reserve(samples.pair_count());
    for (double by : samples.points_y)
        for (double bz : samples.points_z)
            out.push_back(steering_vector(geom, EffectiveDirection{by, bz}));
    return out;
}

std::vector<CMatrix> constraint_matrices(const IrsGeometry& geom, const SampleSet& samples) {
    std::vector<CMatrix> out;
    out.reserve(samples.pair_count());
    for (const CVector& a : constraint_vectors(geom, samples)) out.push_back(a * a.adjoint());
    return out;
}

namespace {

struct Spectrum {
    Eigen::VectorXd eigenvalues;  // ascending
    CVector principal;            // unit eigenvector of the largest eigenvalue
};

Spectrum hermitian_spectrum(const CMatrix& w) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (w + w.adjoint()));
    Spectrum s;
    s.eigenvalues = es.eigenvalues();
    s.principal = es.eigenvectors().col(w.rows() - 1);
    return s;
}

double spectral_norm_psd(const Spectrum& s) { return s.eigenvalues.maxCoeff(); }

Codeword recover_from_principal(const CVector& principal, double trace) {
    const double scale = std::sqrt(std::max(0.0, trace));
    const CVector v = scale * principal;
    const int q = static_cast<int>(principal.size());
    Codeword cw;
    cw.mode = PhaseMode::kContinuous;
    cw.phases.resize(static_cast<std::size_t>(q));
    const double gauge = std::abs(v[0]) > 0.0 ? std::arg(v[0]) : 0.0;
    for (int i = 0; i < q; ++i) {
        double ph = std::abs(v[i]) > 0.0 ? std::arg(v[i]) - gauge : -gauge;
        ph = std::remainder(ph, kTwoPi);
        if (ph <= -kPi) ph = kPi;  // canonical range (-pi, pi]
        cw.phases[static_cast<std::size_t>(i)] = ph;
    }
    cw.phases[0] = 0.0;
    return cw;
}

// Exact sampled floor min_p a_p^H W a_p.
double sampled_floor(const std::vector<CVector>& a, const CMatrix& w) {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& v : a) m = std::min(m, std::real(v.dot(w * v)));
    return m;
}

double codeword_floor(const std::vector<CVector>& a, const CVector& w) {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& v : a) m = std::min(m, std::norm(w.dot(v)));
    return m;
}

// 4x refinement of the sample box, including the original points. Candidate
// unit-modulus roundings are ranked by their floor on this denser grid: two
// roundings can tie on the optimization samples while one of them craters
// between them, and the constraint samples alone cannot tell them apart.
std::vector<double> refine_axis(const std::vector<double>& pts, int factor) {
    if (pts.size() < 2) return pts;
    std::vector<double> out;
    const double lo = pts.front();
    const double hi = pts.back();
    const int n = factor * (static_cast<int>(pts.size()) - 1);
    out.reserve(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) out.push_back(lo + (hi - lo) * (static_cast<double>(i) / n));
    return out;
}

// Penalized objective of the exact (non-linearized) problem at fixed eta:
// min_p tr(A_p W) - eta (||W||_* - ||W||_2). For PSD W with unit diagonal
// the nuclear norm equals tr W = Q; this is asserted against the spectrum.
double penalized_objective(const std::vector<CVector>& a, const CMatrix& w, double eta,
                           const Spectrum& sp) {
    const double trace = std::real(w.trace());
    const double nuclear = sp.eigenvalues.array().abs().sum();
    if (std::abs(nuclear - trace) > 1e-6 * std::max<double>(1.0, w.rows()))
        throw CertificateError("penalized objective: nuclear norm deviates from trace on a PSD iterate");
    return sampled_floor(a, w) - eta * (trace - spectral_norm_psd(sp));
}

}  // namespace

double taylor_spectral_lower_bound(const CMatrix& w_prev, const CMatrix& w) {
    const Spectrum sp = hermitian_spectrum(w_prev);
    const double base = spectral_norm_psd(sp);
    const cdouble incr = sp.principal.dot((w - w_prev) * sp.principal);
    return base + std::real(incr);
}

namespace {

SubproblemResult solve_subproblem_with_direction(const std::vector<CVector>& constraints,
                                                 const CMatrix& w_prev, const CVector& u_prev,
                                                 double eta, const SdpOptions& opt) {
    const int q = static_cast<int>(w_prev.rows());
    SdpOptions o = opt;
    o.warm_start = &w_prev;
    SdpResult r = solve_gain_floor_sdp(constraints, eta, u_prev, o);
    SubproblemResult out;
    out.status = r.status;
    out.mu_final = r.mu_final;
    if (r.status == SdpStatus::kNumericalFailure) return out;
    out.w = std::move(r.w);
    out.alpha = r.alpha;

    // Feasibility certificate; the certificate, not the solver, is normative.
    const double q2 = static_cast<double>(q) * q;
    const Spectrum spw = hermitian_spectrum(out.w);
    out.eigenvalues = spw.eigenvalues;
    out.principal = spw.principal;
    if (spw.eigenvalues.minCoeff() < -1e-7)
        throw CertificateError("subproblem certificate: W has eigenvalue below -1e-7");
    if ((out.w.diagonal().array() - 1.0).abs().maxCoeff() > 1e-6)
        throw CertificateError("subproblem certificate: diagonal deviates from one beyond 1e-6");
    if (sampled_floor(constraints, out.w) < out.alpha - 1e-6 * q2)
        throw CertificateError("subproblem certificate: sampled floor violates alpha beyond 1e-6 Q^2");
    return out;
}

}  // namespace

SubproblemResult solve_convex_subproblem(const std::vector<CVector>& constraints,
                                         const CMatrix& w_prev, double eta,
                                         const SdpOptions& opt) {
    const Spectrum sp = hermitian_spectrum(w_prev);
    return solve_subproblem_with_direction(constraints, w_prev, sp.principal, eta, opt);
}

Codeword rank_one_recovery(const CMatrix& w) {
    const Spectrum sp = hermitian_spectrum(w);
    return recover_from_principal(sp.principal, std::real(w.trace()));
}

std::pair<Codeword, DesignReport> sca_design(const IrsGeometry& geom, const SampleSet& samples,
                                             const ScaConfig& cfg_in) {
    geom.validate();
    const int q = geom.element_count();
    const ScaConfig cfg = cfg_in.resolved(q);
    const std::vector<CVector> a = constraint_vectors(geom, samples);
    if (a.empty()) throw std::invalid_argument("sca_design: empty sample set");

    Codeword best_cw;
    DesignReport best_report;
    bool have_best = false;

    for (int restart = 0; restart < cfg.restarts; ++restart) {
        auto rng = make_rng(derive_seed(cfg.rng_seed, 0x5ca0u, static_cast<std::uint64_t>(restart)));
        std::uniform_real_distribution<double> unif(0.0, kTwoPi);
        CVector w0(q);
        for (int i = 0; i < q; ++i) w0[i] = std::polar(1.0, unif(rng));
        CMatrix w_cur = w0 * w0.adjoint();

        DesignReport report;
        report.restart_index = restart;
        double eta = cfg.eta_init;
        bool any_success = false;
        Spectrum sp_cur = hermitian_spectrum(w_cur);

        // Best unit-modulus rounding seen along the path. Its rank-one lift
        // competes with each subproblem solution, which keeps the accepted
        // sequence monotone in the penalized objective while guarding
        // against a bad collapse when the penalty starts to dominate a
        // still-high-rank iterate. Roundings are ranked by their floor on a
        // refined validation grid so sampled-floor ties cannot smuggle in a
        // pattern that dips between the optimization samples.
        SampleSet dense;
        dense.points_y = refine_axis(samples.points_y, 4);
        dense.points_z = refine_axis(samples.points_z, 4);
        const std::vector<CVector> a_dense = constraint_vectors(geom, dense);

        Codeword best_round = recover_from_principal(sp_cur.principal, std::real(w_cur.trace()));
        double best_round_floor = codeword_floor(a, best_round.weights());
        double best_round_dense = codeword_floor(a_dense, best_round.weights());

        SdpOptions sdp_opt;  // warm depth adapted from the previous solve
        for (int it = 0; it < cfg.i_max; ++it) {
            IterationRecord rec;
            rec.eta = eta;
            rec.objective_before = penalized_objective(a, w_cur, eta, sp_cur);

            bool stop = false;
            try {
                SubproblemResult sub =
                    solve_subproblem_with_direction(a, w_cur, sp_cur.principal, eta, sdp_opt);
                sdp_opt.warm_mu0 = std::max(1e3 * sub.mu_final, 1e-9);
                if (sub.status == SdpStatus::kNumericalFailure) {
                    rec.status = "solver_failure";
                } else {
                    const Spectrum sp_new{sub.eigenvalues, sub.principal};
                    const double f_new = penalized_objective(a, sub.w, eta, sp_new);
                    rec.alpha_sdp = sub.alpha;

                    // Update the best rounding with the fresh subproblem solution.
                    {
                        Codeword cand = recover_from_principal(sp_new.principal,
                                                               std::real(sub.w.trace()));
                        const CVector cw_w = cand.weights();
                        const double dn = codeword_floor(a_dense, cw_w);
                        if (dn > best_round_dense) {
                            best_round_dense = dn;
                            best_round_floor = codeword_floor(a, cw_w);
                            best_round = std::move(cand);
                        }
                    }
                    // Lift of the best rounding: feasible rank-one point with
                    // zero penalty, objective equal to its exact floor.
                    const bool lift_wins = best_round_floor > f_new;
                    const double f_cand = lift_wins ? best_round_floor : f_new;

                    if (f_cand >= rec.objective_before) {
                        const double rel_change = std::abs(f_cand - rec.objective_before) /
                                                  std::max(1.0, std::abs(rec.objective_before));
                        if (lift_wins) {
                            const CVector wl = best_round.weights();
                            w_cur = wl * wl.adjoint();
                            w_cur.diagonal().setOnes();
                            sp_cur = hermitian_spectrum(w_cur);
                            rec.status = "lift_step";
                        } else {
                            w_cur = std::move(sub.w);
                            sp_cur = sp_new;
                            rec.status = "optimal";
                        }
                        rec.accepted = true;
                        any_success = true;
                        const double rank_res =
                            std::real(w_cur.trace()) - spectral_norm_psd(sp_cur);
                        if (rel_change < cfg.tol_objective && rank_res < cfg.tol_rank) stop = true;
                    } else {
                        // Kept the previous iterate: nothing improved the
                        // exact penalized objective (gap-level stall).
                        rec.status = "null_step";
                        any_success = true;
                        const double rank_res =
                            std::real(w_cur.trace()) - spectral_norm_psd(sp_cur);
                        if (rank_res < cfg.tol_rank) stop = true;
                    }
                }
            } catch (const CertificateError&) {
                rec.status = "certificate_failure";
            }

            rec.objective_after = penalized_objective(a, w_cur, eta, sp_cur);
            rec.rank_residual = std::real(w_cur.trace()) - spectral_norm_psd(sp_cur);
            report.trace.push_back(rec);
            report.iterations = static_cast<int>(report.trace.size());
            if (stop) break;
            eta = std::min(cfg.eta_growth * eta, cfg.eta_max);
        }

        if (!any_success) {
            if (restart + 1 == cfg.restarts && !have_best) {
                throw DesignError("sca_design: every subproblem attempt failed");
            }
            continue;
        }

        Codeword cw = rank_one_recovery(w_cur);
        // The floor is recomputed exactly from the unit-modulus codeword,
        // never read off the lifted matrix. The final pick between the path
        // recovery and the best recorded rounding also goes by the dense
        // validation floor.
        cw.achieved_alpha = codeword_floor(a, cw.weights());
        if (best_round_dense > codeword_floor(a_dense, cw.weights())) {
            cw = best_round;
            cw.achieved_alpha = best_round_floor;
        }
        report.achieved_alpha = cw.achieved_alpha;
        report.sdp_alpha = report.trace.empty() ? 0.0 : report.trace.back().alpha_sdp;
        report.final_rank_residual = report.trace.empty() ? 0.0 : report.trace.back().rank_residual;
        report.rank_converged = report.final_rank_residual <= cfg.tol_rank;
        if (report.sdp_alpha > 0.0)
            report.relaxation_gap_flagged = cw.achieved_alpha < 0.85 * report.sdp_alpha;

        if (!have_best || cw.achieved_alpha > best_cw.achieved_alpha) {
            best_cw = cw;
            best_report = report;
            have_best = true;
        }
    }

    if (!have_best) throw DesignError("sca_design: every subproblem attempt failed");
    return {best_cw, best_report};
}

}  // namespace irscb
