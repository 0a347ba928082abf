// SPDX-License-Identifier: Apache-2.0

#include "irscb/sdp_solver.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace irscb {

namespace {

// Internally the problem is scaled by 1/Q^2: with hatted quantities
// a_hat_p = a_p / Q (so a_hat a_hat^H = A_p / Q^2), alpha_hat = alpha / Q^2,
// eta_hat = eta / Q^2, all constraint values live in [0, 1] for steering
// vectors and the barrier arithmetic stays well conditioned.
//
// Barrier subproblem for parameter mu, over strictly feasible (W, s, alpha):
//   maximize  alpha + eta u^H W u + mu [logdet W + sum_p log s_p]
//   s.t.      tr(A_p W) - s_p - alpha = 0,   W_qq = 1.
//
// The Newton step of the equality-constrained quadratic model reduces to a
// positive definite system in the constraint multipliers (xi for the sample
// rows, zt for the diagonal rows) bordered by the scalar d_alpha:
//
//   dW = (W R W)/mu + W = W (R + mu W^-1) W / mu,
//   R  = eta u u^H + sum_p xi_p A_p + Diag(zt),
//
//   [ G + diag(s^2)   H  ] [xi]     [mu 1]          [ -K - mu alpha 1 ]
//   [ H^T             J  ] [zt]  -  [ 0  ] dalpha = [ -mu 1 - c       ]
//   with the border  sum_p xi_p = 1.
//
// Block entries (all real, from the rank-one structure):
//   G_pp' = |a_p^H W a_p'|^2      H_pq = |(W a_p)_q|^2     J_qq' = |W_qq'|^2
//   K_p   = eta |a_p^H W u|^2     c_q  = eta |(W u)_q|^2
// The core matrix is a Gram matrix of {A_p, E_qq} under X -> W X W plus a
// positive diagonal, hence positive definite whenever W is.

struct ScaledProblem {
    int q = 0;
    int p = 0;
    CMatrix a_mat;  // Q x P, columns a_hat_p
    double eta_hat = 0.0;
    CVector u;  // unit vector or empty
};

struct State {
    CMatrix w;
    Eigen::LLT<CMatrix> llt;  // factorization of w, kept in sync
    Eigen::VectorXd s;
    double alpha = 0.0;

    bool refactor() {
        llt.compute(w);
        return llt.info() == Eigen::Success;
    }
};

struct NewtonStep {
    CMatrix dw;
    Eigen::VectorXd ds;
    double dalpha = 0.0;
    double decrement_sq = 0.0;
};

Eigen::VectorXd constraint_values(const ScaledProblem& pr, const CMatrix& w) {
    Eigen::VectorXd v(pr.p);
    const CMatrix wa = w * pr.a_mat;  // Q x P
    for (int j = 0; j < pr.p; ++j) v[j] = std::real(pr.a_mat.col(j).dot(wa.col(j)));
    return v;
}

double barrier_value(const ScaledProblem& pr, const State& st, double mu) {
    double logdet = 0.0;
    for (int i = 0; i < pr.q; ++i) logdet += 2.0 * std::log(std::real(st.llt.matrixLLT()(i, i)));
    double f = st.alpha + mu * logdet;
    if (pr.eta_hat > 0.0) f += pr.eta_hat * std::real(pr.u.dot(st.w * pr.u));
    for (int j = 0; j < pr.p; ++j) f += mu * std::log(st.s[j]);
    return f;
}

bool compute_newton(const ScaledProblem& pr, const State& st, double mu, NewtonStep& out) {
    const int q = pr.q;
    const int p = pr.p;
    const CMatrix wa = st.w * pr.a_mat;                        // Q x P
    const CMatrix awa = pr.a_mat.adjoint() * wa;               // P x P
    const Eigen::MatrixXd g_blk = awa.cwiseAbs2();             // G
    const Eigen::MatrixXd h_blk = wa.cwiseAbs2().transpose();  // P x Q
    const Eigen::MatrixXd j_blk = st.w.cwiseAbs2();            // J

    Eigen::VectorXd k_vec = Eigen::VectorXd::Zero(p);
    Eigen::VectorXd c_vec = Eigen::VectorXd::Zero(q);
    CVector wu;
    if (pr.eta_hat > 0.0) {
        wu = st.w * pr.u;
        k_vec = pr.eta_hat * (pr.a_mat.adjoint() * wu).cwiseAbs2();
        c_vec = pr.eta_hat * wu.cwiseAbs2();
    }

    const int n = p + q;
    Eigen::MatrixXd core(n, n);
    core.topLeftCorner(p, p) = g_blk;
    core.topLeftCorner(p, p).diagonal() += st.s.cwiseAbs2();
    core.topRightCorner(p, q) = h_blk;
    core.bottomLeftCorner(q, p) = h_blk.transpose();
    core.bottomRightCorner(q, q) = j_blk;

    Eigen::VectorXd rhs0(n), gcol(n);
    rhs0.head(p) = -k_vec.array() - mu * st.alpha;
    rhs0.tail(q) = (-c_vec).array() - mu;
    gcol.head(p).setConstant(mu);
    gcol.tail(q).setZero();

    Eigen::LDLT<Eigen::MatrixXd> ldlt(core);
    if (ldlt.info() != Eigen::Success) {
        // The Gram core degenerates as W approaches rank one; a relative
        // ridge keeps the factorization usable and refinement corrects it.
        Eigen::MatrixXd reg = core;
        reg.diagonal().array() += 1e-12 * (1.0 + core.diagonal().maxCoeff());
        ldlt.compute(reg);
        if (ldlt.info() != Eigen::Success) return false;
    }
    auto refined_solve = [&](const Eigen::VectorXd& b) {
        Eigen::VectorXd x = ldlt.solve(b);
        x += ldlt.solve(b - core * x);  // one round of iterative refinement
        return x;
    };
    const Eigen::VectorXd v1 = refined_solve(rhs0);
    const Eigen::VectorXd v2 = refined_solve(gcol);
    const double denom = v2.head(p).sum();
    if (!(std::abs(denom) > 1e-300)) return false;
    const double dalpha = (1.0 - v1.head(p).sum()) / denom;
    const Eigen::VectorXd sol = v1 + dalpha * v2;
    const Eigen::VectorXd xi = sol.head(p);
    const Eigen::VectorXd zt = sol.tail(q);

    // R~ = R + mu W^-1; forming it first avoids the huge intermediate that
    // cancels against +W at small mu.
    CMatrix r = pr.a_mat * xi.asDiagonal() * pr.a_mat.adjoint();
    if (pr.eta_hat > 0.0) r += pr.eta_hat * (pr.u * pr.u.adjoint());
    r += CMatrix(zt.cast<cdouble>().asDiagonal());
    r += mu * st.llt.solve(CMatrix::Identity(q, q));
    r = 0.5 * (r + r.adjoint()).eval();

    CMatrix dw = (st.w * r * st.w) / mu;
    dw = 0.5 * (dw + dw.adjoint()).eval();
    dw.diagonal().setZero();  // exact: the model enforces dW_qq = 0

    Eigen::VectorXd ds(p);
    for (int j = 0; j < p; ++j)
        ds[j] = std::real(pr.a_mat.col(j).dot(dw * pr.a_mat.col(j))) - dalpha;

    // Affine-invariant Newton decrement:
    // lambda^2 = ||W^-1/2 dW W^-1/2||_F^2 + sum (ds/s)^2.
    const CMatrix l_inv_dw = st.llt.matrixL().solve(dw);
    const CMatrix m_tilde = st.llt.matrixL().solve(l_inv_dw.adjoint()).adjoint();
    double dec = m_tilde.squaredNorm();
    for (int j = 0; j < p; ++j) {
        const double r1 = ds[j] / st.s[j];
        dec += r1 * r1;
    }

    out.dw = std::move(dw);
    out.ds = std::move(ds);
    out.dalpha = dalpha;
    out.decrement_sq = dec;
    return std::isfinite(dec);
}

}  // namespace

SdpResult solve_gain_floor_sdp(const std::vector<CVector>& constraint_vectors, double eta,
                               const CVector& u, const SdpOptions& opt) {
    if (constraint_vectors.empty())
        throw std::invalid_argument("solve_gain_floor_sdp: need at least one constraint");
    const int q = static_cast<int>(constraint_vectors.front().size());
    for (const auto& a : constraint_vectors)
        if (a.size() != q)
            throw std::invalid_argument("solve_gain_floor_sdp: constraint dimension mismatch");
    if (eta < 0.0) throw std::invalid_argument("solve_gain_floor_sdp: eta must be >= 0");
    if (eta > 0.0 && u.size() != q)
        throw std::invalid_argument("solve_gain_floor_sdp: linearization vector dimension mismatch");

    ScaledProblem pr;
    pr.q = q;
    pr.p = static_cast<int>(constraint_vectors.size());
    const double q2 = static_cast<double>(q) * q;
    pr.a_mat.resize(q, pr.p);
    for (int j = 0; j < pr.p; ++j)
        pr.a_mat.col(j) = constraint_vectors[static_cast<std::size_t>(j)] / q;
    pr.eta_hat = eta / q2;
    if (pr.eta_hat > 0.0) pr.u = u.normalized();

    const double mu_cold = 0.1 * std::max(1.0, pr.eta_hat);
    State st;
    double mu;
    bool warm = false;
    if (opt.warm_start != nullptr && opt.warm_start->rows() == q) {
        warm = true;
        mu = std::min(std::max(opt.warm_mu0, 1e-8 * mu_cold), mu_cold);
        // Blend and slack floor follow the requested depth so the start sits
        // near the central path at mu rather than at an arbitrary interior
        // point.
        const double tau = std::clamp(mu, 1e-8, 1e-3);
        st.w = (1.0 - tau) * (*opt.warm_start) + tau * CMatrix::Identity(q, q);
        st.w = 0.5 * (st.w + st.w.adjoint()).eval();
        st.w.diagonal().setOnes();
    } else {
        st.w = CMatrix::Identity(q, q);
        mu = mu_cold;
    }
    {
        const Eigen::VectorXd cons = constraint_values(pr, st.w);
        const double slack0 = warm ? std::max(mu * pr.p, 1e-9) : std::max(0.05, 0.1 * cons.minCoeff());
        st.alpha = cons.minCoeff() - slack0;
        st.s = cons.array() - st.alpha;
        if (st.s.minCoeff() <= 0.0 || !st.refactor()) {  // degenerate warm start
            st.w = CMatrix::Identity(q, q);
            const Eigen::VectorXd c2 = constraint_values(pr, st.w);
            st.alpha = c2.minCoeff() - 0.05;
            st.s = c2.array() - st.alpha;
            mu = mu_cold;
            st.refactor();
        }
    }
    // A warm start that is still far from the central path at mu needs a
    // larger barrier weight first; escalate until the decrement is tame.
    if (mu < mu_cold) {
        for (int probe = 0; probe < 8 && mu < mu_cold; ++probe) {
            NewtonStep step;
            if (compute_newton(pr, st, mu, step) && step.decrement_sq <= 25.0) break;
            mu = std::min(mu * 30.0, mu_cold);
        }
    }

    SdpResult res;
    // Floor mu against the conditioning regime: near the boundary the primal
    // Newton step loses ~cond(W) digits, and cond grows like eta_hat / mu.
    const double mu_min =
        std::max(opt.gap_tol / (q + pr.p), 1e-11 * std::max(1.0, pr.eta_hat));
    int used = 0;
    bool failed = false;

    bool stalled = false;
    while (mu > mu_min && !failed && !stalled) {
        int tiny_gains = 0;
        for (int inner = 0;; ++inner) {
            if (inner >= opt.max_inner_steps) {
                // Could not center this level; deeper levels will not do
                // better, so stop at the accuracy reached.
                stalled = true;
                break;
            }
            if (used >= opt.max_newton_steps) break;
            NewtonStep step;
            if (!compute_newton(pr, st, mu, step)) {
                // The iterate is feasible; stop at the accuracy reached
                // rather than discarding it.
                stalled = true;
                break;
            }
            ++used;

            double t_s = std::numeric_limits<double>::infinity();
            for (int j = 0; j < pr.p; ++j)
                if (step.ds[j] < 0.0) t_s = std::min(t_s, -st.s[j] / step.ds[j]);
            double t = std::min(1.0, 0.995 * t_s);

            const double f0 = barrier_value(pr, st, mu);
            const double slope = mu * step.decrement_sq;  // <grad f, step>
            bool accepted = false;
            double gain = 0.0;
            State trial;
            for (int bt = 0; bt < 48 && t > 1e-14; ++bt) {
                trial.w = st.w + t * step.dw;
                trial.w = 0.5 * (trial.w + trial.w.adjoint()).eval();
                trial.w.diagonal().setOnes();
                trial.s = st.s + t * step.ds;
                trial.alpha = st.alpha + t * step.dalpha;
                if (trial.s.minCoeff() <= 0.0 || !trial.refactor()) {
                    t *= 0.35;
                    continue;
                }
                const double f1 = barrier_value(pr, trial, mu);
                if (f1 >= f0 + 0.01 * t * slope || (t < 1e-10 && f1 >= f0)) {
                    gain = f1 - f0;
                    st = std::move(trial);
                    accepted = true;
                    break;
                }
                t *= 0.35;
            }
            if (!accepted) break;  // no ascent available at this mu
            if (step.decrement_sq <= opt.newton_decrement_tol * opt.newton_decrement_tol) break;
            // Numerical stagnation guard: ascent exists but is below noise.
            if (gain <= 1e-13 * std::max(1.0, std::abs(f0))) {
                if (++tiny_gains >= 2) {
                    stalled = true;
                    break;
                }
            } else {
                tiny_gains = 0;
            }
        }
        if (used >= opt.max_newton_steps) break;
        if (!stalled) mu *= opt.mu_shrink;
    }

    // Rebuild exact feasibility data at the final iterate.
    const Eigen::VectorXd cons = constraint_values(pr, st.w);
    res.w = st.w;
    res.alpha = cons.minCoeff() * q2;
    res.objective = res.alpha;
    if (pr.eta_hat > 0.0) res.objective += eta * std::real(pr.u.dot(st.w * pr.u));
    res.gap = mu * (q + pr.p) * q2 / opt.mu_shrink;  // last completed mu level
    res.mu_final = mu / opt.mu_shrink;
    res.newton_steps = used;
    if (failed) {
        res.status = SdpStatus::kNumericalFailure;
    } else if (res.mu_final <= 100.0 * mu_min ||
               res.mu_final * (q + pr.p) <= 1e3 * opt.gap_tol * std::max(1.0, pr.eta_hat)) {
        // Reached the requested depth, or stalled at working precision with
        // a gap within three orders of the target (still a tiny fraction of
        // the Q^2 objective scale); `gap` carries the achieved accuracy.
        res.status = SdpStatus::kOptimal;
    } else {
        res.status = SdpStatus::kIterationLimit;
    }
    if (getenv("IRSCB_SDP_VERBOSE"))
        std::fprintf(stderr, "[sdp] q=%d p=%d eta=%.3g newton=%d mu_final=%.2e status=%d\n", q,
                     pr.p, eta, used, res.mu_final, static_cast<int>(res.status));
    return res;
}

}  // namespace irscb
