// SPDX-License-Identifier: Apache-2.0

#include "irscb/lp_solver.hpp"

#include <Eigen/Cholesky>

#include <cmath>

namespace irscb {

void LpProblem::validate() const {
    if (n <= 0 || m < 0) throw std::invalid_argument("LpProblem: bad dimensions");
    if (static_cast<int>(cols.size()) != n || c.size() != n || lo.size() != n || hi.size() != n ||
        b.size() != m)
        throw std::invalid_argument("LpProblem: inconsistent sizes");
    for (int j = 0; j < n; ++j) {
        if (!(lo[j] <= hi[j])) throw std::invalid_argument("LpProblem: empty box");
        if (!std::isfinite(lo[j]) || !std::isfinite(hi[j]))
            throw std::invalid_argument("LpProblem: bounds must be finite");
        for (const auto& [r, v] : cols[static_cast<std::size_t>(j)])
            if (r < 0 || r >= m) throw std::invalid_argument("LpProblem: row index out of range");
    }
}

namespace {

struct Reduced {
    std::vector<int> free_cols;          // original indices
    std::vector<int> col_of_original;    // -1 if fixed
    Eigen::VectorXd b;                   // after moving fixed columns
    double fixed_objective = 0.0;
};

Reduced reduce(const LpProblem& lp) {
    Reduced rd;
    rd.col_of_original.assign(static_cast<std::size_t>(lp.n), -1);
    rd.b = lp.b;
    for (int j = 0; j < lp.n; ++j) {
        if (lp.lo[j] == lp.hi[j]) {
            const double v = lp.lo[j];
            rd.fixed_objective += lp.c[j] * v;
            if (v != 0.0)
                for (const auto& [r, a] : lp.cols[static_cast<std::size_t>(j)]) rd.b[r] -= a * v;
        } else {
            rd.col_of_original[static_cast<std::size_t>(j)] = static_cast<int>(rd.free_cols.size());
            rd.free_cols.push_back(j);
        }
    }
    return rd;
}

}  // namespace

LpResult solve_box_lp(const LpProblem& lp, const LpOptions& opt) {
    lp.validate();
    LpResult res;
    const Reduced rd = reduce(lp);
    const int n = static_cast<int>(rd.free_cols.size());
    const int m = lp.m;

    Eigen::VectorXd x_full = lp.lo;  // fixed entries already at their value

    if (n == 0) {
        res.x = x_full;
        res.y = Eigen::VectorXd::Zero(m);
        res.objective = rd.fixed_objective;
        res.safe_upper_bound = rd.fixed_objective + 1e-9 * (1.0 + std::abs(rd.fixed_objective));
        res.status = rd.b.cwiseAbs().maxCoeff() <= 1e-7 ? LpStatus::kOptimal
                                                        : LpStatus::kNumericalFailure;
        return res;
    }

    Eigen::VectorXd c(n), lo(n), hi(n);
    for (int j = 0; j < n; ++j) {
        c[j] = lp.c[rd.free_cols[static_cast<std::size_t>(j)]];
        lo[j] = lp.lo[rd.free_cols[static_cast<std::size_t>(j)]];
        hi[j] = lp.hi[rd.free_cols[static_cast<std::size_t>(j)]];
    }

    // Interior start.
    Eigen::VectorXd x = 0.5 * (lo + hi);
    Eigen::VectorXd y = Eigen::VectorXd::Zero(m);
    Eigen::VectorXd zl = Eigen::VectorXd::Ones(n);
    Eigen::VectorXd zu = Eigen::VectorXd::Ones(n);

    auto mat_vec = [&](const Eigen::VectorXd& v) {  // A v (free columns)
        Eigen::VectorXd out = Eigen::VectorXd::Zero(m);
        for (int j = 0; j < n; ++j)
            for (const auto& [r, a] : lp.cols[static_cast<std::size_t>(rd.free_cols[static_cast<std::size_t>(j)])])
                out[r] += a * v[j];
        return out;
    };
    auto mat_t_vec = [&](const Eigen::VectorXd& v) {  // A^T v
        Eigen::VectorXd out(n);
        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (const auto& [r, a] : lp.cols[static_cast<std::size_t>(rd.free_cols[static_cast<std::size_t>(j)])])
                s += a * v[r];
            out[j] = s;
        }
        return out;
    };

    const double bn = 1.0 + rd.b.cwiseAbs().maxCoeff();
    const double cn = 1.0 + c.cwiseAbs().maxCoeff();
    bool converged = false;
    int it = 0;

    for (; it < opt.max_iterations; ++it) {
        const Eigen::VectorXd xl = x - lo;
        const Eigen::VectorXd xu = hi - x;
        const Eigen::VectorXd rp = rd.b - mat_vec(x);
        const Eigen::VectorXd rdual = c - mat_t_vec(y) + zl - zu;
        const double gap = xl.dot(zl) + xu.dot(zu);
        const double obj = c.dot(x) + rd.fixed_objective;

        if (rp.cwiseAbs().maxCoeff() <= opt.tolerance * bn &&
            rdual.cwiseAbs().maxCoeff() <= opt.tolerance * cn &&
            gap <= opt.tolerance * (1.0 + std::abs(obj))) {
            converged = true;
            break;
        }

        const Eigen::VectorXd d = zl.cwiseQuotient(xl) + zu.cwiseQuotient(xu);
        const Eigen::VectorXd dinv = d.cwiseInverse();

        // Normal-equations matrix A D^-1 A^T, built from column outer products.
        Eigen::MatrixXd nm = Eigen::MatrixXd::Zero(m, m);
        for (int j = 0; j < n; ++j) {
            const auto& col = lp.cols[static_cast<std::size_t>(rd.free_cols[static_cast<std::size_t>(j)])];
            const double w = dinv[j];
            for (std::size_t a1 = 0; a1 < col.size(); ++a1)
                for (std::size_t a2 = 0; a2 <= a1; ++a2)
                    nm(col[a1].first, col[a2].first) += w * col[a1].second * col[a2].second;
        }
        nm.triangularView<Eigen::StrictlyUpper>() = nm.transpose();
        nm.diagonal().array() += 1e-12 * (1.0 + nm.diagonal().maxCoeff());
        Eigen::LLT<Eigen::MatrixXd> llt(nm);
        if (llt.info() != Eigen::Success) break;

        auto solve_direction = [&](const Eigen::VectorXd& rl, const Eigen::VectorXd& ru,
                                   Eigen::VectorXd& dx, Eigen::VectorXd& dy,
                                   Eigen::VectorXd& dzl, Eigen::VectorXd& dzu) {
            const Eigen::VectorXd g = rdual + rl.cwiseQuotient(xl) - ru.cwiseQuotient(xu);
            const Eigen::VectorXd rhs = mat_vec(dinv.cwiseProduct(g)) - rp;
            dy = llt.solve(rhs);
            dx = dinv.cwiseProduct(g - mat_t_vec(dy));
            dzl = (rl - zl.cwiseProduct(dx)).cwiseQuotient(xl);
            dzu = (ru + zu.cwiseProduct(dx)).cwiseQuotient(xu);
        };

        auto step_lengths = [&](const Eigen::VectorXd& dx, const Eigen::VectorXd& dzl,
                                const Eigen::VectorXd& dzu) {
            double ap = 1.0, ad = 1.0;
            for (int j = 0; j < n; ++j) {
                if (dx[j] < 0.0) ap = std::min(ap, -xl[j] / dx[j]);
                if (dx[j] > 0.0) ap = std::min(ap, xu[j] / dx[j]);
                if (dzl[j] < 0.0) ad = std::min(ad, -zl[j] / dzl[j]);
                if (dzu[j] < 0.0) ad = std::min(ad, -zu[j] / dzu[j]);
            }
            return std::pair<double, double>(ap, ad);
        };

        // Affine (predictor) direction.
        Eigen::VectorXd dx_a, dy_a, dzl_a, dzu_a;
        solve_direction(-xl.cwiseProduct(zl), -xu.cwiseProduct(zu), dx_a, dy_a, dzl_a, dzu_a);
        auto [apa, ada] = step_lengths(dx_a, dzl_a, dzu_a);
        const double gap_aff = (xl + apa * dx_a).dot(zl + ada * dzl_a) +
                               (xu - apa * dx_a).dot(zu + ada * dzu_a);
        const double mu = gap / (2.0 * n);
        double sigma = std::pow(std::max(gap_aff, 0.0) / std::max(gap, 1e-300), 3);
        sigma = std::min(sigma, 0.99);

        // Corrector.
        const Eigen::VectorXd rl =
            Eigen::VectorXd::Constant(n, sigma * mu) - xl.cwiseProduct(zl) -
            dx_a.cwiseProduct(dzl_a);
        const Eigen::VectorXd ru =
            Eigen::VectorXd::Constant(n, sigma * mu) - xu.cwiseProduct(zu) +
            dx_a.cwiseProduct(dzu_a);
        Eigen::VectorXd dx, dy, dzl, dzu;
        solve_direction(rl, ru, dx, dy, dzl, dzu);
        auto [ap, ad] = step_lengths(dx, dzl, dzu);
        ap = std::min(1.0, 0.9995 * ap);
        ad = std::min(1.0, 0.9995 * ad);

        x += ap * dx;
        y += ad * dy;
        zl += ad * dzl;
        zu += ad * dzu;
        if (!(x.array().isFinite().all() && y.array().isFinite().all())) break;
    }

    for (int j = 0; j < n; ++j) x_full[rd.free_cols[static_cast<std::size_t>(j)]] = x[j];
    res.x = x_full;
    res.y = y;
    res.iterations = it;
    res.objective = lp.c.dot(x_full);
    res.status = converged ? LpStatus::kOptimal
                           : (it >= opt.max_iterations ? LpStatus::kIterationLimit
                                                       : LpStatus::kNumericalFailure);

    // Rigorous upper bound from the equality multipliers (any y is valid).
    Eigen::VectorXd r = lp.c;
    for (int j = 0; j < lp.n; ++j) {
        double s = 0.0;
        for (const auto& [row, a] : lp.cols[static_cast<std::size_t>(j)]) s += a * y[row];
        r[j] -= s;
    }
    double bound = lp.b.dot(y);
    for (int j = 0; j < lp.n; ++j) bound += std::max(r[j] * lp.lo[j], r[j] * lp.hi[j]);
    res.safe_upper_bound = bound + 1e-9 * (1.0 + std::abs(bound));
    return res;
}

}  // namespace irscb
