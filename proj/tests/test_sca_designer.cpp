// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "irscb/rng.hpp"
#include "irscb/sca_designer.hpp"

using namespace irscb;

namespace {

CVector random_unit_modulus(int q, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, kTwoPi);
    CVector v(q);
    for (int i = 0; i < q; ++i) v[i] = std::polar(1.0, u(rng));
    return v;
}

CMatrix random_psd(int q, std::mt19937_64& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    CMatrix m(q, q);
    for (int i = 0; i < q; ++i)
        for (int j = 0; j < q; ++j) m(i, j) = cdouble(n(rng), n(rng));
    return m * m.adjoint() / q;
}

double spectral_norm(const CMatrix& m) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().maxCoeff();
}

}  // namespace

TEST_CASE("constraint matrices are unit-modulus rank-one lifts") {
    IrsGeometry g{2, 2, 0.5, 0.5};
    SUBCASE("broadside sample gives the all-ones matrix") {
        SampleSet s;
        s.points_y = {0.0};
        s.points_z = {0.0};
        const auto mats = constraint_matrices(g, s);
        REQUIRE(mats.size() == 1);
        CHECK((mats[0] - CMatrix::Ones(4, 4)).norm() <= 1e-12);
    }
    SUBCASE("trace Q, rank one, unit-modulus entries") {
        SampleSet s;
        s.points_y = {0.37, -0.2};
        s.points_z = {0.11};
        for (const CMatrix& a : constraint_matrices(g, s)) {
            CHECK(std::real(a.trace()) == doctest::Approx(4.0).epsilon(1e-12));
            Eigen::SelfAdjointEigenSolver<CMatrix> es(a, Eigen::EigenvaluesOnly);
            CHECK(es.eigenvalues().head(3).cwiseAbs().maxCoeff() <= 1e-9);
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j) CHECK(std::abs(std::abs(a(i, j)) - 1.0) <= 1e-12);
        }
    }
    SUBCASE("entries match the explicit phase-difference form") {
        SampleSet s;
        s.points_y = {0.5};
        s.points_z = {0.0};
        const CMatrix a = constraint_matrices(g, s)[0];
        const double kd = kTwoPi * 0.5 * 0.5;  // k d beta
        for (int qy = 0; qy < 2; ++qy)
            for (int qz = 0; qz < 2; ++qz)
                for (int ry = 0; ry < 2; ++ry)
                    for (int rz = 0; rz < 2; ++rz) {
                        const cdouble expect = std::polar(1.0, kd * (qy - ry));
                        CHECK(std::abs(a(qy * 2 + qz, ry * 2 + rz) - expect) <= 1e-12);
                    }
    }
}

TEST_CASE("first-order spectral bound") {
    auto rng = make_rng(5);
    SUBCASE("exact at the expansion point") {
        const CMatrix w = random_psd(5, rng);
        CHECK(taylor_spectral_lower_bound(w, w) == doctest::Approx(spectral_norm(w)).epsilon(1e-12));
    }
    SUBCASE("two-by-two diagonal case stays below the true norm") {
        const CMatrix eye = CMatrix::Identity(2, 2);
        CMatrix target = CMatrix::Zero(2, 2);
        target(0, 0) = 3.0;
        target(1, 1) = 1.0;
        const double bound = taylor_spectral_lower_bound(eye, target);
        CHECK(bound <= 3.0 + 1e-12);
        CHECK(bound >= 1.0 - 1e-12);  // both eigenvector choices give >= 1
    }
    SUBCASE("never exceeds the spectral norm on random pairs") {
        for (int t = 0; t < 100; ++t) {
            const int q = 2 + static_cast<int>(rng() % 7);
            const CMatrix w0 = random_psd(q, rng);
            const CMatrix w1 = random_psd(q, rng);
            CHECK(taylor_spectral_lower_bound(w0, w1) <= spectral_norm(w1) + 1e-9);
        }
    }
}

TEST_CASE("convex subproblem") {
    IrsGeometry g{4, 4, 0.5, 0.5};
    SUBCASE("point target reaches the analytic optimum") {
        SampleSet s;
        s.points_y = {0.25};
        s.points_z = {0.1};
        const auto a = constraint_vectors(g, s);
        const CMatrix w0 = CMatrix::Identity(16, 16);
        const SubproblemResult r = solve_convex_subproblem(a, w0, 0.0);
        CHECK(r.status == SdpStatus::kOptimal);
        CHECK(r.alpha >= 0.999 * 256.0);
    }
    SUBCASE("one-element problem is trivial") {
        IrsGeometry g1{1, 1, 0.5, 0.5};
        SampleSet s;
        s.points_y = {0.4};
        s.points_z = {0.4};
        const auto a = constraint_vectors(g1, s);
        const SubproblemResult r = solve_convex_subproblem(a, CMatrix::Identity(1, 1), 0.0);
        CHECK(r.alpha == doctest::Approx(1.0).epsilon(1e-9));
    }
    SUBCASE("dominant penalty keeps a rank-one previous iterate rank-one") {
        SampleSet s;
        s.points_y = {-0.1, 0.1};
        s.points_z = {0.0};
        const auto a = constraint_vectors(g, s);
        const CVector w = steering_vector(g, {0.0, 0.0});
        const CMatrix w0 = w * w.adjoint();
        const SubproblemResult r = solve_convex_subproblem(a, w0, 1e6);
        REQUIRE(r.status == SdpStatus::kOptimal);
        Eigen::SelfAdjointEigenSolver<CMatrix> es(r.w, Eigen::EigenvaluesOnly);
        const double rank_residual = std::real(r.w.trace()) - es.eigenvalues().maxCoeff();
        CHECK(rank_residual <= 1e-4);
    }
}

TEST_CASE("rank-one recovery") {
    auto rng = make_rng(9);
    SUBCASE("exact rank-one lift recovers the gauge-fixed phases") {
        const CVector a = random_unit_modulus(6, rng);
        const CMatrix w = a * a.adjoint();
        const Codeword cw = rank_one_recovery(w);
        REQUIRE(cw.phases.size() == 6);
        CHECK(cw.phases[0] == 0.0);
        for (int i = 0; i < 6; ++i) {
            const double expect = std::remainder(std::arg(a[i]) - std::arg(a[0]), kTwoPi);
            CHECK(std::abs(std::remainder(cw.phases[static_cast<std::size_t>(i)] - expect, kTwoPi)) <=
                  1e-9);
        }
    }
    SUBCASE("identity is a documented degenerate case") {
        const Codeword cw = rank_one_recovery(CMatrix::Identity(2, 2));
        CHECK(cw.phases[0] == 0.0);
        for (double ph : cw.phases) CHECK(std::isfinite(ph));
        const CVector w = cw.weights();
        for (int i = 0; i < 2; ++i) CHECK(std::abs(std::abs(w[i]) - 1.0) <= 1e-15);
    }
    SUBCASE("mild mixing perturbs phases by less than 0.2 rad") {
        for (int t = 0; t < 20; ++t) {
            const int q = 8;
            const CVector a = random_unit_modulus(q, rng);
            CVector b = random_unit_modulus(q, rng);
            if (std::abs(a.dot(b)) / q > 0.3) continue;  // keep the overlap small
            const CMatrix w = 0.9 * (a * a.adjoint()) + 0.1 * (b * b.adjoint());
            const Codeword cw = rank_one_recovery(w);
            for (int i = 0; i < q; ++i) {
                const double expect = std::remainder(std::arg(a[i]) - std::arg(a[0]), kTwoPi);
                CHECK(std::abs(std::remainder(cw.phases[static_cast<std::size_t>(i)] - expect,
                                              kTwoPi)) <= 0.2);
            }
        }
    }
}

TEST_CASE("full design on a point target") {
    IrsGeometry g{4, 4, 0.5, 0.5};
    SampleSet s;
    s.points_y = {0.1};
    s.points_z = {-0.2};
    ScaConfig cfg;
    cfg.rng_seed = 7;
    auto [cw, report] = sca_design(g, s, cfg);
    CHECK(cw.achieved_alpha >= 0.99 * 256.0);
    CHECK(report.iterations >= 1);
    CHECK(report.rank_converged);
    CHECK(report.objective_trace().size() == static_cast<std::size_t>(report.iterations));
    CHECK(report.rank_residual_trace().size() == static_cast<std::size_t>(report.iterations));
}

TEST_CASE("one-element design") {
    IrsGeometry g{1, 1, 0.5, 0.5};
    SampleSet s;
    s.points_y = {0.7};
    s.points_z = {-0.7};
    auto [cw, report] = sca_design(g, s, ScaConfig{});
    REQUIRE(cw.phases.size() == 1);
    CHECK(cw.phases[0] == 0.0);
    CHECK(cw.achieved_alpha == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("symmetric data produce a symmetric pattern") {
    IrsGeometry g{4, 4, 0.5, 0.5};
    const BetaInterval iv{-0.15, 0.15};
    const SampleSet s = sample_box(iv, iv, 3, 3);
    ScaConfig cfg;
    cfg.rng_seed = 13;
    auto [cw, report] = sca_design(g, s, cfg);
    for (double b : {0.02, 0.07, 0.11, 0.15, 0.31}) {
        const double gp = std::norm(response(g, cw, {b, b}));
        const double gm = std::norm(response(g, cw, {-b, -b}));
        CHECK(std::abs(gp - gm) <= 1e-3 * std::max(1.0, std::max(gp, gm)));
    }
}

TEST_CASE("per-iteration ascent of the penalized objective") {
    IrsGeometry g{3, 3, 0.5, 0.5};
    const SampleSet s = sample_box({-0.2, 0.2}, {-0.2, 0.2}, 3, 3);
    ScaConfig cfg;
    cfg.rng_seed = 21;
    auto [cw, report] = sca_design(g, s, cfg);
    for (const auto& rec : report.trace)
        CHECK(rec.objective_after >= rec.objective_before - 1e-6);
}

TEST_CASE("design determinism") {
    IrsGeometry g{3, 3, 0.5, 0.5};
    const SampleSet s = sample_box({-0.3, 0.1}, {0.0, 0.25}, 3, 2);
    ScaConfig cfg;
    cfg.rng_seed = 4242;
    auto [cw1, r1] = sca_design(g, s, cfg);
    auto [cw2, r2] = sca_design(g, s, cfg);
    REQUIRE(cw1.phases.size() == cw2.phases.size());
    for (std::size_t i = 0; i < cw1.phases.size(); ++i) CHECK(cw1.phases[i] == cw2.phases[i]);
    CHECK(cw1.achieved_alpha == cw2.achieved_alpha);
}

TEST_CASE("config validation") {
    ScaConfig c;
    c.eta_growth = 1.0;
    CHECK_THROWS_AS(c.resolved(4), std::invalid_argument);
    ScaConfig c2;
    c2.i_max = 0;
    CHECK_THROWS_AS(c2.resolved(4), std::invalid_argument);
    ScaConfig c3;
    CHECK_NOTHROW(c3.resolved(16));
    CHECK(c3.resolved(16).eta_init == doctest::Approx(1e-5 * 256.0));
    CHECK(c3.resolved(16).tol_rank == doctest::Approx(1e-5 * 16.0));
}
