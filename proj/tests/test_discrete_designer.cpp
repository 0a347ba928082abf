// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "irscb/discrete_designer.hpp"
#include "irscb/rng.hpp"

using namespace irscb;

namespace {

BinaryAssignment random_assignment(int q, int levels, std::mt19937_64& rng) {
    BinaryAssignment asg;
    asg.levels = levels;
    asg.level.resize(static_cast<std::size_t>(q));
    for (auto& l : asg.level) l = static_cast<int>(rng() % static_cast<unsigned>(levels));
    return asg;
}

SampleSet random_samples(std::mt19937_64& rng, int ny, int nz) {
    std::uniform_real_distribution<double> ub(-0.9, 0.9);
    SampleSet s;
    for (int i = 0; i < ny; ++i) s.points_y.push_back(ub(rng));
    for (int i = 0; i < nz; ++i) s.points_z.push_back(ub(rng));
    return s;
}

}  // namespace

TEST_CASE("alphabet construction") {
    const PhaseAlphabet a = PhaseAlphabet::from_bits(2);
    CHECK(a.levels == 4);
    CHECK(a.delta == doctest::Approx(kPi / 2.0));
    REQUIRE(a.base.size() == 4);
    CHECK(a.base[3] == doctest::Approx(3.0 * kPi / 2.0));
    REQUIRE(a.ext.size() == 7);
    for (int u = 0; u < 7; ++u) CHECK(a.ext[static_cast<std::size_t>(u)] == doctest::Approx(-a.ext[static_cast<std::size_t>(6 - u)]));
    CHECK(a.ext_index(0) == 3);
    CHECK_THROWS_AS(PhaseAlphabet::from_bits(0), std::invalid_argument);
}

TEST_CASE("two-element program matches 2 + 2 cos") {
    IrsGeometry g{2, 1, 0.5, 0.5};
    SampleSet s;
    s.points_y = {0.0};
    s.points_z = {0.0};
    const PhaseAlphabet a = PhaseAlphabet::from_bits(2);
    const DiscreteProgram pr = build_discrete_program(g, s, a);
    for (int l0 = 0; l0 < 4; ++l0)
        for (int l1 = 0; l1 < 4; ++l1) {
            BinaryAssignment asg;
            asg.levels = 4;
            asg.level = {l0, l1};
            const double expect = 2.0 + 2.0 * std::cos(a.base[static_cast<std::size_t>(l0)] -
                                                       a.base[static_cast<std::size_t>(l1)]);
            CHECK(pr.row_value(0, asg) == doctest::Approx(expect).epsilon(1e-12));
            CHECK(pr.exact_gain(0, asg) == doctest::Approx(expect).epsilon(1e-12));
        }
}

TEST_CASE("linearized rows equal the exact quadratic form") {
    auto rng = make_rng(3);
    for (int t = 0; t < 60; ++t) {
        const int qy = 2 + static_cast<int>(rng() % 2);
        const int qz = 1 + static_cast<int>(rng() % 3);
        IrsGeometry g{qy, qz, 0.5, 0.5};
        const int bits = 1 + static_cast<int>(rng() % 2);
        const PhaseAlphabet a = PhaseAlphabet::from_bits(bits);
        const SampleSet s = random_samples(rng, 1 + static_cast<int>(rng() % 2), 1);
        const DiscreteProgram pr = build_discrete_program(g, s, a);
        for (int k = 0; k < 5; ++k) {
            const BinaryAssignment asg = random_assignment(g.element_count(), a.levels, rng);
            for (int r = 0; r < static_cast<int>(pr.sample_vectors.size()); ++r)
                CHECK(std::abs(pr.row_value(r, asg) - pr.exact_gain(r, asg)) <= 1e-9);
        }
    }
}

TEST_CASE("quadratic form is real and gauge invariant") {
    auto rng = make_rng(31);
    IrsGeometry g{3, 2, 0.5, 0.5};
    const PhaseAlphabet a = PhaseAlphabet::from_bits(2);
    const SampleSet s = random_samples(rng, 2, 1);
    const DiscreteProgram pr = build_discrete_program(g, s, a);
    for (int t = 0; t < 40; ++t) {
        const BinaryAssignment asg = random_assignment(6, 4, rng);
        // Realness of w^H A w computed as a complex double sum.
        for (int r = 0; r < 2; ++r) {
            const CVector& av = pr.sample_vectors[static_cast<std::size_t>(r)];
            cdouble acc(0, 0);
            for (int i = 0; i < 6; ++i)
                for (int j = 0; j < 6; ++j)
                    acc += std::polar(1.0, -a.base[static_cast<std::size_t>(asg.level[static_cast<std::size_t>(i)])]) *
                           av[i] * std::conj(av[j]) *
                           std::polar(1.0, a.base[static_cast<std::size_t>(asg.level[static_cast<std::size_t>(j)])]);
            CHECK(std::abs(acc.imag()) <= 1e-9);
        }
        // Constant level shift (mod S) leaves every row unchanged.
        for (int shift = 1; shift < 4; ++shift) {
            BinaryAssignment shifted = asg;
            for (auto& l : shifted.level) l = (l + shift) % 4;
            for (int r = 0; r < 2; ++r)
                CHECK(std::abs(pr.row_value(r, asg) - pr.row_value(r, shifted)) <= 1e-9);
        }
    }
}

TEST_CASE("pair selector reversal") {
    auto rng = make_rng(5);
    const BinaryAssignment asg = random_assignment(5, 4, rng);
    const PhaseAlphabet a = PhaseAlphabet::from_bits(2);
    for (int q = 0; q < 5; ++q)
        for (int i = 0; i < 5; ++i)
            CHECK(a.ext[static_cast<std::size_t>(asg.y_selector(q, i))] ==
                  doctest::Approx(-a.ext[static_cast<std::size_t>(asg.y_selector(i, q))]));
}

TEST_CASE("branch and bound on tiny instances") {
    SUBCASE("two elements, one bit, broadside") {
        IrsGeometry g{2, 1, 0.5, 0.5};
        SampleSet s;
        s.points_y = {0.0};
        s.points_z = {0.0};
        const DiscreteProgram pr = build_discrete_program(g, s, PhaseAlphabet::from_bits(1));
        const BnbResult r = solve_exact_bnb(pr);
        CHECK(r.alpha == 4.0);
        CHECK(r.optimal);
        CHECK(r.assignment.level == std::vector<int>({0, 0}));
    }
    SUBCASE("single element") {
        IrsGeometry g{1, 1, 0.5, 0.5};
        SampleSet s;
        s.points_y = {0.4};
        s.points_z = {0.1};
        const DiscreteProgram pr = build_discrete_program(g, s, PhaseAlphabet::from_bits(2));
        const BnbResult r = solve_exact_bnb(pr);
        CHECK(r.alpha == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(r.optimal);
    }
    SUBCASE("3x3 one-bit single point equals the oracle exactly") {
        IrsGeometry g{3, 3, 0.5, 0.5};
        SampleSet s;
        s.points_y = {0.21};
        s.points_z = {-0.47};
        const PhaseAlphabet a = PhaseAlphabet::from_bits(1);
        const DiscreteProgram pr = build_discrete_program(g, s, a);
        const BinaryAssignment warm = quantized_steering_assignment(g, s, a);
        const BnbResult r = solve_exact_bnb(pr, {}, &warm);
        const OracleResult o = enumerate_oracle(g, s, a);
        CHECK(r.alpha == o.alpha);
        CHECK(r.optimal);
    }
}

TEST_CASE("cross-validation against the oracle") {
    auto rng = make_rng(7);
    for (int t = 0; t < 10; ++t) {
        const int qy = 2 + static_cast<int>(rng() % 2);
        const int qz = qy == 3 ? 3 : 2 + static_cast<int>(rng() % 2);
        IrsGeometry g{qy, qz, 0.5, 0.5};
        const int bits = 1 + static_cast<int>(rng() % 2);
        const PhaseAlphabet a = PhaseAlphabet::from_bits(bits);
        const SampleSet s = random_samples(rng, 1 + static_cast<int>(rng() % 2), 1);
        const DiscreteProgram pr = build_discrete_program(g, s, a);
        const BinaryAssignment warm = quantized_steering_assignment(g, s, a);
        const BnbResult r = solve_exact_bnb(pr, {}, &warm);
        const OracleResult o = enumerate_oracle(g, s, a);
        CHECK(r.alpha == o.alpha);
        CHECK(r.optimal);
    }
}

TEST_CASE("oracle basics") {
    SUBCASE("coherent optimum at broadside") {
        IrsGeometry g{2, 1, 0.5, 0.5};
        SampleSet s;
        s.points_y = {0.0};
        s.points_z = {0.0};
        const OracleResult o = enumerate_oracle(g, s, PhaseAlphabet::from_bits(2));
        CHECK(o.alpha == 4.0);
        CHECK(o.phases[0] == 0.0);
        CHECK(o.phases[1] == 0.0);  // lexicographically smallest maximizer
    }
    SUBCASE("size guard") {
        IrsGeometry g{8, 8, 0.5, 0.5};
        SampleSet s;
        s.points_y = {0.0};
        s.points_z = {0.0};
        CHECK_THROWS_AS(enumerate_oracle(g, s, PhaseAlphabet::from_bits(2)),
                        std::invalid_argument);
    }
    SUBCASE("beats the quantized-steering heuristic") {
        auto rng = make_rng(41);
        for (int t = 0; t < 10; ++t) {
            IrsGeometry g{3, 2, 0.5, 0.5};
            const PhaseAlphabet a = PhaseAlphabet::from_bits(2);
            const SampleSet s = random_samples(rng, 1, 1);
            const DiscreteProgram pr = build_discrete_program(g, s, a);
            const BinaryAssignment warm = quantized_steering_assignment(g, s, a);
            const OracleResult o = enumerate_oracle(g, s, a);
            CHECK(o.alpha >= pr.exact_floor(warm) - 1e-12);
        }
    }
}

TEST_CASE("node limit returns an incumbent with an honest bound") {
    IrsGeometry g{3, 3, 0.5, 0.5};
    auto rng = make_rng(17);
    const SampleSet s = random_samples(rng, 2, 2);
    const PhaseAlphabet a = PhaseAlphabet::from_bits(2);
    const DiscreteProgram pr = build_discrete_program(g, s, a);
    BnbConfig cfg;
    cfg.node_limit = 3;
    const BnbResult r = solve_exact_bnb(pr, cfg);
    CHECK(r.upper_bound >= r.alpha - 1e-12);
    CHECK(r.alpha == pr.exact_floor(r.assignment));
    const OracleResult o = enumerate_oracle(g, s, a);
    CHECK(r.upper_bound >= o.alpha - 1e-9);  // bound stays valid at the limit
}

TEST_CASE("codeword round trip") {
    const PhaseAlphabet a = PhaseAlphabet::from_bits(2);
    SUBCASE("all zero levels give all-zero phases") {
        BinaryAssignment asg;
        asg.levels = 4;
        asg.level = {0, 0, 0};
        const Codeword cw = assignment_to_codeword(asg, a);
        CHECK(cw.mode == PhaseMode::kDiscrete);
        CHECK(cw.bits == 2);
        for (double ph : cw.phases) CHECK(ph == 0.0);
    }
    SUBCASE("top level maps to (S-1) dv") {
        BinaryAssignment asg;
        asg.levels = 4;
        asg.level = {0, 3};
        const Codeword cw = assignment_to_codeword(asg, a);
        CHECK(cw.phases[1] == doctest::Approx(3.0 * kPi / 2.0));
    }
    SUBCASE("assignment -> codeword -> assignment is the identity") {
        auto rng = make_rng(77);
        for (int t = 0; t < 20; ++t) {
            const BinaryAssignment asg = random_assignment(7, 4, rng);
            const BinaryAssignment back = codeword_to_assignment(assignment_to_codeword(asg, a), a);
            CHECK(back.level == asg.level);
        }
    }
    SUBCASE("off-alphabet phases are rejected") {
        Codeword cw;
        cw.mode = PhaseMode::kDiscrete;
        cw.bits = 2;
        cw.phases = {0.0, 0.3};
        CHECK_THROWS_AS(codeword_to_assignment(cw, a), std::invalid_argument);
    }
}

TEST_CASE("one-hot materialization") {
    BinaryAssignment asg;
    asg.levels = 4;
    asg.level = {0, 2, 3};
    const Eigen::MatrixXi x = asg.x();
    CHECK(x.rows() == 3);
    CHECK(x.cols() == 4);
    for (int q = 0; q < 3; ++q) {
        CHECK(x.row(q).sum() == 1);
        CHECK(x(q, asg.level[static_cast<std::size_t>(q)]) == 1);
    }
    // Linking: a_bar^T (x_q - x_i) equals a_ext at the selector.
    const PhaseAlphabet a = PhaseAlphabet::from_bits(2);
    for (int q = 0; q < 3; ++q)
        for (int i = 0; i < 3; ++i) {
            double lhs = 0.0;
            for (int j = 0; j < 4; ++j)
                lhs += a.base[static_cast<std::size_t>(j)] * (x(q, j) - x(i, j));
            CHECK(lhs == doctest::Approx(a.ext[static_cast<std::size_t>(asg.y_selector(q, i))]));
        }
}
