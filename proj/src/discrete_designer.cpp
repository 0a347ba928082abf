// SPDX-License-Identifier: Apache-2.0

#include "irscb/discrete_designer.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace irscb {

PhaseAlphabet PhaseAlphabet::from_bits(int bits) {
    if (bits < 1 || bits > 16) throw std::invalid_argument("PhaseAlphabet: bits must be in [1, 16]");
    PhaseAlphabet a;
    a.bits = bits;
    a.levels = 1 << bits;
    a.delta = kTwoPi / a.levels;
    a.base.resize(static_cast<std::size_t>(a.levels));
    for (int j = 0; j < a.levels; ++j) a.base[static_cast<std::size_t>(j)] = j * a.delta;
    const int e = a.ext_size();
    a.ext.resize(static_cast<std::size_t>(e));
    a.cos_ext.resize(static_cast<std::size_t>(e));
    a.sin_ext.resize(static_cast<std::size_t>(e));
    for (int u = 0; u < e; ++u) {
        a.ext[static_cast<std::size_t>(u)] = (u - (a.levels - 1)) * a.delta;
        a.cos_ext[static_cast<std::size_t>(u)] = std::cos(a.ext[static_cast<std::size_t>(u)]);
        a.sin_ext[static_cast<std::size_t>(u)] = std::sin(a.ext[static_cast<std::size_t>(u)]);
    }
    return a;
}

Eigen::MatrixXi BinaryAssignment::x() const {
    Eigen::MatrixXi out = Eigen::MatrixXi::Zero(static_cast<Eigen::Index>(level.size()), levels);
    for (std::size_t q = 0; q < level.size(); ++q) out(static_cast<Eigen::Index>(q), level[q]) = 1;
    return out;
}

void BinaryAssignment::validate() const {
    if (level.empty()) throw std::invalid_argument("BinaryAssignment: empty");
    for (int l : level)
        if (l < 0 || l >= levels) throw std::invalid_argument("BinaryAssignment: level out of range");
}

double DiscreteProgram::row_value(int r, const BinaryAssignment& asg) const {
    const auto& coeff = rows[static_cast<std::size_t>(r)];
    double v = static_cast<double>(q);
    for (std::size_t e = 0; e < pairs.size(); ++e)
        v += coeff(static_cast<Eigen::Index>(e), asg.y_selector(pairs[e].first, pairs[e].second));
    return v;
}

double DiscreteProgram::exact_gain(int r, const BinaryAssignment& asg) const {
    const CVector& a = sample_vectors[static_cast<std::size_t>(r)];
    cdouble acc(0.0, 0.0);
    for (int i = 0; i < q; ++i)
        acc += std::polar(1.0, -alphabet.base[static_cast<std::size_t>(asg.level[static_cast<std::size_t>(i)])]) * a[i];
    return std::norm(acc);
}

double DiscreteProgram::exact_floor(const BinaryAssignment& asg) const {
    double m = std::numeric_limits<double>::infinity();
    for (int r = 0; r < static_cast<int>(sample_vectors.size()); ++r)
        m = std::min(m, exact_gain(r, asg));
    return m;
}

DiscreteProgram build_discrete_program(const IrsGeometry& geom, const SampleSet& samples,
                                       const PhaseAlphabet& alphabet) {
    geom.validate();
    DiscreteProgram pr;
    pr.q = geom.element_count();
    pr.alphabet = alphabet;
    for (double by : samples.points_y)
        for (double bz : samples.points_z)
            pr.sample_vectors.push_back(steering_vector(geom, EffectiveDirection{by, bz}));
    if (pr.sample_vectors.empty())
        throw std::invalid_argument("build_discrete_program: empty sample set");

    for (int a = 0; a < pr.q; ++a)
        for (int b = a + 1; b < pr.q; ++b) pr.pairs.emplace_back(a, b);

    const int e = alphabet.ext_size();
    pr.rows.reserve(pr.sample_vectors.size());
    for (const CVector& a : pr.sample_vectors) {
        Eigen::MatrixXd coeff(static_cast<Eigen::Index>(pr.pairs.size()), e);
        for (std::size_t k = 0; k < pr.pairs.size(); ++k) {
            const auto [qi, ii] = pr.pairs[k];
            const cdouble entry = a[qi] * std::conj(a[ii]);  // A^(q,i)
            const double mag = std::abs(entry);
            if (std::abs(mag - 1.0) > 1e-9)
                throw std::logic_error("build_discrete_program: steering entry modulus deviates from 1");
            const double ang = std::arg(entry);
            const double ca = std::cos(ang), sa = std::sin(ang);
            // Pair term of w^H A w: 2 |A| cos(Ang - dnu) with dnu = nu_q - nu_i
            // encoded by the selector. (The expansion for the transposed
            // convention |a^T w|^2 flips this inner sign; the linking
            // consistency against w^H A w fixes the orientation used here.)
            for (int u = 0; u < e; ++u)
                coeff(static_cast<Eigen::Index>(k), u) =
                    2.0 * mag * (ca * alphabet.cos_ext[static_cast<std::size_t>(u)] +
                                 sa * alphabet.sin_ext[static_cast<std::size_t>(u)]);
        }
        pr.rows.push_back(std::move(coeff));
    }
    return pr;
}

void BnbConfig::validate() const {
    if (node_limit < 1) throw std::invalid_argument("BnbConfig: node_limit must be >= 1");
    if (gap_tolerance < 0.0) throw std::invalid_argument("BnbConfig: gap_tolerance must be >= 0");
    if (branching != "most-fractional")
        throw std::invalid_argument("BnbConfig: unknown branching rule");
    if (leaf_enumeration_budget < 1)
        throw std::invalid_argument("BnbConfig: leaf_enumeration_budget must be >= 1");
}

Codeword assignment_to_codeword(const BinaryAssignment& asg, const PhaseAlphabet& alphabet) {
    asg.validate();
    Codeword cw;
    cw.mode = PhaseMode::kDiscrete;
    cw.bits = alphabet.bits;
    cw.phases.resize(asg.level.size());
    for (std::size_t i = 0; i < asg.level.size(); ++i)
        cw.phases[i] = alphabet.base[static_cast<std::size_t>(asg.level[i])];
    return cw;
}

BinaryAssignment codeword_to_assignment(const Codeword& cw, const PhaseAlphabet& alphabet) {
    BinaryAssignment asg;
    asg.levels = alphabet.levels;
    asg.level.resize(cw.phases.size());
    for (std::size_t i = 0; i < cw.phases.size(); ++i) {
        const double scaled = cw.phases[i] / alphabet.delta;
        long l = std::lround(scaled);
        l = ((l % alphabet.levels) + alphabet.levels) % alphabet.levels;
        const double repr = alphabet.base[static_cast<std::size_t>(l)];
        const double dev = std::abs(std::remainder(cw.phases[i] - repr, kTwoPi));
        if (dev > 1e-9)
            throw std::invalid_argument("codeword_to_assignment: phase not on the alphabet");
        asg.level[i] = static_cast<int>(l);
    }
    return asg;
}

BinaryAssignment quantized_steering_assignment(const IrsGeometry& geom, const SampleSet& samples,
                                               const PhaseAlphabet& alphabet) {
    const double by = 0.5 * (samples.points_y.front() + samples.points_y.back());
    const double bz = 0.5 * (samples.points_z.front() + samples.points_z.back());
    const std::vector<double> nu = steering_phases(geom, EffectiveDirection{by, bz});
    BinaryAssignment asg;
    asg.levels = alphabet.levels;
    asg.level.resize(nu.size());
    for (std::size_t i = 0; i < nu.size(); ++i) {
        long l = std::lround((nu[i] - nu[0]) / alphabet.delta);
        asg.level[i] = static_cast<int>(((l % alphabet.levels) + alphabet.levels) % alphabet.levels);
    }
    asg.level[0] = 0;
    return asg;
}

OracleResult enumerate_oracle(const IrsGeometry& geom, const SampleSet& samples,
                              const PhaseAlphabet& alphabet) {
    const DiscreteProgram pr = build_discrete_program(geom, samples, alphabet);
    const int q = pr.q;
    // Instance-size guard: S^(Q-1) <= 2^20.
    double combos = 1.0;
    for (int i = 1; i < q; ++i) {
        combos *= alphabet.levels;
        if (combos > static_cast<double>(1 << 20))
            throw std::invalid_argument("enumerate_oracle: instance too large (S^(Q-1) > 2^20)");
    }

    BinaryAssignment asg;
    asg.levels = alphabet.levels;
    asg.level.assign(static_cast<std::size_t>(q), 0);
    BinaryAssignment best = asg;
    double best_floor = pr.exact_floor(asg);

    // Odometer in lexicographic order (last element fastest); strict
    // improvement keeps the lexicographically smallest maximizer.
    while (true) {
        int pos = q - 1;
        while (pos >= 1) {
            if (++asg.level[static_cast<std::size_t>(pos)] < alphabet.levels) break;
            asg.level[static_cast<std::size_t>(pos)] = 0;
            --pos;
        }
        if (pos < 1) break;
        const double f = pr.exact_floor(asg);
        if (f > best_floor) {
            best_floor = f;
            best = asg;
        }
    }

    OracleResult out;
    out.alpha = best_floor;
    out.phases.resize(static_cast<std::size_t>(q));
    for (int i = 0; i < q; ++i)
        out.phases[static_cast<std::size_t>(i)] =
            alphabet.base[static_cast<std::size_t>(best.level[static_cast<std::size_t>(i)])];
    return out;
}

namespace {

// Column layout of the node LP:
//   x_q(j)  for q = 1..Q-1, j = 0..S-1          (element 0 gauge-fixed)
//   y_e(u)  for pairs e (q < i), u = 0..2S-2
//   alpha
//   t_r     slack of sample row r
struct LpLayout {
    int q, s, e, npairs, nrows;
    int x_base = 0;
    int y_base, alpha_col, t_base, ncols;

    LpLayout(int q_, int s_, int e_, int npairs_, int nrows_)
        : q(q_), s(s_), e(e_), npairs(npairs_), nrows(nrows_) {
        y_base = (q - 1) * s;
        alpha_col = y_base + npairs * e;
        t_base = alpha_col + 1;
        ncols = t_base + nrows;
    }
    int xcol(int qq, int j) const { return (qq - 1) * s + j; }  // qq >= 1
    int ycol(int pair_idx, int u) const { return y_base + pair_idx * e + u; }
};

struct Node {
    std::vector<int8_t> fix;  // over x columns only; -1 free
    double bound;
    int depth;
    long seq;
    int child_rank;  // 0 explored first at equal depth/bound
};

struct NodeOrder {
    bool operator()(const Node& a, const Node& b) const {
        if (a.depth != b.depth) return a.depth < b.depth;          // deeper first
        if (a.bound != b.bound) return a.bound < b.bound;          // better bound first
        if (a.child_rank != b.child_rank) return a.child_rank > b.child_rank;
        return a.seq > b.seq;
    }
};

}  // namespace

BnbResult solve_exact_bnb(const DiscreteProgram& program, const BnbConfig& cfg,
                          const BinaryAssignment* warm_start) {
    cfg.validate();
    const int q = program.q;
    const int s = program.alphabet.levels;
    const int e = program.alphabet.ext_size();
    const int npairs = static_cast<int>(program.pairs.size());
    const int nrows = static_cast<int>(program.rows.size());
    const double q2 = static_cast<double>(q) * q;

    BnbResult res;
    if (q == 1) {
        res.assignment.levels = s;
        res.assignment.level = {0};
        res.alpha = program.exact_floor(res.assignment);
        res.upper_bound = res.alpha;
        res.nodes = 0;
        res.optimal = true;
        return res;
    }

    const LpLayout ly(q, s, e, npairs, nrows);

    // Static LP skeleton; nodes only move the x bounds.
    LpProblem lp;
    lp.n = ly.ncols;
    lp.cols.assign(static_cast<std::size_t>(lp.n), {});
    lp.c = Eigen::VectorXd::Zero(lp.n);
    lp.c[ly.alpha_col] = 1.0;
    lp.lo = Eigen::VectorXd::Zero(lp.n);
    lp.hi = Eigen::VectorXd::Ones(lp.n);
    lp.lo[ly.alpha_col] = -1.0;
    lp.hi[ly.alpha_col] = q2 + 1.0;
    for (int r = 0; r < nrows; ++r) {
        lp.lo[ly.t_base + r] = 0.0;
        lp.hi[ly.t_base + r] = q2 + 2.0;
    }

    std::vector<double> rhs;
    int row_id = 0;
    auto add_entry = [&](int col, int row, double v) {
        lp.cols[static_cast<std::size_t>(col)].emplace_back(row, v);
    };
    // One-hot rows for x.
    for (int qq = 1; qq < q; ++qq) {
        for (int j = 0; j < s; ++j) add_entry(ly.xcol(qq, j), row_id, 1.0);
        rhs.push_back(1.0);
        ++row_id;
    }
    // One-hot rows for y.
    for (int p = 0; p < npairs; ++p) {
        for (int u = 0; u < e; ++u) add_entry(ly.ycol(p, u), row_id, 1.0);
        rhs.push_back(1.0);
        ++row_id;
    }
    // Linking rows: a_bar^T x_q - a_bar^T x_i - a_ext^T y_e = 0 (x_0 = 0).
    for (int p = 0; p < npairs; ++p) {
        const auto [pq, pi] = program.pairs[static_cast<std::size_t>(p)];
        if (pq >= 1)
            for (int j = 1; j < s; ++j)
                add_entry(ly.xcol(pq, j), row_id, program.alphabet.base[static_cast<std::size_t>(j)]);
        for (int j = 1; j < s; ++j)
            add_entry(ly.xcol(pi, j), row_id, -program.alphabet.base[static_cast<std::size_t>(j)]);
        for (int u = 0; u < e; ++u)
            if (program.alphabet.ext[static_cast<std::size_t>(u)] != 0.0)
                add_entry(ly.ycol(p, u), row_id, -program.alphabet.ext[static_cast<std::size_t>(u)]);
        rhs.push_back(0.0);
        ++row_id;
    }
    // Sample rows: sum_e coeff^T y_e - alpha - t_r = -Q.
    for (int r = 0; r < nrows; ++r) {
        const auto& coeff = program.rows[static_cast<std::size_t>(r)];
        for (int p = 0; p < npairs; ++p)
            for (int u = 0; u < e; ++u)
                if (coeff(p, u) != 0.0) add_entry(ly.ycol(p, u), row_id, coeff(p, u));
        add_entry(ly.alpha_col, row_id, -1.0);
        add_entry(ly.t_base + r, row_id, -1.0);
        rhs.push_back(-static_cast<double>(q));
        ++row_id;
    }
    lp.m = row_id;
    lp.b = Eigen::Map<Eigen::VectorXd>(rhs.data(), static_cast<Eigen::Index>(rhs.size()));

    // Initial incumbent: the caller's warm start if given (the designers pass
    // quantized conjugate steering), otherwise the all-zero assignment.
    BinaryAssignment inc;
    inc.levels = s;
    inc.level.assign(static_cast<std::size_t>(q), 0);
    if (warm_start != nullptr && static_cast<int>(warm_start->level.size()) == q &&
        warm_start->levels == s) {
        inc = *warm_start;
        inc.level[0] = 0;
    }
    double inc_floor = program.exact_floor(inc);

    auto consider = [&](const BinaryAssignment& cand) {
        const double f = program.exact_floor(cand);
        if (f > inc_floor || (f == inc_floor && cand.level < inc.level)) {
            inc_floor = f;
            inc = cand;
        }
    };

    // Node LP bounds are solved with the x boxes narrowed by the fixings.
    const int nx = (q - 1) * s;
    auto apply_fix = [&](const std::vector<int8_t>& fix) {
        for (int k = 0; k < nx; ++k) {
            if (fix[static_cast<std::size_t>(k)] == 0) {
                lp.lo[k] = 0.0;
                lp.hi[k] = 0.0;
            } else if (fix[static_cast<std::size_t>(k)] == 1) {
                lp.lo[k] = 1.0;
                lp.hi[k] = 1.0;
            } else {
                lp.lo[k] = 0.0;
                lp.hi[k] = 1.0;
            }
        }
    };

    std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
    long seq = 0;
    open.push(Node{std::vector<int8_t>(static_cast<std::size_t>(nx), int8_t{-1}),
                   q2 + 1.0, 0, seq++, 0});
    long nodes = 0;
    bool hit_limit = false;

    LpOptions lpo;
    while (!open.empty()) {
        if (nodes >= cfg.node_limit) {
            hit_limit = true;
            break;
        }
        Node node = open.top();
        open.pop();
        if (node.bound <= inc_floor + cfg.gap_tolerance) continue;
        ++nodes;

        // Close small completion spaces exactly instead of branching on.
        {
            std::vector<std::vector<int>> allowed(static_cast<std::size_t>(q));
            allowed[0] = {0};
            double completions = 1.0;
            bool feasible = true;
            for (int qq = 1; qq < q && feasible; ++qq) {
                auto& lv = allowed[static_cast<std::size_t>(qq)];
                for (int j = 0; j < s; ++j) {
                    const int8_t f = node.fix[static_cast<std::size_t>(ly.xcol(qq, j))];
                    if (f == 1) {
                        lv.assign(1, j);
                        break;
                    }
                    if (f != 0) lv.push_back(j);
                }
                if (lv.empty()) feasible = false;
                completions *= static_cast<double>(lv.size());
            }
            if (!feasible) continue;
            if (completions <= static_cast<double>(cfg.leaf_enumeration_budget)) {
                BinaryAssignment asg;
                asg.levels = s;
                asg.level.assign(static_cast<std::size_t>(q), 0);
                std::vector<std::size_t> pos(static_cast<std::size_t>(q), 0);
                for (;;) {
                    for (int qq = 1; qq < q; ++qq)
                        asg.level[static_cast<std::size_t>(qq)] =
                            allowed[static_cast<std::size_t>(qq)][pos[static_cast<std::size_t>(qq)]];
                    consider(asg);
                    int qq = q - 1;
                    while (qq >= 1) {
                        if (++pos[static_cast<std::size_t>(qq)] <
                            allowed[static_cast<std::size_t>(qq)].size())
                            break;
                        pos[static_cast<std::size_t>(qq)] = 0;
                        --qq;
                    }
                    if (qq < 1) break;
                }
                continue;  // node closed exactly
            }
        }

        apply_fix(node.fix);
        const LpResult rel = solve_box_lp(lp, lpo);
        double bound = rel.safe_upper_bound;
        if (!std::isfinite(bound)) bound = q2 + 1.0;
        bound = std::min(bound, q2);  // row values can never exceed Q^2
        if (bound <= inc_floor + cfg.gap_tolerance) continue;

        // Extract the x block and round it to the heuristic incumbent.
        BinaryAssignment cand;
        cand.levels = s;
        cand.level.assign(static_cast<std::size_t>(q), 0);
        bool fully_fixed = true;
        double worst_frac = 1.0;
        int frac_col = -1;
        int first_free = -1;
        for (int qq = 1; qq < q; ++qq) {
            int arg = 0;
            double best = -1.0;
            for (int j = 0; j < s; ++j) {
                const int col = ly.xcol(qq, j);
                const double v = rel.x[col];
                if (v > best) {
                    best = v;
                    arg = j;
                }
                if (node.fix[static_cast<std::size_t>(col)] < 0) {
                    fully_fixed = false;
                    if (first_free < 0) first_free = col;
                    const double dist = std::min(v, 1.0 - v);
                    const double score = std::abs(v - 0.5);
                    if (dist > 1e-7 && score < worst_frac) {
                        worst_frac = score;
                        frac_col = col;
                    }
                }
            }
            cand.level[static_cast<std::size_t>(qq)] = arg;
        }
        consider(cand);

        // A fully fixed node has exactly one feasible assignment; it was just
        // evaluated, so the node is closed. Otherwise the LP bound alone never
        // closes a node (a fractional y block can overstate an integral x),
        // so branch on the most fractional free x entry, or on the first free
        // entry when the x block happens to be integral.
        if (fully_fixed) continue;
        if (inc_floor + cfg.gap_tolerance >= bound) continue;
        const int branch_col = frac_col >= 0 ? frac_col : first_free;

        // The 1-branch first.
        for (int val = 1; val >= 0; --val) {
            Node child;
            child.fix = node.fix;
            child.fix[static_cast<std::size_t>(branch_col)] = static_cast<int8_t>(val);
            if (val == 1) {
                const int qq = branch_col / s + 1;
                for (int j = 0; j < s; ++j)
                    if (ly.xcol(qq, j) != branch_col)
                        child.fix[static_cast<std::size_t>(ly.xcol(qq, j))] = 0;
            } else {
                // Keep the one-hot row satisfiable.
                const int qq = branch_col / s + 1;
                int free_or_one = 0;
                int last_free = -1;
                for (int j = 0; j < s; ++j) {
                    const int8_t f = child.fix[static_cast<std::size_t>(ly.xcol(qq, j))];
                    if (f != 0) {
                        ++free_or_one;
                        last_free = j;
                    }
                }
                if (free_or_one == 0) continue;  // infeasible child
                if (free_or_one == 1)
                    child.fix[static_cast<std::size_t>(ly.xcol(qq, last_free))] = 1;
            }
            child.bound = bound;
            child.depth = node.depth + 1;
            child.seq = seq++;
            child.child_rank = 1 - val;
            open.push(child);
        }
    }

    double global_bound = inc_floor;
    if (hit_limit) {
        // Remaining nodes still carry valid (parent) bounds.
        std::priority_queue<Node, std::vector<Node>, NodeOrder> rest = std::move(open);
        while (!rest.empty()) {
            global_bound = std::max(global_bound, rest.top().bound);
            rest.pop();
        }
    }

    res.assignment = inc;
    res.alpha = inc_floor;
    res.upper_bound = global_bound;
    res.nodes = nodes;
    res.optimal = !hit_limit || (global_bound - inc_floor) <= cfg.gap_tolerance;
    return res;
}

}  // namespace irscb
