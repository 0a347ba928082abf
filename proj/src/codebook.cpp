// SPDX-License-Identifier: Apache-2.0

#include "irscb/codebook.hpp"

#include <cmath>

#include "irscb/parallel.hpp"
#include "irscb/rng.hpp"

namespace irscb {

std::string designer_tag(const DesignerSpec& spec) {
    if (std::holds_alternative<ContinuousDesigner>(spec)) return "continuous";
    if (std::holds_alternative<DiscreteDesigner>(spec)) return "discrete";
    if (std::holds_alternative<LinearDesigner>(spec)) return "linear";
    return "quadratic";
}

void Codebook::validate() const {
    geometry.validate();
    if (static_cast<int>(codewords.size()) != grid.codeword_count())
        throw std::invalid_argument("Codebook: codeword count does not match the grid");
    const std::size_t q = static_cast<std::size_t>(geometry.element_count());
    for (const auto& cw : codewords) {
        if (cw.phases.size() != q)
            throw std::invalid_argument("Codebook: codeword length does not match the geometry");
        for (double ph : cw.phases)
            if (!std::isfinite(ph)) throw std::invalid_argument("Codebook: non-finite phase");
    }
}

namespace {

double exact_floor(const IrsGeometry& geom, const SampleSet& samples, const Codeword& cw) {
    double m = std::numeric_limits<double>::infinity();
    for (double by : samples.points_y)
        for (double bz : samples.points_z)
            m = std::min(m, std::norm(response(geom, cw, EffectiveDirection{by, bz})));
    return m;
}

}  // namespace

Codebook generate_codebook(const IrsGeometry& geom, const BetaGrid& grid,
                           const DesignerSpec& designer, int threads) {
    geom.validate();
    Codebook cb;
    cb.geometry = geom;
    cb.grid = grid;
    cb.designer = designer;
    const int m = grid.codeword_count();
    cb.codewords.resize(static_cast<std::size_t>(m));
    if (std::holds_alternative<ContinuousDesigner>(designer))
        cb.reports.resize(static_cast<std::size_t>(m));
    if (std::holds_alternative<DiscreteDesigner>(designer))
        cb.discrete_info.resize(static_cast<std::size_t>(m));

    parallel_for(
        static_cast<std::size_t>(m),
        [&](std::size_t idx) {
            const int my = static_cast<int>(idx) / grid.m_z;
            const int mz = static_cast<int>(idx) % grid.m_z;
            const SampleSet samples = sample_interval(grid, my, mz);

            if (const auto* cd = std::get_if<ContinuousDesigner>(&designer)) {
                ScaConfig cfg = cd->sca;
                cfg.rng_seed = derive_seed(cd->sca.rng_seed, static_cast<std::uint64_t>(my),
                                           static_cast<std::uint64_t>(mz));
                auto [cw, report] = sca_design(geom, samples, cfg);
                cb.codewords[idx] = std::move(cw);
                cb.reports[idx] = std::move(report);
            } else if (const auto* dd = std::get_if<DiscreteDesigner>(&designer)) {
                const PhaseAlphabet alphabet = PhaseAlphabet::from_bits(dd->bits);
                if (dd->method == "exact") {
                    const DiscreteProgram program = build_discrete_program(geom, samples, alphabet);
                    const BinaryAssignment warm =
                        quantized_steering_assignment(geom, samples, alphabet);
                    BnbResult r = solve_exact_bnb(program, dd->bnb, &warm);
                    Codeword cw = assignment_to_codeword(r.assignment, alphabet);
                    cw.achieved_alpha = r.alpha;
                    cb.codewords[idx] = std::move(cw);
                    cb.discrete_info[idx] = DiscreteSolveInfo{r.optimal, r.upper_bound, r.nodes};
                } else if (dd->method == "rounded") {
                    ScaConfig cfg = dd->sca;
                    cfg.rng_seed = derive_seed(dd->sca.rng_seed, static_cast<std::uint64_t>(my),
                                               static_cast<std::uint64_t>(mz));
                    auto [cont, report] = sca_design(geom, samples, cfg);
                    Codeword cw;
                    cw.mode = PhaseMode::kDiscrete;
                    cw.bits = dd->bits;
                    cw.phases.resize(cont.phases.size());
                    for (std::size_t i = 0; i < cont.phases.size(); ++i) {
                        long l = std::lround(cont.phases[i] / alphabet.delta);
                        l = ((l % alphabet.levels) + alphabet.levels) % alphabet.levels;
                        cw.phases[i] = alphabet.base[static_cast<std::size_t>(l)];
                    }
                    cw.achieved_alpha = exact_floor(geom, samples, cw);
                    cb.codewords[idx] = std::move(cw);
                    cb.discrete_info[idx] = DiscreteSolveInfo{false, 0.0, 0};
                } else {
                    throw std::invalid_argument("generate_codebook: unknown discrete method");
                }
            } else if (std::holds_alternative<LinearDesigner>(designer)) {
                Codeword cw = linear_codeword(geom, grid.interval_y(my), grid.interval_z(mz));
                cw.achieved_alpha = exact_floor(geom, samples, cw);
                cb.codewords[idx] = std::move(cw);
            } else {
                const auto& qd = std::get<QuadraticDesignerSpec>(designer);
                Codeword cw =
                    quadratic_codeword(geom, grid.interval_y(my), grid.interval_z(mz), qd.profile);
                cw.achieved_alpha = exact_floor(geom, samples, cw);
                cb.codewords[idx] = std::move(cw);
            }
        },
        threads);

    return cb;
}

}  // namespace irscb
