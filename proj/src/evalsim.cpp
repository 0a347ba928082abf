// SPDX-License-Identifier: Apache-2.0

#include "irscb/evalsim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "irscb/parallel.hpp"
#include "irscb/rng.hpp"

namespace irscb {

void LinkBudget::validate() const {
    if (!(gamma_req > 0.0) || !(noise_power_w > 0.0) || !(frequency_hz > 0.0) || !(d1_m > 0.0) ||
        !(d2_m > 0.0))
        throw std::invalid_argument("LinkBudget: all parameters must be positive");
}

LinkBudget LinkBudget::from_engineering(double gamma_db, double f_ghz, double d1_m, double d2_m,
                                        double bw_mhz, double noise_dbm_per_hz) {
    LinkBudget b;
    b.gamma_req = std::pow(10.0, gamma_db / 10.0);
    b.frequency_hz = f_ghz * 1e9;
    b.d1_m = d1_m;
    b.d2_m = d2_m;
    // N0 [dBm/Hz] -> W/Hz, times bandwidth.
    b.noise_power_w = std::pow(10.0, noise_dbm_per_hz / 10.0) * 1e-3 * (bw_mhz * 1e6);
    b.validate();
    return b;
}

void MonteCarloConfig::validate() const {
    if (n_trials < 1) throw std::invalid_argument("MonteCarloConfig: n_trials must be >= 1");
}

double watts_to_dbm(double watts) { return 10.0 * std::log10(watts / 1e-3); }

namespace {

std::vector<double> linspace(double lo, double hi, int n) {
    if (n == 1) return {0.5 * (lo + hi)};
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        v[static_cast<std::size_t>(i)] = lo + (hi - lo) * (static_cast<double>(i) / (n - 1));
    v.front() = lo;
    v.back() = hi;
    return v;
}

void append_g17(std::string& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out += buf;
}

}  // namespace

PatternMetrics pattern_metrics(const IrsGeometry& geom, const Codeword& cw,
                               const BetaInterval& iv_y, const BetaInterval& iv_z,
                               int grid_points_y, int grid_points_z) {
    geom.validate();
    if (grid_points_y < 4 * geom.q_y || grid_points_z < 4 * geom.q_z)
        throw std::invalid_argument("pattern_metrics: fine grid needs >= 4 Q points per axis");
    const double half_y = 0.5 * beta_bar_for_spacing(geom.d_y);
    const double half_z = 0.5 * beta_bar_for_spacing(geom.d_z);
    const std::vector<double> by = linspace(-half_y, half_y, grid_points_y);
    const std::vector<double> bz = linspace(-half_z, half_z, grid_points_z);
    const Eigen::MatrixXd gain = gain_pattern(geom, cw, by, bz, {});

    const double cell_y = by.size() > 1 ? by[1] - by[0] : 0.0;
    const double cell_z = bz.size() > 1 ? bz[1] - bz[0] : 0.0;

    double min_in = std::numeric_limits<double>::infinity();
    double max_in = 0.0;
    double sum_in = 0.0;
    long count_in = 0;
    double max_out = 0.0;
    bool any_out = false;
    for (std::size_t i = 0; i < by.size(); ++i)
        for (std::size_t j = 0; j < bz.size(); ++j) {
            const double g = gain(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            const bool inside = iv_y.contains(by[i]) && iv_z.contains(bz[j]);
            if (inside) {
                min_in = std::min(min_in, g);
                max_in = std::max(max_in, g);
                sum_in += g;
                ++count_in;
            } else {
                const bool near = by[i] >= iv_y.lo - cell_y && by[i] <= iv_y.hi + cell_y &&
                                  bz[j] >= iv_z.lo - cell_z && bz[j] <= iv_z.hi + cell_z;
                if (!near) {
                    max_out = std::max(max_out, g);
                    any_out = true;
                }
            }
        }
    if (count_in == 0)
        throw std::invalid_argument("pattern_metrics: no grid point falls inside the interval");

    PatternMetrics m;
    m.min_in_interval = min_in;
    m.mean_in_interval = sum_in / static_cast<double>(count_in);
    m.ripple_db = 10.0 * std::log10(std::max(max_in, 1e-300) / std::max(min_in, 1e-300));
    const double ref = std::max(max_in, 1e-300);
    // Finite floor keeps the metric defined when the dilated interval covers
    // the whole grid (no sidelobe region remains).
    m.peak_sidelobe_db =
        any_out ? 10.0 * std::log10(std::max(max_out, 1e-300) / ref) : -300.0;
    return m;
}

int best_codeword_index(const Codebook& cb, const EffectiveDirection& dir) {
    if (cb.codewords.empty()) throw std::invalid_argument("best_codeword_index: empty codebook");
    int best = 0;
    double best_gain = -1.0;
    for (std::size_t k = 0; k < cb.codewords.size(); ++k) {
        const double g = std::norm(response(cb.geometry, cb.codewords[k], dir));
        if (g > best_gain) {
            best_gain = g;
            best = static_cast<int>(k);
        }
    }
    return best;
}

double required_power(const Codebook& cb, const EffectiveDirection& dir, const LinkBudget& budget) {
    budget.validate();
    if (cb.codewords.empty()) throw std::invalid_argument("required_power: empty codebook");
    const int best = best_codeword_index(cb, dir);
    const double best_gain = std::norm(response(cb.geometry, cb.codewords[static_cast<std::size_t>(best)], dir));
    const double gbar = cb.geometry.aperture_gain();
    const double denom = gbar * gbar * budget.pl_t() * budget.pl_r() * best_gain;
    if (!(denom > 0.0)) return kPowerCapW;
    const double p = budget.gamma_req * budget.noise_power_w / denom;
    return std::min(p, kPowerCapW);
}

double p_req_full(const LinkBudget& budget, const IrsGeometry& geom) {
    const double gbar = geom.aperture_gain();
    const double q = geom.element_count();
    return budget.gamma_req * budget.noise_power_w /
           (gbar * gbar * budget.pl_t() * budget.pl_r() * q * q);
}

double p_req_ideal(const LinkBudget& budget, const IrsGeometry& geom, int codebook_size) {
    const double gbar = geom.aperture_gain();
    const double q = geom.element_count();
    return budget.gamma_req * budget.noise_power_w /
           (gbar * gbar * budget.pl_t() * budget.pl_r() * q * codebook_size);
}

TradeoffRow tradeoffRowImpl(const Codebook& cb, const LinkBudget& budget,
                            const MonteCarloConfig& mc, int threads) {
    budget.validate();
    mc.validate();
    const double half_y = 0.5 * cb.grid.beta_bar_y;
    const double half_z = 0.5 * cb.grid.beta_bar_z;

    std::vector<double> p(static_cast<std::size_t>(mc.n_trials));
    parallel_for(
        static_cast<std::size_t>(mc.n_trials),
        [&](std::size_t trial) {
            auto rng = make_rng(derive_seed(mc.rng_seed, 0x4dc7u, trial));
            EffectiveDirection dir;
            if (mc.sampling == AngleSampling::kBetaUniform) {
                dir.beta_y = std::uniform_real_distribution<double>(-half_y, half_y)(rng);
                dir.beta_z = std::uniform_real_distribution<double>(-half_z, half_z)(rng);
            } else {
                std::uniform_real_distribution<double> uth(0.0, kPi);
                std::uniform_real_distribution<double> uph(-kPi, kPi);
                AnglePair in{uth(rng), uph(rng)};
                AnglePair outp{uth(rng), uph(rng)};
                dir = direction_cosines(in, outp);
            }
            p[trial] = required_power(cb, dir, budget);
        },
        threads);

    TradeoffRow row;
    row.designer = designer_tag(cb.designer);
    row.m = cb.grid.codeword_count();
    long capped = 0;
    double sum = 0.0;
    for (double v : p) {  // fixed order: independent of thread count
        sum += v;
        if (v >= kPowerCapW) ++capped;
    }
    row.mean_preq_w = sum / static_cast<double>(mc.n_trials);
    row.mean_preq_dbm = watts_to_dbm(row.mean_preq_w);
    row.preq_full_w = p_req_full(budget, cb.geometry);
    row.preq_ideal_w = p_req_ideal(budget, cb.geometry, row.m);
    row.capped_fraction = static_cast<double>(capped) / static_cast<double>(mc.n_trials);
    return row;
}

TradeoffRow tradeoff_row(const Codebook& cb, const LinkBudget& budget, const MonteCarloConfig& mc,
                         int threads) {
    return tradeoffRowImpl(cb, budget, mc, threads);
}

std::vector<TradeoffRow> power_tradeoff_curve(const std::vector<const Codebook*>& codebooks,
                                              const LinkBudget& budget, const MonteCarloConfig& mc,
                                              int threads) {
    std::vector<TradeoffRow> rows;
    rows.reserve(codebooks.size());
    for (const Codebook* cb : codebooks) {
        if (cb == nullptr) throw std::invalid_argument("power_tradeoff_curve: null codebook");
        rows.push_back(tradeoffRowImpl(*cb, budget, mc, threads));
    }
    return rows;
}

Heatmap heatmap_export(const IrsGeometry& geom, const Codebook& cb, int resolution,
                       bool per_codeword) {
    geom.validate();
    if (resolution < 1) throw std::invalid_argument("heatmap_export: resolution must be >= 1");
    Heatmap hm;
    hm.betas_y = linspace(-0.5 * cb.grid.beta_bar_y, 0.5 * cb.grid.beta_bar_y, resolution);
    hm.betas_z = linspace(-0.5 * cb.grid.beta_bar_z, 0.5 * cb.grid.beta_bar_z, resolution);

    PatternOptions opt;
    opt.normalize = true;  // |g / g_max|^2 with g_max = g_bar Q
    opt.in_db = true;
    hm.composite_db =
        Eigen::MatrixXd::Constant(resolution, resolution, -std::numeric_limits<double>::infinity());
    for (const auto& cw : cb.codewords) {
        Eigen::MatrixXd one = gain_pattern(geom, cw, hm.betas_y, hm.betas_z, opt);
        hm.composite_db = hm.composite_db.cwiseMax(one);
        if (per_codeword) hm.per_codeword_db.push_back(std::move(one));
    }
    return hm;
}

void write_pattern_csv(std::ostream& os, const std::vector<double>& betas,
                       const std::vector<std::vector<double>>& gain_db_per_codeword, char axis) {
    std::string out;
    out += axis == 'z' ? "beta_z" : "beta_y";
    for (std::size_t c = 0; c < gain_db_per_codeword.size(); ++c) {
        out += ",cw_";
        out += std::to_string(c);
    }
    out += '\n';
    for (std::size_t i = 0; i < betas.size(); ++i) {
        append_g17(out, betas[i]);
        for (const auto& col : gain_db_per_codeword) {
            out += ',';
            append_g17(out, col[i]);
        }
        out += '\n';
    }
    os << out;
}

void write_tradeoff_csv(std::ostream& os, const std::vector<TradeoffRow>& rows) {
    std::string out = "designer,M,mean_preq_dbm,preq_full_w,preq_ideal_w,capped_fraction\n";
    for (const auto& r : rows) {
        out += r.designer;
        out += ',';
        out += std::to_string(r.m);
        out += ',';
        append_g17(out, r.mean_preq_dbm);
        out += ',';
        append_g17(out, r.preq_full_w);
        out += ',';
        append_g17(out, r.preq_ideal_w);
        out += ',';
        append_g17(out, r.capped_fraction);
        out += '\n';
    }
    os << out;
}

void write_heatmap_csv(std::ostream& os, const Heatmap& hm, const Eigen::MatrixXd& matrix) {
    std::string out = "# beta_y ";
    append_g17(out, hm.betas_y.front());
    out += ' ';
    append_g17(out, hm.betas_y.back());
    out += " beta_z ";
    append_g17(out, hm.betas_z.front());
    out += ' ';
    append_g17(out, hm.betas_z.back());
    out += '\n';
    out += "# rows ";
    out += std::to_string(matrix.rows());
    out += " cols ";
    out += std::to_string(matrix.cols());
    out += '\n';
    for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
        for (Eigen::Index j = 0; j < matrix.cols(); ++j) {
            if (j) out += ',';
            append_g17(out, matrix(i, j));
        }
        out += '\n';
    }
    os << out;
}

}  // namespace irscb
