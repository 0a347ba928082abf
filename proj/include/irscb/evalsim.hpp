// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "irscb/codebook.hpp"

#include <iosfwd>
#include <string>

namespace irscb {

struct LinkBudget {
    double gamma_req = 10.0;      // required SNR, linear
    double noise_power_w = 1e-13; // sigma^2
    double frequency_hz = 3.4e9;
    double d1_m = 20.0;
    double d2_m = 20.0;

    double pl_t() const { return free_space_path_loss(d1_m, frequency_hz); }
    double pl_r() const { return free_space_path_loss(d2_m, frequency_hz); }
    void validate() const;

    static LinkBudget from_engineering(double gamma_db, double f_ghz, double d1_m, double d2_m,
                                       double bw_mhz, double noise_dbm_per_hz);
};

enum class AngleSampling {
    kBetaUniform,  // beta drawn uniformly over the fundamental square
    kAngleUniform  // theta ~ U[0,pi], phi ~ U[-pi,pi] for AoA and AoD
};

struct MonteCarloConfig {
    long n_trials = 10000;
    std::uint64_t rng_seed = 1;
    AngleSampling sampling = AngleSampling::kBetaUniform;

    void validate() const;
};

// Transmit power exceeding this value is reported as capped (pattern nulls
// would otherwise produce unbounded means).
inline constexpr double kPowerCapW = 1e6;

struct PatternMetrics {
    double min_in_interval = 0.0;   // linear |g/g_bar|^2
    double mean_in_interval = 0.0;
    double ripple_db = 0.0;         // max/min inside the interval
    double peak_sidelobe_db = 0.0;  // highest gain outside the dilated interval,
                                    // relative to the in-interval peak
};

// Metrics over a fine tensor grid covering the full designable range; the
// grid must have at least 4 Q_t points per axis. The sidelobe region excludes
// the interval dilated by one grid cell.
PatternMetrics pattern_metrics(const IrsGeometry& geom, const Codeword& cw,
                               const BetaInterval& iv_y, const BetaInterval& iv_z,
                               int grid_points_y, int grid_points_z);

// Index of the gain-maximizing codeword for one effective direction,
// exhaustive over the codebook; ties resolve to the lowest index.
int best_codeword_index(const Codebook& cb, const EffectiveDirection& dir);

// Transmit power required to reach gamma_req at the user for one effective
// direction, with the best codeword chosen by exhaustive search (ties to the
// lowest index). Capped at kPowerCapW.
double required_power(const Codebook& cb, const EffectiveDirection& dir, const LinkBudget& budget);

// Lower bounds: fully controllable phases (gain Q^2) and the idealized
// M-codeword bound (gain Q M).
double p_req_full(const LinkBudget& budget, const IrsGeometry& geom);
double p_req_ideal(const LinkBudget& budget, const IrsGeometry& geom, int codebook_size);

struct TradeoffRow {
    std::string designer;
    int m = 0;
    double mean_preq_w = 0.0;
    double mean_preq_dbm = 0.0;
    double preq_full_w = 0.0;
    double preq_ideal_w = 0.0;
    double capped_fraction = 0.0;
};

// Monte-Carlo average of required_power over random effective directions;
// trials use per-trial RNG streams derived from (seed, trial), so results do
// not depend on evaluation order or thread count.
TradeoffRow tradeoff_row(const Codebook& cb, const LinkBudget& budget, const MonteCarloConfig& mc,
                         int threads = 0);

std::vector<TradeoffRow> power_tradeoff_curve(const std::vector<const Codebook*>& codebooks,
                                              const LinkBudget& budget, const MonteCarloConfig& mc,
                                              int threads = 0);

struct Heatmap {
    std::vector<double> betas_y;
    std::vector<double> betas_z;
    // Row-major (i_y, i_z): normalized gain max over codewords, in dB.
    Eigen::MatrixXd composite_db;
    std::vector<Eigen::MatrixXd> per_codeword_db;  // filled on request
};

Heatmap heatmap_export(const IrsGeometry& geom, const Codebook& cb, int resolution,
                       bool per_codeword = false);

double watts_to_dbm(double watts);

// Canonical CSV writers (17 significant digits, '\n' line ends).
void write_pattern_csv(std::ostream& os, const std::vector<double>& betas,
                       const std::vector<std::vector<double>>& gain_db_per_codeword, char axis);
void write_tradeoff_csv(std::ostream& os, const std::vector<TradeoffRow>& rows);
void write_heatmap_csv(std::ostream& os, const Heatmap& hm, const Eigen::MatrixXd& matrix);

}  // namespace irscb
