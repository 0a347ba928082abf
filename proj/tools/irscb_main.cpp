// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: `design` synthesizes a codebook file, `evaluate`
// exports pattern cuts, heat maps, or the transmit-power trade-off table as
// CSV. Exit codes: 0 success, 2 usage error, 3 data error, 4 solver failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "irscb/codebook_io.hpp"
#include "irscb/evalsim.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitSolver = 4;

struct DesignArgs {
    int qy = 0, qz = 0;
    double dy = 0.5, dz = 0.5;
    int my = 0, mz = 0;
    int py = 5, pz = 5;
    std::string designer;
    int bits = 0;
    std::uint64_t seed = 1;
    std::string config_path;
    std::string out_path;
    int threads = 0;
};

struct EvalArgs {
    std::vector<std::string> codebooks;
    bool pattern = false;
    std::string pattern_axis = "y";
    bool heatmap = false;
    bool per_codeword = false;
    bool tradeoff = false;
    int resolution = 0;
    double gamma_db = 10.0, freq_ghz = 3.4, d1 = 20.0, d2 = 20.0;
    double bw_mhz = 20.0, noise_dbm_hz = -174.0;
    long trials = 10000;
    std::uint64_t seed = 1;
    std::string sampling = "beta";
    std::string out_dir = ".";
    int threads = 0;
};

void apply_config_file(const std::string& path, irscb::ScaConfig& sca, irscb::BnbConfig& bnb,
                       std::string& discrete_method, int& threads) {
    std::ifstream is(path);
    if (!is) throw irscb::SchemaError("config: cannot open " + path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(is);
    } catch (const std::exception& e) {
        throw irscb::SchemaError(std::string("config: invalid JSON: ") + e.what());
    }
    if (j.contains("sca")) {
        const auto& s = j["sca"];
        if (s.contains("eta_init")) sca.eta_init = s["eta_init"].get<double>();
        if (s.contains("eta_growth")) sca.eta_growth = s["eta_growth"].get<double>();
        if (s.contains("eta_max")) sca.eta_max = s["eta_max"].get<double>();
        if (s.contains("i_max")) sca.i_max = s["i_max"].get<int>();
        if (s.contains("tol_objective")) sca.tol_objective = s["tol_objective"].get<double>();
        if (s.contains("tol_rank")) sca.tol_rank = s["tol_rank"].get<double>();
        if (s.contains("restarts")) sca.restarts = s["restarts"].get<int>();
    }
    if (j.contains("bnb")) {
        const auto& b = j["bnb"];
        if (b.contains("node_limit")) bnb.node_limit = b["node_limit"].get<long>();
        if (b.contains("gap_tolerance")) bnb.gap_tolerance = b["gap_tolerance"].get<double>();
        if (b.contains("branching")) bnb.branching = b["branching"].get<std::string>();
        if (b.contains("method")) discrete_method = b["method"].get<std::string>();
    }
    if (j.contains("threads")) threads = j["threads"].get<int>();
}

int run_design(const DesignArgs& a) {
    irscb::ScaConfig sca;
    sca.rng_seed = a.seed;
    irscb::BnbConfig bnb;
    std::string discrete_method = "exact";
    int threads = a.threads;
    if (!a.config_path.empty()) apply_config_file(a.config_path, sca, bnb, discrete_method, threads);

    irscb::IrsGeometry geom{a.qy, a.qz, a.dy, a.dz};
    geom.validate();
    const irscb::BetaGrid grid = irscb::build_grid(geom, a.my, a.mz, a.py, a.pz);

    irscb::DesignerSpec designer;
    if (a.designer == "continuous") {
        designer = irscb::ContinuousDesigner{sca};
    } else if (a.designer == "discrete") {
        irscb::DiscreteDesigner d;
        d.bits = a.bits;
        d.bnb = bnb;
        d.method = discrete_method;
        d.sca = sca;
        designer = d;
    } else if (a.designer == "linear") {
        designer = irscb::LinearDesigner{};
    } else {
        designer = irscb::QuadraticDesignerSpec{};
    }

    const irscb::Codebook cb = irscb::generate_codebook(geom, grid, designer, threads);
    irscb::save_codebook(a.out_path, cb);
    std::cout << "wrote " << a.out_path << " (" << cb.codewords.size() << " codewords)\n";
    return 0;
}

int run_evaluate(const EvalArgs& a) {
    std::vector<irscb::Codebook> books;
    books.reserve(a.codebooks.size());
    for (const auto& path : a.codebooks) books.push_back(irscb::load_codebook(path));
    const std::filesystem::path dir(a.out_dir);

    if (a.pattern || a.heatmap) {
        const irscb::Codebook& cb = books.front();
        if (a.pattern) {
            const bool along_y = a.pattern_axis == "y";
            const double half =
                0.5 * (along_y ? cb.grid.beta_bar_y : cb.grid.beta_bar_z);
            std::vector<double> betas(static_cast<std::size_t>(a.resolution));
            for (int i = 0; i < a.resolution; ++i)
                betas[static_cast<std::size_t>(i)] =
                    a.resolution == 1 ? 0.0
                                      : -half + 2.0 * half * (static_cast<double>(i) / (a.resolution - 1));
            std::vector<std::vector<double>> cols;
            irscb::PatternOptions opt;
            opt.in_db = true;
            for (const auto& cw : cb.codewords) {
                std::vector<double> col(betas.size());
                for (std::size_t i = 0; i < betas.size(); ++i) {
                    irscb::EffectiveDirection dir;
                    (along_y ? dir.beta_y : dir.beta_z) = betas[i];
                    const double g = std::norm(irscb::response(cb.geometry, cw, dir));
                    col[i] = 10.0 * std::log10(std::max(g, 1e-300));
                }
                cols.push_back(std::move(col));
            }
            std::ofstream os(dir / "pattern.csv", std::ios::binary);
            if (!os) throw std::runtime_error("cannot open pattern.csv for writing");
            irscb::write_pattern_csv(os, betas, cols, along_y ? 'y' : 'z');
            std::cout << "wrote " << (dir / "pattern.csv").string() << "\n";
        }
        if (a.heatmap) {
            const irscb::Heatmap hm =
                irscb::heatmap_export(cb.geometry, cb, a.resolution, a.per_codeword);
            {
                std::ofstream os(dir / "heatmap.csv", std::ios::binary);
                if (!os) throw std::runtime_error("cannot open heatmap.csv for writing");
                irscb::write_heatmap_csv(os, hm, hm.composite_db);
            }
            for (std::size_t k = 0; k < hm.per_codeword_db.size(); ++k) {
                char name[32];
                std::snprintf(name, sizeof name, "heatmap_%03zu.csv", k);
                std::ofstream os(dir / name, std::ios::binary);
                irscb::write_heatmap_csv(os, hm, hm.per_codeword_db[k]);
            }
            std::cout << "wrote " << (dir / "heatmap.csv").string() << "\n";
        }
        return 0;
    }

    // Trade-off table.
    const irscb::LinkBudget budget = irscb::LinkBudget::from_engineering(
        a.gamma_db, a.freq_ghz, a.d1, a.d2, a.bw_mhz, a.noise_dbm_hz);
    irscb::MonteCarloConfig mc;
    mc.n_trials = a.trials;
    mc.rng_seed = a.seed;
    mc.sampling = a.sampling == "angle" ? irscb::AngleSampling::kAngleUniform
                                        : irscb::AngleSampling::kBetaUniform;
    std::vector<const irscb::Codebook*> ptrs;
    for (const auto& b : books) ptrs.push_back(&b);
    const std::vector<irscb::TradeoffRow> rows =
        irscb::power_tradeoff_curve(ptrs, budget, mc, a.threads);
    std::ofstream os(dir / "tradeoff.csv", std::ios::binary);
    if (!os) throw std::runtime_error("cannot open tradeoff.csv for writing");
    irscb::write_tradeoff_csv(os, rows);
    std::cout << "wrote " << (dir / "tradeoff.csv").string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Phase-shift codebook synthesis and evaluation for large reflecting surfaces"};
    app.require_subcommand(1);

    DesignArgs d;
    CLI::App* design = app.add_subcommand("design", "Synthesize a codebook file");
    design->add_option("--qy", d.qy, "Elements along y")->required();
    design->add_option("--qz", d.qz, "Elements along z")->required();
    design->add_option("--dy", d.dy, "Element spacing along y, wavelengths");
    design->add_option("--dz", d.dz, "Element spacing along z, wavelengths");
    design->add_option("--my", d.my, "Design intervals along y")->required();
    design->add_option("--mz", d.mz, "Design intervals along z")->required();
    design->add_option("--py", d.py, "Constraint samples per interval along y");
    design->add_option("--pz", d.pz, "Constraint samples per interval along z");
    design->add_option("--designer", d.designer, "continuous|discrete|linear|quadratic")
        ->required()
        ->check(CLI::IsMember({"continuous", "discrete", "linear", "quadratic"}));
    design->add_option("--bits", d.bits, "Phase bits (discrete designer only)");
    design->add_option("--seed", d.seed, "Design RNG seed");
    design->add_option("--config", d.config_path, "JSON config overrides");
    design->add_option("--threads", d.threads, "Worker threads (0 = auto)");
    design->add_option("--out", d.out_path, "Output codebook file")->required();

    EvalArgs e;
    CLI::App* eval = app.add_subcommand("evaluate", "Evaluate codebooks to CSV");
    eval->add_option("--codebook", e.codebooks, "Codebook file(s)")->required();
    eval->add_option("--pattern-cut", e.pattern_axis, "Axis for a 1D pattern cut (y|z)")
        ->check(CLI::IsMember({"y", "z"}));
    eval->add_flag("--heatmap", e.heatmap, "Export the composite coverage heat map");
    eval->add_flag("--per-codeword", e.per_codeword, "Also export per-codeword heat maps");
    eval->add_flag("--tradeoff", e.tradeoff, "Export the transmit-power trade-off table");
    eval->add_option("--resolution", e.resolution, "Grid points per axis for pattern/heatmap");
    eval->add_option("--gamma-db", e.gamma_db, "Required SNR, dB");
    eval->add_option("--freq-ghz", e.freq_ghz, "Carrier frequency, GHz");
    eval->add_option("--d1", e.d1, "Transmitter-surface distance, m");
    eval->add_option("--d2", e.d2, "Surface-user distance, m");
    eval->add_option("--bw-mhz", e.bw_mhz, "Bandwidth, MHz");
    eval->add_option("--noise-dbm-hz", e.noise_dbm_hz, "Noise PSD, dBm/Hz");
    eval->add_option("--trials", e.trials, "Monte-Carlo trials");
    eval->add_option("--seed", e.seed, "Monte-Carlo seed");
    eval->add_option("--sampling", e.sampling, "beta|angle direction sampling")
        ->check(CLI::IsMember({"beta", "angle"}));
    eval->add_option("--out-dir", e.out_dir, "Output directory");
    eval->add_option("--threads", e.threads, "Worker threads (0 = auto)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& ex) {
        const int rc = app.exit(ex);
        return rc == 0 ? 0 : kExitUsage;
    }

    try {
        if (design->parsed()) {
            if (d.designer == "discrete" && d.bits < 1) {
                std::cerr << "error: --designer discrete requires --bits\n";
                return kExitUsage;
            }
            if (d.designer != "discrete" && design->count("--bits") > 0) {
                std::cerr << "error: --bits is only valid with --designer discrete\n";
                return kExitUsage;
            }
            return run_design(d);
        }
        e.pattern = eval->count("--pattern-cut") > 0;
        const int modes = (e.pattern ? 1 : 0) + (e.heatmap ? 1 : 0) + (e.tradeoff ? 1 : 0);
        if (modes != 1) {
            std::cerr << "error: choose exactly one of --pattern-cut, --heatmap, --tradeoff\n";
            return kExitUsage;
        }
        if ((e.pattern || e.heatmap) && e.resolution < 1) {
            std::cerr << "error: --resolution must be >= 1\n";
            return kExitUsage;
        }
        if ((e.pattern || e.heatmap) && e.codebooks.size() != 1) {
            std::cerr << "error: --pattern-cut/--heatmap take exactly one --codebook\n";
            return kExitUsage;
        }
        return run_evaluate(e);
    } catch (const irscb::SchemaError& ex) {
        std::cerr << "data error: " << ex.what() << "\n";
        return kExitData;
    } catch (const std::invalid_argument& ex) {
        std::cerr << "usage error: " << ex.what() << "\n";
        return kExitUsage;
    } catch (const irscb::DesignError& ex) {
        std::cerr << "solver failure: " << ex.what() << "\n";
        return kExitSolver;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return kExitSolver;
    }
}
