// SPDX-License-Identifier: Apache-2.0
//
// End-to-end checks of the command-line tool. Takes the binary path as
// argv[1], runs it through std::system, and inspects exit codes and outputs.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "irscb/codebook_io.hpp"
#include "irscb/discrete_designer.hpp"
#include "irscb/evalsim.hpp"

namespace fs = std::filesystem;
using namespace irscb;

namespace {

int failures = 0;

void expect(bool ok, const std::string& what) {
    if (!ok) {
        ++failures;
        std::cerr << "FAIL: " << what << "\n";
    }
}

std::string g_cli;
fs::path g_dir;

int run(const std::string& args, const std::string& tag) {
    const std::string out = (g_dir / (tag + ".out")).string();
    const std::string err = (g_dir / (tag + ".err")).string();
    const std::string cmd = g_cli + " " + args + " >" + out + " 2>" + err;
    const int rc = std::system(cmd.c_str());
    if (rc == -1) return -1;
    return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: test_cli <path-to-irscb-binary>\n";
        return 1;
    }
    g_cli = argv[1];
    g_dir = fs::path("cli_test_tmp");
    fs::remove_all(g_dir);
    fs::create_directories(g_dir);
    const std::string cb = (g_dir / "cb.json").string();

    // Usage errors exit with 2 and name the problem.
    expect(run("design --qy 4 --qz 4 --my 1 --mz 1 --designer continuous", "missing_out") == 2,
           "missing --out exits 2");
    expect(slurp(g_dir / "missing_out.err").find("--out") != std::string::npos,
           "missing --out is named in the diagnostic");
    expect(run("design --qy 4 --qz 4 --my 1 --mz 1 --designer continuous --bits 2 --out " + cb,
               "bits_continuous") == 2,
           "--bits with continuous exits 2");
    expect(run("design --qy 4 --qz 4 --my 1 --mz 1 --designer discrete --out " + cb,
               "discrete_nobits") == 2,
           "discrete without --bits exits 2");

    // Continuous design on the full range, single interval.
    expect(run("design --qy 4 --qz 4 --my 1 --mz 1 --designer continuous --seed 5 --out " + cb,
               "design_cont") == 0,
           "continuous design exits 0");
    {
        const Codebook loaded = load_codebook(cb);
        expect(loaded.codewords.size() == 1, "one codeword present");
        // Single full-range interval at Q=16: five samples per axis leave no
        // coherent direction, but the design must still clear a meaningful
        // floor and be reproducible.
        expect(loaded.codewords[0].achieved_alpha > 0.0, "positive floor");
        const std::string again = (g_dir / "cb2.json").string();
        expect(run("design --qy 4 --qz 4 --my 1 --mz 1 --designer continuous --seed 5 --out " +
                       again,
                   "design_cont2") == 0,
               "re-design exits 0");
        expect(slurp(cb) == slurp(again), "same seed gives byte-identical codebooks");
    }

    // A point-like design: tight interval, alpha close to the coherent bound.
    const std::string cbp = (g_dir / "cbp.json").string();
    expect(run("design --qy 4 --qz 4 --my 16 --mz 16 --py 2 --pz 2 --designer continuous "
               "--seed 3 --out " +
                   cbp,
               "design_point") == 0,
           "narrow-interval design exits 0");

    // Discrete design matches the enumeration oracle exactly.
    const std::string cbd = (g_dir / "cbd.json").string();
    expect(run("design --qy 3 --qz 3 --my 1 --mz 1 --py 2 --pz 2 --designer discrete --bits 2 "
               "--out " +
                   cbd,
               "design_disc") == 0,
           "discrete design exits 0");
    {
        const Codebook loaded = load_codebook(cbd);
        IrsGeometry g{3, 3, 0.5, 0.5};
        const BetaGrid grid = build_grid(g, 1, 1, 2, 2);
        const OracleResult oracle =
            enumerate_oracle(g, sample_interval(grid, 0, 0), PhaseAlphabet::from_bits(2));
        expect(loaded.codewords[0].achieved_alpha == oracle.alpha,
               "discrete CLI design equals the oracle optimum");
    }

    // Evaluate: pattern cut determinism and re-save invariance.
    expect(run("evaluate --codebook " + cb + " --pattern-cut y --resolution 101 --out-dir " +
                   g_dir.string(),
               "eval_pat") == 0,
           "pattern evaluation exits 0");
    const std::string pat1 = slurp(g_dir / "pattern.csv");
    {
        // Re-save the loaded codebook and evaluate again: byte-identical CSV.
        const Codebook loaded = load_codebook(cb);
        const std::string resaved = (g_dir / "cb_resaved.json").string();
        save_codebook(resaved, loaded);
        expect(run("evaluate --codebook " + resaved + " --pattern-cut y --resolution 101 "
                   "--out-dir " +
                       g_dir.string(),
                   "eval_pat2") == 0,
               "pattern evaluation of the re-saved codebook exits 0");
        expect(slurp(g_dir / "pattern.csv") == pat1, "persistence round trip preserves the CSV");
    }

    // Evaluate: heat map + per-codeword maps.
    expect(run("evaluate --codebook " + cbp + " --heatmap --per-codeword --resolution 21 "
               "--out-dir " +
                   g_dir.string(),
               "eval_hm") == 0,
           "heatmap evaluation exits 0");
    expect(fs::exists(g_dir / "heatmap.csv"), "heatmap.csv written");
    expect(fs::exists(g_dir / "heatmap_000.csv"), "per-codeword heatmap written");

    // Evaluate: trade-off table with the reference link parameters.
    expect(run("evaluate --codebook " + cb + " --tradeoff --gamma-db 10 --freq-ghz 3.4 --d1 20 "
               "--d2 20 --bw-mhz 20 --noise-dbm-hz -174 --trials 200 --seed 9 --out-dir " +
                   g_dir.string(),
               "eval_tr") == 0,
           "tradeoff evaluation exits 0");
    {
        const std::string table = slurp(g_dir / "tradeoff.csv");
        std::istringstream is(table);
        std::string header, row;
        std::getline(is, header);
        std::getline(is, row);
        expect(header == "designer,M,mean_preq_dbm,preq_full_w,preq_ideal_w,capped_fraction",
               "tradeoff header is canonical");
        // preq_full must match the closed form evaluated independently.
        const double c = 299792458.0;
        const double x = c / (4.0 * kPi * 20.0 * 3.4e9);
        const double pl = x * x;
        const double sigma2 = std::pow(10.0, -17.4) * 1e-3 * 20e6;
        const double gbar = kPi;
        const double expect_full = 10.0 * sigma2 / (gbar * gbar * pl * pl * 256.0);
        std::string cell;
        std::istringstream rs(row);
        std::getline(rs, cell, ',');  // designer
        std::getline(rs, cell, ',');  // M
        std::getline(rs, cell, ',');  // mean dBm
        std::getline(rs, cell, ',');  // preq_full_w
        const double got = std::strtod(cell.c_str(), nullptr);
        expect(std::abs(got - expect_full) <= 1e-12 * expect_full,
               "preq_full matches the closed form to 1e-12");
        // Determinism: run again, compare bytes.
        run("evaluate --codebook " + cb + " --tradeoff --gamma-db 10 --freq-ghz 3.4 --d1 20 "
            "--d2 20 --bw-mhz 20 --noise-dbm-hz -174 --trials 200 --seed 9 --out-dir " +
                g_dir.string(),
            "eval_tr2");
        expect(slurp(g_dir / "tradeoff.csv") == table, "tradeoff CSV is seed-deterministic");
    }

    // Usage and data errors on evaluation.
    expect(run("evaluate --codebook " + cb + " --pattern-cut y --resolution 0 --out-dir " +
                   g_dir.string(),
               "eval_res0") == 2,
           "resolution 0 exits 2");
    expect(run("evaluate --codebook " + cb + " --out-dir " + g_dir.string(), "eval_nomode") == 2,
           "missing mode exits 2");
    {
        const std::string broken = (g_dir / "broken.json").string();
        std::ofstream os(broken);
        os << "{\"format_version\":9}";
        os.close();
        expect(run("evaluate --codebook " + broken + " --pattern-cut y --resolution 4 --out-dir " +
                       g_dir.string(),
                   "eval_bad") == 3,
               "schema-invalid codebook exits 3");
    }

    if (failures == 0) {
        std::cout << "all cli checks passed\n";
        return 0;
    }
    std::cerr << failures << " cli check(s) failed\n";
    return 1;
}
