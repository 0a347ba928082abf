// SPDX-License-Identifier: Apache-2.0

#include "irscb/codebook_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace irscb {

namespace {

using nlohmann::json;

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_sca_config(std::string& out, const ScaConfig& c) {
    out += "{\"eta_init\":" + g17(c.eta_init) + ",\"eta_growth\":" + g17(c.eta_growth) +
           ",\"eta_max\":" + g17(c.eta_max) + ",\"i_max\":" + std::to_string(c.i_max) +
           ",\"tol_objective\":" + g17(c.tol_objective) + ",\"tol_rank\":" + g17(c.tol_rank) +
           ",\"rng_seed\":" + std::to_string(c.rng_seed) +
           ",\"restarts\":" + std::to_string(c.restarts) + "}";
}

ScaConfig read_sca_config(const json& j) {
    ScaConfig c;
    c.eta_init = j.at("eta_init").get<double>();
    c.eta_growth = j.at("eta_growth").get<double>();
    c.eta_max = j.at("eta_max").get<double>();
    c.i_max = j.at("i_max").get<int>();
    c.tol_objective = j.at("tol_objective").get<double>();
    c.tol_rank = j.at("tol_rank").get<double>();
    c.rng_seed = j.at("rng_seed").get<std::uint64_t>();
    c.restarts = j.at("restarts").get<int>();
    return c;
}

}  // namespace

std::string codebook_to_string(const Codebook& cb) {
    cb.validate();
    std::string out;
    out.reserve(4096 + cb.codewords.size() * cb.codewords.front().phases.size() * 24);
    out += "{\n\"format_version\":" + std::to_string(kCodebookFormatVersion) + ",\n";
    out += "\"geometry\":{\"qy\":" + std::to_string(cb.geometry.q_y) +
           ",\"qz\":" + std::to_string(cb.geometry.q_z) + ",\"dy\":" + g17(cb.geometry.d_y) +
           ",\"dz\":" + g17(cb.geometry.d_z) + "},\n";
    out += "\"grid\":{\"my\":" + std::to_string(cb.grid.m_y) +
           ",\"mz\":" + std::to_string(cb.grid.m_z) + ",\"beta_bar_y\":" + g17(cb.grid.beta_bar_y) +
           ",\"beta_bar_z\":" + g17(cb.grid.beta_bar_z) + ",\"py\":" + std::to_string(cb.grid.p_y) +
           ",\"pz\":" + std::to_string(cb.grid.p_z) + "},\n";
    out += "\"designer\":\"" + designer_tag(cb.designer) + "\",\n";
    out += "\"designer_config\":";
    if (const auto* cd = std::get_if<ContinuousDesigner>(&cb.designer)) {
        write_sca_config(out, cd->sca);
    } else if (const auto* dd = std::get_if<DiscreteDesigner>(&cb.designer)) {
        out += "{\"bits\":" + std::to_string(dd->bits) + ",\"method\":\"" + dd->method +
               "\",\"node_limit\":" + std::to_string(dd->bnb.node_limit) +
               ",\"gap_tolerance\":" + g17(dd->bnb.gap_tolerance) + ",\"branching\":\"" +
               dd->bnb.branching + "\",\"sca\":";
        write_sca_config(out, dd->sca);
        out += "}";
    } else if (std::holds_alternative<LinearDesigner>(cb.designer)) {
        out += "{\"label\":\"baseline:reconstructed\"}";
    } else {
        const auto& qd = std::get<QuadraticDesignerSpec>(cb.designer);
        out += "{\"label\":\"baseline:reconstructed\",\"auto\":";
        out += qd.profile.auto_coefficients ? "true" : "false";
        out += ",\"c_y\":" + g17(qd.profile.c_y) + ",\"c_z\":" + g17(qd.profile.c_z) + "}";
    }
    out += ",\n\"codewords\":[\n";
    for (std::size_t k = 0; k < cb.codewords.size(); ++k) {
        const auto& cw = cb.codewords[k];
        const int my = static_cast<int>(k) / cb.grid.m_z;
        const int mz = static_cast<int>(k) % cb.grid.m_z;
        out += "{\"my\":" + std::to_string(my) + ",\"mz\":" + std::to_string(mz) + ",\"mode\":\"";
        out += cw.mode == PhaseMode::kDiscrete ? "discrete" : "continuous";
        out += "\",\"bits\":" + std::to_string(cw.bits) +
               ",\"achieved_alpha\":" + g17(cw.achieved_alpha) + ",\"phases\":[";
        for (std::size_t i = 0; i < cw.phases.size(); ++i) {
            if (i) out += ',';
            out += g17(cw.phases[i]);
        }
        out += "]}";
        if (k + 1 < cb.codewords.size()) out += ',';
        out += '\n';
    }
    out += "],\n\"reports\":[\n";
    for (std::size_t k = 0; k < cb.reports.size(); ++k) {
        const auto& r = cb.reports[k];
        out += "{\"iterations\":" + std::to_string(r.iterations) +
               ",\"achieved_alpha\":" + g17(r.achieved_alpha) +
               ",\"sdp_alpha\":" + g17(r.sdp_alpha) +
               ",\"final_rank_residual\":" + g17(r.final_rank_residual) + ",\"rank_converged\":";
        out += r.rank_converged ? "true" : "false";
        out += ",\"relaxation_gap_flagged\":";
        out += r.relaxation_gap_flagged ? "true" : "false";
        out += ",\"restart_index\":" + std::to_string(r.restart_index) + ",\"trace\":[";
        for (std::size_t t = 0; t < r.trace.size(); ++t) {
            const auto& it = r.trace[t];
            if (t) out += ',';
            out += "{\"eta\":" + g17(it.eta) + ",\"objective_before\":" + g17(it.objective_before) +
                   ",\"objective_after\":" + g17(it.objective_after) +
                   ",\"alpha_sdp\":" + g17(it.alpha_sdp) +
                   ",\"rank_residual\":" + g17(it.rank_residual) + ",\"status\":\"" + it.status +
                   "\",\"accepted\":";
            out += it.accepted ? "true" : "false";
            out += "}";
        }
        out += "]}";
        if (k + 1 < cb.reports.size()) out += ',';
        out += '\n';
    }
    out += "],\n\"discrete_info\":[\n";
    for (std::size_t k = 0; k < cb.discrete_info.size(); ++k) {
        const auto& d = cb.discrete_info[k];
        out += "{\"optimal\":";
        out += d.optimal ? "true" : "false";
        out += ",\"upper_bound\":" + g17(d.upper_bound) + ",\"nodes\":" + std::to_string(d.nodes) +
               "}";
        if (k + 1 < cb.discrete_info.size()) out += ',';
        out += '\n';
    }
    out += "]\n}\n";
    return out;
}

void save_codebook(const std::string& path, const Codebook& cb) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("save_codebook: cannot open " + path);
    os << codebook_to_string(cb);
    if (!os) throw std::runtime_error("save_codebook: write failed for " + path);
}

Codebook codebook_from_string(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw SchemaError(std::string("codebook file is not valid JSON: ") + e.what());
    }
    try {
        if (j.at("format_version").get<int>() != kCodebookFormatVersion)
            throw SchemaError("unsupported format_version");

        Codebook cb;
        const auto& jg = j.at("geometry");
        cb.geometry.q_y = jg.at("qy").get<int>();
        cb.geometry.q_z = jg.at("qz").get<int>();
        cb.geometry.d_y = jg.at("dy").get<double>();
        cb.geometry.d_z = jg.at("dz").get<double>();
        if (cb.geometry.q_y < 1 || cb.geometry.q_z < 1)
            throw SchemaError("geometry: element counts must be >= 1");
        if (!(cb.geometry.d_y > 0.0) || !(cb.geometry.d_z > 0.0))
            throw SchemaError("geometry: spacings must be positive");

        const auto& jr = j.at("grid");
        cb.grid.m_y = jr.at("my").get<int>();
        cb.grid.m_z = jr.at("mz").get<int>();
        cb.grid.beta_bar_y = jr.at("beta_bar_y").get<double>();
        cb.grid.beta_bar_z = jr.at("beta_bar_z").get<double>();
        cb.grid.p_y = jr.at("py").get<int>();
        cb.grid.p_z = jr.at("pz").get<int>();
        if (cb.grid.m_y < 1 || cb.grid.m_z < 1) throw SchemaError("grid: interval counts must be >= 1");
        if (cb.grid.p_y < 1 || cb.grid.p_z < 1) throw SchemaError("grid: sample counts must be >= 1");
        if (!(cb.grid.beta_bar_y > 0.0) || !(cb.grid.beta_bar_z > 0.0))
            throw SchemaError("grid: covered spans must be positive");

        const std::string tag = j.at("designer").get<std::string>();
        const auto& jc = j.at("designer_config");
        if (tag == "continuous") {
            ContinuousDesigner d;
            d.sca = read_sca_config(jc);
            cb.designer = d;
        } else if (tag == "discrete") {
            DiscreteDesigner d;
            d.bits = jc.at("bits").get<int>();
            d.method = jc.at("method").get<std::string>();
            d.bnb.node_limit = jc.at("node_limit").get<long>();
            d.bnb.gap_tolerance = jc.at("gap_tolerance").get<double>();
            d.bnb.branching = jc.at("branching").get<std::string>();
            d.sca = read_sca_config(jc.at("sca"));
            if (d.bits < 1) throw SchemaError("designer_config: bits must be >= 1");
            cb.designer = d;
        } else if (tag == "linear") {
            cb.designer = LinearDesigner{};
        } else if (tag == "quadratic") {
            QuadraticDesignerSpec d;
            d.profile.auto_coefficients = jc.at("auto").get<bool>();
            d.profile.c_y = jc.at("c_y").get<double>();
            d.profile.c_z = jc.at("c_z").get<double>();
            cb.designer = d;
        } else {
            throw SchemaError("unknown designer tag: " + tag);
        }

        const int m = cb.grid.codeword_count();
        const int q = cb.geometry.element_count();
        const auto& jcw = j.at("codewords");
        if (static_cast<int>(jcw.size()) != m)
            throw SchemaError("codewords: expected exactly one entry per grid interval");
        cb.codewords.assign(static_cast<std::size_t>(m), Codeword{});
        std::vector<bool> seen(static_cast<std::size_t>(m), false);
        for (const auto& e : jcw) {
            const int my = e.at("my").get<int>();
            const int mz = e.at("mz").get<int>();
            if (my < 0 || my >= cb.grid.m_y || mz < 0 || mz >= cb.grid.m_z)
                throw SchemaError("codewords: interval index out of range");
            const int idx = cb.index_of(my, mz);
            if (seen[static_cast<std::size_t>(idx)])
                throw SchemaError("codewords: duplicate interval index");
            seen[static_cast<std::size_t>(idx)] = true;

            Codeword cw;
            const std::string mode = e.at("mode").get<std::string>();
            if (mode == "continuous")
                cw.mode = PhaseMode::kContinuous;
            else if (mode == "discrete")
                cw.mode = PhaseMode::kDiscrete;
            else
                throw SchemaError("codewords: unknown mode " + mode);
            cw.bits = e.at("bits").get<int>();
            cw.achieved_alpha = e.at("achieved_alpha").get<double>();
            if (!std::isfinite(cw.achieved_alpha) || cw.achieved_alpha < 0.0)
                throw SchemaError("codewords: achieved_alpha must be finite and non-negative");
            const auto& jp = e.at("phases");
            if (static_cast<int>(jp.size()) != q)
                throw SchemaError("codewords: phase vector length does not match the geometry");
            cw.phases.reserve(jp.size());
            for (const auto& v : jp) {
                const double ph = v.get<double>();
                if (!std::isfinite(ph))
                    throw SchemaError("codewords: phases imply a non-unit-modulus weight");
                cw.phases.push_back(ph);
            }
            if (cw.mode == PhaseMode::kDiscrete) {
                if (cw.bits < 1) throw SchemaError("codewords: discrete mode requires bits >= 1");
                const PhaseAlphabet al = PhaseAlphabet::from_bits(cw.bits);
                for (double ph : cw.phases) {
                    const long l = std::lround(ph / al.delta);
                    const double repr =
                        al.base[static_cast<std::size_t>(((l % al.levels) + al.levels) % al.levels)];
                    if (std::abs(std::remainder(ph - repr, kTwoPi)) > 1e-12)
                        throw SchemaError("codewords: discrete phase off the alphabet");
                }
            }
            cb.codewords[static_cast<std::size_t>(idx)] = std::move(cw);
        }

        if (j.contains("reports")) {
            for (const auto& e : j.at("reports")) {
                DesignReport r;
                r.iterations = e.at("iterations").get<int>();
                r.achieved_alpha = e.at("achieved_alpha").get<double>();
                r.sdp_alpha = e.at("sdp_alpha").get<double>();
                r.final_rank_residual = e.at("final_rank_residual").get<double>();
                r.rank_converged = e.at("rank_converged").get<bool>();
                r.relaxation_gap_flagged = e.at("relaxation_gap_flagged").get<bool>();
                r.restart_index = e.at("restart_index").get<int>();
                for (const auto& t : e.at("trace")) {
                    IterationRecord rec;
                    rec.eta = t.at("eta").get<double>();
                    rec.objective_before = t.at("objective_before").get<double>();
                    rec.objective_after = t.at("objective_after").get<double>();
                    rec.alpha_sdp = t.at("alpha_sdp").get<double>();
                    rec.rank_residual = t.at("rank_residual").get<double>();
                    rec.status = t.at("status").get<std::string>();
                    rec.accepted = t.at("accepted").get<bool>();
                    r.trace.push_back(std::move(rec));
                }
                cb.reports.push_back(std::move(r));
            }
            if (!cb.reports.empty() && static_cast<int>(cb.reports.size()) != m)
                throw SchemaError("reports: count does not match the grid");
        }
        if (j.contains("discrete_info")) {
            for (const auto& e : j.at("discrete_info")) {
                DiscreteSolveInfo d;
                d.optimal = e.at("optimal").get<bool>();
                d.upper_bound = e.at("upper_bound").get<double>();
                d.nodes = e.at("nodes").get<long>();
                cb.discrete_info.push_back(d);
            }
            if (!cb.discrete_info.empty() && static_cast<int>(cb.discrete_info.size()) != m)
                throw SchemaError("discrete_info: count does not match the grid");
        }
        return cb;
    } catch (const SchemaError&) {
        throw;
    } catch (const std::exception& e) {
        throw SchemaError(std::string("codebook schema violation: ") + e.what());
    }
}

Codebook load_codebook(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw SchemaError("load_codebook: cannot open " + path);
    std::ostringstream ss;
    ss << is.rdbuf();
    return codebook_from_string(ss.str());
}

}  // namespace irscb
