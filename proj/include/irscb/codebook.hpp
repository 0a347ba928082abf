// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "irscb/baselines.hpp"
#include "irscb/discrete_designer.hpp"
#include "irscb/sca_designer.hpp"

#include <optional>
#include <variant>

namespace irscb {

struct ContinuousDesigner {
    ScaConfig sca;
};

struct DiscreteDesigner {
    int bits = 1;
    BnbConfig bnb;
    // "exact" solves the binary program by branch and bound; "rounded"
    // quantizes the continuous design (for sizes where the exact solve is
    // out of reach) and is always labeled non-optimal.
    std::string method = "exact";
    ScaConfig sca;  // used by the rounded method
};

struct LinearDesigner {};

struct QuadraticDesignerSpec {
    QuadraticProfileConfig profile;
};

using DesignerSpec =
    std::variant<ContinuousDesigner, DiscreteDesigner, LinearDesigner, QuadraticDesignerSpec>;

std::string designer_tag(const DesignerSpec& spec);

// Per-codeword design metadata for discrete codewords.
struct DiscreteSolveInfo {
    bool optimal = false;
    double upper_bound = 0.0;
    long nodes = 0;
};

struct Codebook {
    IrsGeometry geometry;
    BetaGrid grid;
    DesignerSpec designer;
    // Row-major in (m_y, m_z): index = m_y * grid.m_z + m_z.
    std::vector<Codeword> codewords;
    std::vector<DesignReport> reports;             // continuous designs only
    std::vector<DiscreteSolveInfo> discrete_info;  // discrete designs only

    int index_of(int m_y, int m_z) const { return m_y * grid.m_z + m_z; }
    void validate() const;
};

// Designs one codeword per grid interval with the selected designer.
// Codewords are independent and run in parallel; per-codeword seeds are
// derived from (seed, m_y, m_z) so the result is identical for any thread
// count. A failed codeword aborts the whole codebook.
Codebook generate_codebook(const IrsGeometry& geom, const BetaGrid& grid,
                           const DesignerSpec& designer, int threads = 0);

}  // namespace irscb
