// SPDX-License-Identifier: Apache-2.0

#include "irscb/grid.hpp"

#include <algorithm>
#include <cmath>

namespace irscb {

namespace {

BetaInterval nth_interval(double beta_bar, int m, int count) {
    // Exact shared endpoints between neighbours: both are computed from the
    // same expression, so the union covers the range with no gaps.
    const double half = 0.5 * beta_bar;
    BetaInterval iv;
    iv.lo = -half + beta_bar * (static_cast<double>(m) / count);
    iv.hi = -half + beta_bar * (static_cast<double>(m + 1) / count);
    if (m == count - 1) iv.hi = half;
    if (m == 0) iv.lo = -half;
    return iv;
}

int lookup_index(double beta, double beta_bar, int count) {
    const double half = 0.5 * beta_bar;
    if (beta < -half || beta > half)
        throw std::out_of_range("BetaGrid: beta outside the covered range");
    if (beta == -half) return 0;
    int idx = static_cast<int>(std::ceil((beta + half) / beta_bar * count)) - 1;
    idx = std::clamp(idx, 0, count - 1);
    // Guard against rounding at interior boundaries.
    while (idx > 0 && beta <= nth_interval(beta_bar, idx - 1, count).hi &&
           beta < nth_interval(beta_bar, idx, count).lo)
        --idx;
    while (idx < count - 1 && beta > nth_interval(beta_bar, idx, count).hi) ++idx;
    return idx;
}

}  // namespace

BetaInterval BetaGrid::interval_y(int my) const {
    if (my < 0 || my >= m_y) throw std::out_of_range("BetaGrid: y interval index out of range");
    return nth_interval(beta_bar_y, my, m_y);
}

BetaInterval BetaGrid::interval_z(int mz) const {
    if (mz < 0 || mz >= m_z) throw std::out_of_range("BetaGrid: z interval index out of range");
    return nth_interval(beta_bar_z, mz, m_z);
}

int BetaGrid::interval_index_y(double beta) const { return lookup_index(beta, beta_bar_y, m_y); }
int BetaGrid::interval_index_z(double beta) const { return lookup_index(beta, beta_bar_z, m_z); }

double beta_bar_for_spacing(double d_wavelengths) {
    if (!(d_wavelengths > 0.0))
        throw std::invalid_argument("beta_bar_for_spacing: spacing must be positive");
    return std::min(4.0, 1.0 / d_wavelengths);
}

BetaGrid build_grid(const IrsGeometry& geom, int m_y, int m_z, int p_y, int p_z) {
    geom.validate();
    if (m_y < 1 || m_z < 1) throw std::invalid_argument("build_grid: interval counts must be >= 1");
    if (p_y < 1 || p_z < 1) throw std::invalid_argument("build_grid: sample counts must be >= 1");
    BetaGrid g;
    g.m_y = m_y;
    g.m_z = m_z;
    g.beta_bar_y = beta_bar_for_spacing(geom.d_y);
    g.beta_bar_z = beta_bar_for_spacing(geom.d_z);
    g.p_y = p_y;
    g.p_z = p_z;
    return g;
}

std::vector<double> sample_points(const BetaInterval& iv, int p) {
    if (p < 1) throw std::invalid_argument("sample_points: need at least one point");
    std::vector<double> pts(static_cast<std::size_t>(p));
    if (p == 1) {
        pts[0] = iv.center();
        return pts;
    }
    for (int i = 0; i < p; ++i)
        pts[static_cast<std::size_t>(i)] =
            iv.lo + (iv.hi - iv.lo) * (static_cast<double>(i) / (p - 1));
    pts.front() = iv.lo;
    pts.back() = iv.hi;
    return pts;
}

SampleSet sample_interval(const BetaGrid& grid, int m_y, int m_z) {
    SampleSet s;
    s.points_y = sample_points(grid.interval_y(m_y), grid.p_y);
    s.points_z = sample_points(grid.interval_z(m_z), grid.p_z);
    s.m_y = m_y;
    s.m_z = m_z;
    return s;
}

SampleSet sample_box(const BetaInterval& iv_y, const BetaInterval& iv_z, int p_y, int p_z) {
    SampleSet s;
    s.points_y = sample_points(iv_y, p_y);
    s.points_z = sample_points(iv_z, p_z);
    s.m_y = -1;
    s.m_z = -1;
    return s;
}

}  // namespace irscb
