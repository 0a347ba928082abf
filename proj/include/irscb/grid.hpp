// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "irscb/array_model.hpp"

namespace irscb {

struct BetaInterval {
    double lo = 0.0;
    double hi = 0.0;
    double width() const { return hi - lo; }
    double center() const { return 0.5 * (lo + hi); }
    bool contains(double beta) const { return beta >= lo && beta <= hi; }
};

// Uniform partition of the effective-direction square
// [-beta_bar_y/2, beta_bar_y/2] x [-beta_bar_z/2, beta_bar_z/2] into
// m_y * m_z design intervals; interval indices are 0-based.
// beta_bar_t = min{4, 1/d_t} bounds the useful range via grating-lobe
// periodicity (the response repeats with period 1/d_t in beta).
struct BetaGrid {
    int m_y = 1;
    int m_z = 1;
    double beta_bar_y = 2.0;
    double beta_bar_z = 2.0;
    int p_y = 5;  // samples per interval per axis
    int p_z = 5;

    int codeword_count() const { return m_y * m_z; }
    BetaInterval interval_y(int my) const;
    BetaInterval interval_z(int mz) const;
    // Index of the interval containing beta (boundaries resolve to the lower
    // interval except at the left edge). Throws if outside the covered range.
    int interval_index_y(double beta) const;
    int interval_index_z(double beta) const;
};

double beta_bar_for_spacing(double d_wavelengths);

BetaGrid build_grid(const IrsGeometry& geom, int m_y, int m_z, int p_y, int p_z);

// Discrete sample sets backing one codeword's constraints; the constraint set
// is the full Cartesian product points_y x points_z.
struct SampleSet {
    std::vector<double> points_y;  // sorted
    std::vector<double> points_z;
    int m_y = 0;  // parent interval indices (0-based); -1 for ad-hoc boxes
    int m_z = 0;

    std::size_t pair_count() const { return points_y.size() * points_z.size(); }
};

// p uniformly spaced points over the closed interval; endpoints included for
// p >= 2, midpoint for p == 1.
std::vector<double> sample_points(const BetaInterval& iv, int p);

SampleSet sample_interval(const BetaGrid& grid, int m_y, int m_z);

// Sample set for an arbitrary interval box (not tied to a grid).
SampleSet sample_box(const BetaInterval& iv_y, const BetaInterval& iv_z, int p_y, int p_z);

}  // namespace irscb
