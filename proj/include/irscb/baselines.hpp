// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "irscb/grid.hpp"

namespace irscb {

// Chirp coefficients for the quadratic profile, radians per squared element
// index. Auto mode picks the coefficient so the instantaneous-frequency sweep
// of the chirp spans the interval width.
struct QuadraticProfileConfig {
    bool auto_coefficients = true;
    double c_y = 0.0;
    double c_z = 0.0;
};

// Conjugate steering at the interval center: pattern peak Q^2 at the center.
Codeword linear_codeword(const IrsGeometry& geom, const EffectiveDirection& center);
Codeword linear_codeword(const IrsGeometry& geom, const BetaInterval& iv_y,
                         const BetaInterval& iv_z);

// Linear steering to the interval center plus a per-axis quadratic phase
// term c_t (q_t - (Q_t-1)/2)^2, widening the beam at the cost of peak gain.
// Auto coefficient: c_t = k d_t dbeta_t / (2 (Q_t - 1)), zero for Q_t = 1.
Codeword quadratic_codeword(const IrsGeometry& geom, const BetaInterval& iv_y,
                            const BetaInterval& iv_z, const QuadraticProfileConfig& cfg = {});

}  // namespace irscb
