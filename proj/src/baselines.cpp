// SPDX-License-Identifier: Apache-2.0

#include "irscb/baselines.hpp"

#include <cmath>

namespace irscb {

namespace {

double wrap_phase(double ph) {
    ph = std::remainder(ph, kTwoPi);
    if (ph <= -kPi) ph = kPi;
    return ph;
}

}  // namespace

Codeword linear_codeword(const IrsGeometry& geom, const EffectiveDirection& center) {
    geom.validate();
    Codeword cw;
    cw.mode = PhaseMode::kContinuous;
    cw.phases = steering_phases(geom, center);
    for (double& ph : cw.phases) ph = wrap_phase(ph);
    return cw;
}

Codeword linear_codeword(const IrsGeometry& geom, const BetaInterval& iv_y,
                         const BetaInterval& iv_z) {
    return linear_codeword(geom, EffectiveDirection{iv_y.center(), iv_z.center()});
}

Codeword quadratic_codeword(const IrsGeometry& geom, const BetaInterval& iv_y,
                            const BetaInterval& iv_z, const QuadraticProfileConfig& cfg) {
    geom.validate();
    double cy = cfg.c_y;
    double cz = cfg.c_z;
    if (cfg.auto_coefficients) {
        cy = geom.q_y > 1 ? geom.phase_per_beta_y() * iv_y.width() / (2.0 * (geom.q_y - 1)) : 0.0;
        cz = geom.q_z > 1 ? geom.phase_per_beta_z() * iv_z.width() / (2.0 * (geom.q_z - 1)) : 0.0;
    }
    if (!std::isfinite(cy) || !std::isfinite(cz))
        throw std::invalid_argument("quadratic_codeword: chirp coefficients must be finite");

    Codeword cw = linear_codeword(geom, iv_y, iv_z);
    const double my = 0.5 * (geom.q_y - 1);
    const double mz = 0.5 * (geom.q_z - 1);
    for (int qy = 0; qy < geom.q_y; ++qy)
        for (int qz = 0; qz < geom.q_z; ++qz) {
            const std::size_t idx = static_cast<std::size_t>(qy * geom.q_z + qz);
            const double chirp = cy * (qy - my) * (qy - my) + cz * (qz - mz) * (qz - mz);
            cw.phases[idx] = wrap_phase(cw.phases[idx] + chirp);
        }
    return cw;
}

}  // namespace irscb
