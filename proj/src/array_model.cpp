// SPDX-License-Identifier: Apache-2.0

#include "irscb/array_model.hpp"

#include <cmath>

namespace irscb {

void IrsGeometry::validate() const {
    if (q_y < 1 || q_z < 1) throw std::invalid_argument("IrsGeometry: element counts must be >= 1");
    if (!(d_y > 0.0) || !(d_z > 0.0))
        throw std::invalid_argument("IrsGeometry: element spacings must be positive");
}

void AnglePair::validate() const {
    if (!(theta >= 0.0 && theta <= kPi))
        throw std::invalid_argument("AnglePair: theta outside [0, pi]");
    if (!(phi >= -kPi && phi <= kPi))
        throw std::invalid_argument("AnglePair: phi outside [-pi, pi]");
}

CVector Codeword::weights() const {
    CVector w(static_cast<Eigen::Index>(phases.size()));
    for (std::size_t q = 0; q < phases.size(); ++q)
        w[static_cast<Eigen::Index>(q)] = std::polar(1.0, phases[q]);
    return w;
}

EffectiveDirection direction_cosines(const AnglePair& psi_i, const AnglePair& psi_r) {
    psi_i.validate();
    psi_r.validate();
    EffectiveDirection d;
    d.beta_y = std::sin(psi_i.theta) * std::sin(psi_i.phi) +
               std::sin(psi_r.theta) * std::sin(psi_r.phi);
    d.beta_z = std::cos(psi_i.theta) + std::cos(psi_r.theta);
    return d;
}

namespace {

CVector axis_steering(int count, double phase_per_beta, double beta) {
    CVector v(count);
    for (int q = 0; q < count; ++q) v[q] = std::polar(1.0, phase_per_beta * beta * q);
    return v;
}

}  // namespace

CVector steering_vector_y(const IrsGeometry& geom, double beta_y) {
    return axis_steering(geom.q_y, geom.phase_per_beta_y(), beta_y);
}

CVector steering_vector_z(const IrsGeometry& geom, double beta_z) {
    return axis_steering(geom.q_z, geom.phase_per_beta_z(), beta_z);
}

CVector steering_vector(const IrsGeometry& geom, const EffectiveDirection& dir) {
    const CVector y = steering_vector_y(geom, dir.beta_y);
    const CVector z = steering_vector_z(geom, dir.beta_z);
    CVector a(geom.element_count());
    for (int qy = 0; qy < geom.q_y; ++qy)
        for (int qz = 0; qz < geom.q_z; ++qz) a[qy * geom.q_z + qz] = y[qy] * z[qz];
    return a;
}

std::vector<double> steering_phases(const IrsGeometry& geom, const EffectiveDirection& dir) {
    std::vector<double> nu(static_cast<std::size_t>(geom.element_count()));
    const double ky = geom.phase_per_beta_y() * dir.beta_y;
    const double kz = geom.phase_per_beta_z() * dir.beta_z;
    for (int qy = 0; qy < geom.q_y; ++qy)
        for (int qz = 0; qz < geom.q_z; ++qz)
            nu[static_cast<std::size_t>(qy * geom.q_z + qz)] = ky * qy + kz * qz;
    return nu;
}

cdouble response(const IrsGeometry& geom, const Codeword& cw, const EffectiveDirection& dir) {
    if (static_cast<int>(cw.phases.size()) != geom.element_count())
        throw std::invalid_argument("response: codeword length does not match element count");
    // Direct accumulation, avoiding a temporary weight vector.
    cdouble acc(0.0, 0.0);
    const double ky = geom.phase_per_beta_y() * dir.beta_y;
    const double kz = geom.phase_per_beta_z() * dir.beta_z;
    for (int qy = 0; qy < geom.q_y; ++qy)
        for (int qz = 0; qz < geom.q_z; ++qz) {
            const double phase = ky * qy + kz * qz - cw.phases[static_cast<std::size_t>(qy * geom.q_z + qz)];
            acc += std::polar(1.0, phase);
        }
    return acc;
}

Eigen::MatrixXd gain_pattern(const IrsGeometry& geom, const Codeword& cw,
                             const std::vector<double>& betas_y,
                             const std::vector<double>& betas_z, const PatternOptions& opt) {
    if (static_cast<int>(cw.phases.size()) != geom.element_count())
        throw std::invalid_argument("gain_pattern: codeword length does not match element count");
    const Eigen::Index ny = static_cast<Eigen::Index>(betas_y.size());
    const Eigen::Index nz = static_cast<Eigen::Index>(betas_z.size());
    Eigen::MatrixXd out(ny, nz);

    // Factor the evaluation through per-axis partial sums: with w indexed
    // (q_y, q_z), w^H (y (x) z) = sum_qy conj exp(...) * (row_qy(w)^H z),
    // which drops the cost from O(Q) to O(Q_z) per grid point after an
    // O(Q Q_z)-per-row precomputation. For non-separable codewords we still
    // need the inner sums per (qy, beta_z), so precompute those.
    const CVector w = cw.weights();
    Eigen::MatrixXcd inner(geom.q_y, nz);  // inner(qy, j) = sum_qz conj(w_{qy,qz}) z_j[qz]
    for (Eigen::Index j = 0; j < nz; ++j) {
        const CVector z = steering_vector_z(geom, betas_z[static_cast<std::size_t>(j)]);
        for (int qy = 0; qy < geom.q_y; ++qy) {
            cdouble s(0.0, 0.0);
            for (int qz = 0; qz < geom.q_z; ++qz) s += std::conj(w[qy * geom.q_z + qz]) * z[qz];
            inner(qy, j) = s;
        }
    }
    const double q2 = static_cast<double>(geom.element_count()) * geom.element_count();
    for (Eigen::Index i = 0; i < ny; ++i) {
        const CVector y = steering_vector_y(geom, betas_y[static_cast<std::size_t>(i)]);
        for (Eigen::Index j = 0; j < nz; ++j) {
            cdouble g(0.0, 0.0);
            for (int qy = 0; qy < geom.q_y; ++qy) g += y[qy] * inner(qy, j);
            double v = std::norm(g);
            if (opt.normalize) v /= q2;
            if (opt.in_db) v = 10.0 * std::log10(std::max(v, 1e-300));
            out(i, j) = v;
        }
    }
    return out;
}

double end_to_end_path_loss(const IrsGeometry& geom, const Codeword& cw,
                            const EffectiveDirection& dir, double pl_t, double pl_r) {
    if (!(pl_t > 0.0 && pl_t <= 1.0) || !(pl_r > 0.0 && pl_r <= 1.0))
        throw std::invalid_argument("end_to_end_path_loss: path-loss factors must be in (0, 1]");
    const double gbar = geom.aperture_gain();
    return gbar * gbar * std::norm(response(geom, cw, dir)) * pl_t * pl_r;
}

double free_space_path_loss(double distance_m, double frequency_hz) {
    if (!(distance_m > 0.0) || !(frequency_hz > 0.0))
        throw std::invalid_argument("free_space_path_loss: distance and frequency must be positive");
    const double x = kSpeedOfLight / (4.0 * kPi * distance_m * frequency_hz);
    return x * x;
}

}  // namespace irscb
