// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <vector>

namespace irscb {

using cdouble = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;
inline constexpr double kSpeedOfLight = 299792458.0;  // m/s

// Planar reflecting surface of q_y x q_z unit cells on a rectangular lattice.
// Spacings are stored in wavelengths, so the phase progression per unit of
// effective direction is 2*pi*d; an absolute wavelength is only needed when
// converting to link budgets.
struct IrsGeometry {
    int q_y = 1;
    int q_z = 1;
    double d_y = 0.5;  // element spacing, wavelengths
    double d_z = 0.5;

    int element_count() const { return q_y * q_z; }
    double phase_per_beta_y() const { return kTwoPi * d_y; }  // k * d_y
    double phase_per_beta_z() const { return kTwoPi * d_z; }
    // Unit-cell aperture factor 4*pi*A_uc/lambda^2; dimensionless because the
    // spacings are in wavelengths. Treated as a pure constant (no element
    // directivity model).
    double aperture_gain() const { return 4.0 * kPi * d_y * d_z; }

    void validate() const;  // throws std::invalid_argument
};

struct AnglePair {
    double theta = 0.0;  // elevation, radians in [0, pi]
    double phi = 0.0;    // azimuth, radians in [-pi, pi]

    void validate() const;
};

// Per-axis sum of incident and reflected direction cosines. The array
// response depends on the angles only through this pair, which makes it the
// natural coordinate for codebook design.
struct EffectiveDirection {
    double beta_y = 0.0;
    double beta_z = 0.0;
};

enum class PhaseMode { kContinuous, kDiscrete };

// One phase-shift configuration for the whole surface. Element (q_y, q_z)
// maps to flat index q = q_y * Q_z + q_z (z index fastest), matching the
// Kronecker product y(beta_y) (x) z(beta_z). This is the single layout
// convention used repo-wide.
struct Codeword {
    std::vector<double> phases;  // nu_q, radians
    PhaseMode mode = PhaseMode::kContinuous;
    int bits = 0;                   // discrete mode only; S = 2^bits levels
    double achieved_alpha = 0.0;    // worst-case sampled |g/g_bar|^2

    // w_q = exp(j nu_q); unit modulus by construction.
    CVector weights() const;
};

EffectiveDirection direction_cosines(const AnglePair& psi_i, const AnglePair& psi_r);

// y(beta)_q = exp(j k d beta q), q = 0..Q-1.
CVector steering_vector_y(const IrsGeometry& geom, double beta_y);
CVector steering_vector_z(const IrsGeometry& geom, double beta_z);
// y(beta_y) (x) z(beta_z), z index fastest.
CVector steering_vector(const IrsGeometry& geom, const EffectiveDirection& dir);

// Conjugate-steering phases for a target direction: the codeword equals the
// steering vector there, so w^H (y (x) z) sums coherently to Q.
std::vector<double> steering_phases(const IrsGeometry& geom, const EffectiveDirection& dir);

// Normalized response g/g_bar = w^H (y(beta_y) (x) z(beta_z)).
// |result| <= Q, with equality iff the phases conjugate the steering phases.
cdouble response(const IrsGeometry& geom, const Codeword& cw, const EffectiveDirection& dir);

struct PatternOptions {
    bool in_db = false;
    bool normalize = false;  // divide |g/g_bar|^2 by Q^2 (g_max normalization)
};

// |g/g_bar|^2 over the tensor grid betas_y x betas_z; entry (i, j) is the
// gain at (betas_y[i], betas_z[j]).
Eigen::MatrixXd gain_pattern(const IrsGeometry& geom, const Codeword& cw,
                             const std::vector<double>& betas_y,
                             const std::vector<double>& betas_z,
                             const PatternOptions& opt = {});

// g_bar^2 * |g/g_bar|^2 * pl_t * pl_r. Path-loss factors must be in (0, 1].
double end_to_end_path_loss(const IrsGeometry& geom, const Codeword& cw,
                            const EffectiveDirection& dir, double pl_t, double pl_r);

// Free-space factor (c / (4 pi d f))^2.
double free_space_path_loss(double distance_m, double frequency_hz);

}  // namespace irscb
