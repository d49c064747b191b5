// model.hpp — Anisotropic three-level system: spin-1 operators, drives, H_S(t)

#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>
#include <variant>

#include <Eigen/Dense>

namespace lzm {

inline constexpr double kInvSqrt2 = 0.70710678118654752440;

// Linear scan: Omega_z(t) = v t, Omega_x(t) = Delta (constant).
struct LinearDrive {
    double v{1.0};       // scanning velocity, units of omega^2
    double delta{0.5};   // constant tunneling amplitude, units of omega
};

// Periodic: Omega_z(t) = A_z cos(omega_z t), Omega_x(t) = A_x cos(omega_x t).
struct PeriodicDrive {
    double a_z{0.0};
    double omega_z{1.0};
    double a_x{0.0};
    double omega_x{1.0};
};

using DriveSpec = std::variant<LinearDrive, PeriodicDrive>;

inline void validate(const DriveSpec& drive) {
    if (const auto* lin = std::get_if<LinearDrive>(&drive)) {
        if (!(lin->v > 0.0)) throw std::invalid_argument("LinearDrive: v must be > 0");
    } else {
        const auto& per = std::get<PeriodicDrive>(drive);
        if (!(per.omega_z > 0.0) || !(per.omega_x > 0.0))
            throw std::invalid_argument("PeriodicDrive: omega_z and omega_x must be > 0");
    }
}

// All quantities are dimensionless: frequencies in units of the reference
// frequency omega (= omega_z), times in units of 1/omega, hbar = 1.
struct ModelConfig {
    double anisotropy{0.0};  // zero-field splitting D
    DriveSpec drive{PeriodicDrive{}};
};

// (Omega_z, Omega_x) at time t.
inline std::pair<double, double> drive_values(const DriveSpec& drive, double t) {
    if (const auto* lin = std::get_if<LinearDrive>(&drive))
        return {lin->v * t, lin->delta};
    const auto& per = std::get<PeriodicDrive>(drive);
    return {per.a_z * std::cos(per.omega_z * t), per.a_x * std::cos(per.omega_x * t)};
}

// Spin-1 operators on the amplitude slots (A, B, C). The slot paired with
// +Omega_z carries S_z eigenvalue +1, so Sz = diag(1, 0, -1).
inline std::pair<Eigen::Matrix3d, Eigen::Matrix3d> spin1_matrices() {
    Eigen::Matrix3d sz = Eigen::Matrix3d::Zero();
    sz(0, 0) = 1.0;
    sz(2, 2) = -1.0;
    Eigen::Matrix3d sx = Eigen::Matrix3d::Zero();
    sx(0, 1) = sx(1, 0) = sx(1, 2) = sx(2, 1) = kInvSqrt2;
    return {sz, sx};
}

// H_S(t) = D (Sz^2 - (2/3) I) + Omega_z(t) Sz + Omega_x(t) Sx on (A, B, C).
inline Eigen::Matrix3d system_matrix(const ModelConfig& cfg, double t) {
    const auto [omega_z, omega_x] = drive_values(cfg.drive, t);
    const double d3 = cfg.anisotropy / 3.0;
    const double ox = omega_x * kInvSqrt2;
    Eigen::Matrix3d h;
    h << omega_z + d3, ox, 0.0,
         ox, -2.0 * d3, ox,
         0.0, ox, -omega_z + d3;
    return h;
}

}  // namespace lzm
