// bath.hpp — Phonon environment: explicit modes and super-Ohmic discretization

#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

namespace lzm {

struct SpectralParams {
    double alpha{0.1};    // dimensionless coupling strength
    double s{3.0};        // spectral exponent (s > 1: super-Ohmic)
    double omega_c{0.5};  // cutoff frequency
    double omega_m{6.0};  // maximum discretized frequency
    int n_modes{20};
};

inline void validate(const SpectralParams& p) {
    if (p.alpha < 0.0) throw std::invalid_argument("SpectralParams: alpha must be >= 0");
    if (!(p.s > 0.0)) throw std::invalid_argument("SpectralParams: s must be > 0");
    if (!(p.omega_c > 0.0)) throw std::invalid_argument("SpectralParams: omega_c must be > 0");
    if (!(p.omega_m > 0.0)) throw std::invalid_argument("SpectralParams: omega_m must be > 0");
    if (p.n_modes < 1) throw std::invalid_argument("SpectralParams: n_modes must be >= 1");
}

struct Mode {
    double omega{1.0};
    double eta_z{0.0};
    double eta_x{0.0};
};

struct BathModes {
    std::vector<Mode> modes;
    double normalization{0.0};             // N of the mode density, when discretized
    std::vector<std::complex<double>> f0;  // per-mode initial coherent displacement

    int size() const { return static_cast<int>(modes.size()); }
};

// J(omega) = 2 alpha omega_c^{1-s} omega^s exp(-omega/omega_c)
inline double spectral_density(double omega, const SpectralParams& p) {
    if (omega < 0.0) throw std::invalid_argument("spectral_density: omega must be >= 0");
    if (omega == 0.0) return 0.0;
    return 2.0 * p.alpha * std::pow(p.omega_c, 1.0 - p.s) * std::pow(omega, p.s) *
           std::exp(-omega / p.omega_c);
}

namespace detail {

// Adaptive Simpson quadrature for the cumulative integral at general s.
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double fa, double fm, double fb, double whole, double tol,
                               int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 48);
}

// C(x) = int_0^x J(w)/w dw. Closed form for s = 3, quadrature otherwise.
inline double cumulative(double x, const SpectralParams& p) {
    if (x <= 0.0) return 0.0;
    if (p.s == 3.0) {
        const double u = x / p.omega_c;
        return 2.0 * p.alpha * p.omega_c * (2.0 - std::exp(-u) * (u * u + 2.0 * u + 2.0));
    }
    return integrate([&p](double w) { return w == 0.0 ? 0.0 : spectral_density(w, p) / w; },
                     0.0, x, 1e-13);
}

}  // namespace detail

// Frequencies omega_k solve C(omega_k) = k N with N = C(omega_m)/N_b; couplings
// eta_z^k = sqrt(J(omega_k)/P(omega_k)) = sqrt(N omega_k). Off-diagonal couplings
// are zero; set them by hand on the returned modes if needed.
inline BathModes discretize(const SpectralParams& p) {
    validate(p);
    BathModes bath;
    bath.modes.resize(p.n_modes);
    bath.f0.assign(p.n_modes, 0.0);
    if (p.alpha == 0.0) {
        // Degenerate zero-coupling bath: uniform grid, all couplings zero.
        for (int k = 0; k < p.n_modes; ++k)
            bath.modes[k].omega = p.omega_m * (k + 1) / p.n_modes;
        return bath;
    }
    const double total = detail::cumulative(p.omega_m, p);
    bath.normalization = total / p.n_modes;
    constexpr double tol = 1e-10;
    for (int k = 0; k < p.n_modes; ++k) {
        double omega_k;
        if (k == p.n_modes - 1) {
            omega_k = p.omega_m;  // boundary condition of the discretization
        } else {
            const double target = (k + 1) * bath.normalization;
            double lo = 0.0, hi = p.omega_m;
            for (int iter = 0;; ++iter) {
                if (iter > 200)
                    throw std::runtime_error("discretize: bisection failed to converge");
                const double mid = 0.5 * (lo + hi);
                const double val = detail::cumulative(mid, p);
                if (std::abs(val - target) < tol) {
                    omega_k = mid;
                    break;
                }
                (val < target ? lo : hi) = mid;
            }
        }
        bath.modes[k].omega = omega_k;
        bath.modes[k].eta_z = std::sqrt(bath.normalization * omega_k);
    }
    return bath;
}

inline BathModes single_mode(double omega_p, double eta_z, double eta_x,
                             std::complex<double> f0 = 0.0) {
    if (!(omega_p > 0.0)) throw std::invalid_argument("single_mode: omega_p must be > 0");
    BathModes bath;
    bath.modes.push_back({omega_p, eta_z, eta_x});
    bath.f0.assign(1, f0);
    return bath;
}

}  // namespace lzm
