// ansatz.hpp — Multiple Davydov D2 state, coherent-state algebra, observables

#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>

#include <Eigen/Dense>

#include "lzm/bath.hpp"
#include "lzm/model.hpp"

namespace lzm {

using cplx = std::complex<double>;

// |D2(t)> = sum_n (a_n |+1> + b_n |0> + c_n |-1>) (x) |f_n>.
// Slot a pairs with +Omega_z (Sz eigenvalue +1), slot c with -Omega_z.
struct MultiD2State {
    Eigen::VectorXcd a, b, c;  // branch amplitudes, size M
    Eigen::MatrixXcd f;        // coherent displacements, M x N_b
    double t{0.0};

    int multiplicity() const { return static_cast<int>(a.size()); }
    int n_modes() const { return static_cast<int>(f.cols()); }
    int n_params() const { return 3 * multiplicity() + multiplicity() * n_modes(); }

    // Flat parameter vector in the order (a_1..a_M, b.., c.., f_11..f_MNb).
    Eigen::VectorXcd flatten() const {
        const int m = multiplicity(), nb = n_modes();
        Eigen::VectorXcd u(n_params());
        u.segment(0, m) = a;
        u.segment(m, m) = b;
        u.segment(2 * m, m) = c;
        for (int n = 0; n < m; ++n) u.segment(3 * m + n * nb, nb) = f.row(n).transpose();
        return u;
    }

    void unflatten(const Eigen::VectorXcd& u) {
        const int m = multiplicity(), nb = n_modes();
        a = u.segment(0, m);
        b = u.segment(m, m);
        c = u.segment(2 * m, m);
        for (int n = 0; n < m; ++n) f.row(n) = u.segment(3 * m + n * nb, nb).transpose();
    }

    bool finite() const { return a.allFinite() && b.allFinite() && c.allFinite() && f.allFinite(); }
};

// Debye-Waller overlap <f_m|f_n> of two multimode coherent states.
inline cplx debye_waller(const Eigen::Ref<const Eigen::VectorXcd>& f_m,
                         const Eigen::Ref<const Eigen::VectorXcd>& f_n) {
    if (f_m.size() != f_n.size())
        throw std::invalid_argument("debye_waller: displacement vectors differ in length");
    cplx expo = f_m.dot(f_n);  // sum_k conj(f_mk) f_nk
    expo -= 0.5 * (f_m.squaredNorm() + f_n.squaredNorm());
    return std::exp(expo);
}

// Gram matrix S_mn = <f_m|f_n>.
inline Eigen::MatrixXcd overlap_matrix(const MultiD2State& st) {
    const int m = st.multiplicity();
    Eigen::MatrixXcd s(m, m);
    for (int i = 0; i < m; ++i) {
        s(i, i) = 1.0;
        for (int j = i + 1; j < m; ++j) {
            s(i, j) = debye_waller(st.f.row(i).transpose(), st.f.row(j).transpose());
            s(j, i) = std::conj(s(i, j));
        }
    }
    return s;
}

namespace detail {

inline double real_checked(cplx z, double tol, const char* what) {
    if (!(std::abs(z.imag()) <= tol * std::max(1.0, std::abs(z.real()))))
        throw std::runtime_error(std::string(what) + ": imaginary part beyond tolerance");
    return z.real();
}

}  // namespace detail

inline double norm(const MultiD2State& st) {
    const Eigen::MatrixXcd s = overlap_matrix(st);
    const cplx n = st.a.dot(s * st.a) + st.b.dot(s * st.b) + st.c.dot(s * st.c);
    return detail::real_checked(n, 1e-12, "norm");
}

struct Populations {
    double p_minus1{0.0}, p_zero{0.0}, p_plus1{0.0};

    double sum() const { return p_minus1 + p_zero + p_plus1; }
};

inline Populations populations(const MultiD2State& st) {
    const Eigen::MatrixXcd s = overlap_matrix(st);
    Populations p;
    p.p_plus1 = detail::real_checked(st.a.dot(s * st.a), 1e-12, "populations");
    p.p_zero = detail::real_checked(st.b.dot(s * st.b), 1e-12, "populations");
    p.p_minus1 = detail::real_checked(st.c.dot(s * st.c), 1e-12, "populations");
    return p;
}

// Joint spin/Fock populations P_{k,n} for a single-mode state. Row 0 holds
// spin +1 (slot a), row 1 spin 0, row 2 spin -1; column n is Fock state |n>.
inline Eigen::MatrixXd fock_populations(const MultiD2State& st, int n_max) {
    if (st.n_modes() != 1)
        throw std::invalid_argument("fock_populations: only single-mode states supported");
    if (n_max < 0) throw std::invalid_argument("fock_populations: n_max must be >= 0");
    Eigen::MatrixXd table(3, n_max + 1);
    const int m = st.multiplicity();
    double fact = 1.0;
    for (int n = 0; n <= n_max; ++n) {
        if (n > 0) fact *= n;
        cplx amp[3] = {0.0, 0.0, 0.0};
        for (int i = 0; i < m; ++i) {
            const cplx fi = st.f(i, 0);
            const cplx w = std::exp(-0.5 * std::norm(fi)) * std::pow(fi, n) / std::sqrt(fact);
            amp[0] += st.a(i) * w;
            amp[1] += st.b(i) * w;
            amp[2] += st.c(i) * w;
        }
        for (int k = 0; k < 3; ++k) table(k, n) = std::norm(amp[k]);
    }
    return table;
}

// Branch 1 on the requested spin with the bath's initial displacements, then
// uniform noise in [-eps, eps] on real and imaginary parts of every parameter,
// then rescale to unit norm.
inline MultiD2State initial_state(int spin, const BathModes& bath, int multiplicity,
                                  double noise_eps, std::uint64_t seed) {
    if (multiplicity < 1) throw std::invalid_argument("initial_state: multiplicity must be >= 1");
    if (spin != -1 && spin != 0 && spin != 1)
        throw std::invalid_argument("initial_state: spin must be -1, 0 or 1");
    const int nb = bath.size();
    MultiD2State st;
    st.a = Eigen::VectorXcd::Zero(multiplicity);
    st.b = Eigen::VectorXcd::Zero(multiplicity);
    st.c = Eigen::VectorXcd::Zero(multiplicity);
    st.f = Eigen::MatrixXcd::Zero(multiplicity, nb);
    (spin == 1 ? st.a : spin == 0 ? st.b : st.c)(0) = 1.0;
    for (int k = 0; k < nb && k < static_cast<int>(bath.f0.size()); ++k) st.f(0, k) = bath.f0[k];
    if (noise_eps > 0.0) {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> dist(-noise_eps, noise_eps);
        Eigen::VectorXcd u = st.flatten();
        for (Eigen::Index i = 0; i < u.size(); ++i) {
            const double re = dist(rng), im = dist(rng);
            u(i) += cplx(re, im);
        }
        st.unflatten(u);
    }
    st.t = 0.0;
    const double n0 = norm(st);
    const double scale = 1.0 / std::sqrt(n0);
    st.a *= scale;
    st.b *= scale;
    st.c *= scale;
    return st;
}

namespace detail {

// Bilinear Hamiltonian kernel h_mn, so that <D|H|D> = sum_mn h_mn S_mn.
// h_mn = sigma_m^dag H_S sigma_n + rho_mn sum_k w_k f*_mk f_nk
//        + sum_k [eta_z^k (a*_m a_n - c*_m c_n)
//                 + (eta_x^k/sqrt2)(a*_m b_n + b*_m a_n + b*_m c_n + c*_m b_n)]
//          (f*_mk + f_nk)
inline Eigen::MatrixXcd hamiltonian_kernel(const MultiD2State& st, const ModelConfig& model,
                                           const BathModes& bath, double t) {
    const int m = st.multiplicity(), nb = st.n_modes();
    const Eigen::Matrix3d hs = system_matrix(model, t);
    Eigen::MatrixXcd h(m, m);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            const cplx rho = std::conj(st.a(i)) * st.a(j) + std::conj(st.b(i)) * st.b(j) +
                             std::conj(st.c(i)) * st.c(j);
            const cplx z_ker = std::conj(st.a(i)) * st.a(j) - std::conj(st.c(i)) * st.c(j);
            const cplx x_ker = std::conj(st.a(i)) * st.b(j) + std::conj(st.b(i)) * st.a(j) +
                               std::conj(st.b(i)) * st.c(j) + std::conj(st.c(i)) * st.b(j);
            Eigen::Vector3cd sig_j(st.a(j), st.b(j), st.c(j));
            Eigen::Vector3cd sig_i(st.a(i), st.b(i), st.c(i));
            cplx val = sig_i.dot(hs * sig_j);
            for (int k = 0; k < nb; ++k) {
                const Mode& mode = bath.modes[k];
                const cplx disp = std::conj(st.f(i, k)) + st.f(j, k);
                val += rho * mode.omega * std::conj(st.f(i, k)) * st.f(j, k);
                val += (mode.eta_z * z_ker + mode.eta_x * kInvSqrt2 * x_ker) * disp;
            }
            h(i, j) = val;
        }
    }
    return h;
}

}  // namespace detail

inline double hamiltonian_expectation(const MultiD2State& st, const ModelConfig& model,
                                      const BathModes& bath, double t) {
    const Eigen::MatrixXcd s = overlap_matrix(st);
    const Eigen::MatrixXcd h = detail::hamiltonian_kernel(st, model, bath, t);
    const cplx e = (h.array() * s.array()).sum();
    return detail::real_checked(e, 1e-10, "hamiltonian_expectation") / norm(st);
}

}  // namespace lzm
