// eom.hpp — Variational equations of motion: assembly and regularized solve

#pragma once

#include <complex>
#include <stdexcept>

#include <Eigen/Dense>

#include "lzm/ansatz.hpp"

namespace lzm {

// Implicit linear system  holo * udot + anti * conj(udot) = rhs  for the
// parameter derivatives, in the flat ordering of MultiD2State::flatten().
// Because conj(udot) enters through the coherent-state kinetic terms, the
// system is solved as a real-stacked problem of twice the dimension.
struct EomSystem {
    Eigen::MatrixXcd holo;
    Eigen::MatrixXcd anti;
    Eigen::VectorXcd rhs;

    int dim() const { return static_cast<int>(rhs.size()); }
};

inline EomSystem assemble(const MultiD2State& st, const ModelConfig& model, const BathModes& bath,
                          double t) {
    const int m = st.multiplicity(), nb = st.n_modes();
    const int d = 3 * m + m * nb;
    const cplx iu(0.0, 1.0);
    const auto [omega_z, omega_x] = drive_values(model.drive, t);
    const double ox = omega_x * kInvSqrt2;  // Omega_x <1|Sx|0> matrix element
    const double d3 = model.anisotropy / 3.0;

    const Eigen::MatrixXcd s = overlap_matrix(st);
    const Eigen::MatrixXcd h = detail::hamiltonian_kernel(st, model, bath, t);

    EomSystem sys;
    sys.holo = Eigen::MatrixXcd::Zero(d, d);
    sys.anti = Eigen::MatrixXcd::Zero(d, d);
    sys.rhs = Eigen::VectorXcd::Zero(d);

    const auto fcol = [m, nb](int n, int k) { return 3 * m + n * nb + k; };

    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            const cplx sij = s(i, j);
            const cplx rho = std::conj(st.a(i)) * st.a(j) + std::conj(st.b(i)) * st.b(j) +
                             std::conj(st.c(i)) * st.c(j);
            const cplx z_ker = std::conj(st.a(i)) * st.a(j) - std::conj(st.c(i)) * st.c(j);
            const cplx x_ker = std::conj(st.a(i)) * st.b(j) + std::conj(st.b(i)) * st.a(j) +
                               std::conj(st.b(i)) * st.c(j) + std::conj(st.c(i)) * st.b(j);

            // Mode sums entering the amplitude right-hand sides.
            cplx w_ff = 0.0;   // sum_k w_k f*_ik f_jk
            cplx cz = 0.0;     // sum_k eta_z^k (f*_ik + f_jk)
            cplx cx = 0.0;     // sum_k (eta_x^k/sqrt2)(f*_ik + f_jk)
            for (int k = 0; k < nb; ++k) {
                const Mode& mode = bath.modes[k];
                const cplx disp = std::conj(st.f(i, k)) + st.f(j, k);
                w_ff += mode.omega * std::conj(st.f(i, k)) * st.f(j, k);
                cz += mode.eta_z * disp;
                cx += mode.eta_x * kInvSqrt2 * disp;
            }

            // Amplitude rows: i [udot_amp + amp * g_ij] S_ij = RHS, where
            // g_ij = sum_k (f*_ik - f*_jk/2) fdot_jk - (f_jk/2) conj(fdot_jk).
            sys.holo(i, j) += iu * sij;
            sys.holo(m + i, m + j) += iu * sij;
            sys.holo(2 * m + i, 2 * m + j) += iu * sij;
            for (int k = 0; k < nb; ++k) {
                const cplx gh = (std::conj(st.f(i, k)) - 0.5 * std::conj(st.f(j, k))) * sij;
                const cplx ga = -0.5 * st.f(j, k) * sij;
                sys.holo(i, fcol(j, k)) += iu * st.a(j) * gh;
                sys.anti(i, fcol(j, k)) += iu * st.a(j) * ga;
                sys.holo(m + i, fcol(j, k)) += iu * st.b(j) * gh;
                sys.anti(m + i, fcol(j, k)) += iu * st.b(j) * ga;
                sys.holo(2 * m + i, fcol(j, k)) += iu * st.c(j) * gh;
                sys.anti(2 * m + i, fcol(j, k)) += iu * st.c(j) * ga;
            }
            sys.rhs(i) += (st.a(j) * (omega_z + d3 + w_ff + cz) + st.b(j) * (ox + cx)) * sij;
            sys.rhs(m + i) +=
                (st.b(j) * (-2.0 * d3 + w_ff) + (st.a(j) + st.c(j)) * (ox + cx)) * sij;
            sys.rhs(2 * m + i) +=
                (st.c(j) * (-omega_z + d3 + w_ff - cz) + st.b(j) * (ox + cx)) * sij;

            // Displacement rows, projected with <d/df_ik| = sigma_i^dag <f_i|(b_k - f_ik/2):
            // i sum_j [phi (d_ij + rho g_ij) + rho fdot_jk] S_ij
            //   = sum_j [phi h_ij + rho w_k f_jk + G^k_ij] S_ij,  phi = f_jk - f_ik/2.
            for (int k = 0; k < nb; ++k) {
                const int row = fcol(i, k);
                const cplx phi = st.f(j, k) - 0.5 * st.f(i, k);
                sys.holo(row, j) += iu * phi * std::conj(st.a(i)) * sij;
                sys.holo(row, m + j) += iu * phi * std::conj(st.b(i)) * sij;
                sys.holo(row, 2 * m + j) += iu * phi * std::conj(st.c(i)) * sij;
                for (int kp = 0; kp < nb; ++kp) {
                    sys.holo(row, fcol(j, kp)) +=
                        iu * phi * rho * (std::conj(st.f(i, kp)) - 0.5 * std::conj(st.f(j, kp))) *
                        sij;
                    sys.anti(row, fcol(j, kp)) += -0.5 * iu * phi * rho * st.f(j, kp) * sij;
                }
                sys.holo(row, fcol(j, k)) += iu * rho * sij;
                const Mode& mode = bath.modes[k];
                const cplx g_k = mode.eta_z * z_ker + mode.eta_x * kInvSqrt2 * x_ker;
                sys.rhs(row) += (phi * h(i, j) + rho * mode.omega * st.f(j, k) + g_k) * sij;
            }
        }
    }
    return sys;
}

// Infinity norm of the real-stacked coefficient matrix.
inline double inf_norm(const EomSystem& sys) {
    const int d = sys.dim();
    double best = 0.0;
    for (int i = 0; i < d; ++i) {
        double top = 0.0, bot = 0.0;
        for (int j = 0; j < d; ++j) {
            const cplx p = sys.holo(i, j), q = sys.anti(i, j);
            top += std::abs((p + q).real()) + std::abs((p - q).imag());
            bot += std::abs((p + q).imag()) + std::abs((p - q).real());
        }
        best = std::max(best, std::max(top, bot));
    }
    return best;
}

// Tikhonov-regularized least-squares solve of the stacked real system:
// minimize ||M x - r||^2 + eps_reg^2 ||x||^2, computed by orthogonal
// factorization of the augmented matrix [M; eps_reg I] (forming the normal
// equations squares the condition number and leaks noise into the
// near-degenerate branch directions).
inline Eigen::VectorXcd solve(const EomSystem& sys, double eps_reg) {
    if (eps_reg < 0.0) throw std::invalid_argument("solve: eps_reg must be >= 0");
    const int d = sys.dim();
    Eigen::MatrixXd stacked(4 * d, 2 * d);
    stacked.topLeftCorner(d, d) = (sys.holo + sys.anti).real();
    stacked.topRightCorner(d, d) = -(sys.holo - sys.anti).imag();
    stacked.block(d, 0, d, d) = (sys.holo + sys.anti).imag();
    stacked.block(d, d, d, d) = (sys.holo - sys.anti).real();
    stacked.bottomRows(2 * d) = eps_reg * Eigen::MatrixXd::Identity(2 * d, 2 * d);
    Eigen::VectorXd rr = Eigen::VectorXd::Zero(4 * d);
    rr.head(d) = sys.rhs.real();
    rr.segment(d, d) = sys.rhs.imag();

    const Eigen::VectorXd x = stacked.householderQr().solve(rr);
    if (!x.allFinite())
        throw std::runtime_error("solve: non-finite derivative (||M||_inf = " +
                                 std::to_string(inf_norm(sys)) + ")");
    return x.head(d) + cplx(0.0, 1.0) * x.tail(d);
}

}  // namespace lzm
