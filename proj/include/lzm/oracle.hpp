// oracle.hpp — Truncated-Fock exact propagator and spectrum scanner (single mode)

#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "lzm/ansatz.hpp"
#include "lzm/bath.hpp"
#include "lzm/model.hpp"

namespace lzm::oracle {

struct TruncatedBasis {
    int n_max{2};

    int dim() const { return 3 * (n_max + 1); }
    // Spin slot 0 is |+1> (amplitude a), 1 is |0>, 2 is |-1>.
    int index(int spin_slot, int n) const { return spin_slot * (n_max + 1) + n; }
};

namespace detail {

// Time-independent part: I (x) w_p b^dag b + (eta_z Sz + eta_x Sx) (x) (b^dag + b).
inline Eigen::MatrixXd static_hamiltonian(const BathModes& bath, const TruncatedBasis& basis) {
    if (bath.size() != 1)
        throw std::invalid_argument("oracle: exactly one phonon mode required");
    const Mode& mode = bath.modes[0];
    const int nph = basis.n_max + 1;
    const auto [sz, sx] = spin1_matrices();
    const Eigen::Matrix3d coupling = mode.eta_z * sz + mode.eta_x * sx;
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(basis.dim(), basis.dim());
    for (int s = 0; s < 3; ++s)
        for (int n = 0; n < nph; ++n) {
            h(basis.index(s, n), basis.index(s, n)) += mode.omega * n;
            for (int sp = 0; sp < 3; ++sp) {
                if (n + 1 < nph) {
                    const double ladder = std::sqrt(n + 1.0);
                    h(basis.index(sp, n + 1), basis.index(s, n)) += coupling(sp, s) * ladder;
                    h(basis.index(s, n), basis.index(sp, n + 1)) += coupling(sp, s) * ladder;
                }
            }
        }
    return h;
}

}  // namespace detail

inline Eigen::MatrixXd full_hamiltonian(const ModelConfig& model, const BathModes& bath, double t,
                                        const TruncatedBasis& basis) {
    Eigen::MatrixXd h = detail::static_hamiltonian(bath, basis);
    const Eigen::Matrix3d hs = system_matrix(model, t);
    const int nph = basis.n_max + 1;
    for (int s = 0; s < 3; ++s)
        for (int sp = 0; sp < 3; ++sp)
            for (int n = 0; n < nph; ++n) h(basis.index(s, n), basis.index(sp, n)) += hs(s, sp);
    return h;
}

// Spin |spin> (x) coherent |f0> truncated to the basis and renormalized.
inline Eigen::VectorXcd coherent_initial_state(int spin, cplx f0, const TruncatedBasis& basis) {
    const int slot = spin == 1 ? 0 : spin == 0 ? 1 : 2;
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(basis.dim());
    double fact = 1.0;
    for (int n = 0; n <= basis.n_max; ++n) {
        if (n > 0) fact *= n;
        psi(basis.index(slot, n)) = std::exp(-0.5 * std::norm(f0)) * std::pow(f0, n) /
                                    std::sqrt(fact);
    }
    psi /= psi.norm();
    return psi;
}

struct ExactRecord {
    double t{0.0};
    Populations pops;
    Eigen::MatrixXd fock;  // 3 x (n_max+1)
};

struct ExactResult {
    std::vector<ExactRecord> records;
    int n_max{0};
};

namespace detail {

inline std::vector<ExactRecord> propagate_fixed(const ModelConfig& model, const BathModes& bath,
                                                const TruncatedBasis& basis, int spin, cplx f0,
                                                double t_start, double t_end, double dt,
                                                int record_every) {
    const Eigen::MatrixXd hstatic = static_hamiltonian(bath, basis);
    const int nph = basis.n_max + 1;
    const cplx iu(0.0, 1.0);
    const auto deriv = [&](const Eigen::VectorXcd& psi, double t) -> Eigen::VectorXcd {
        Eigen::VectorXcd out = hstatic * psi;
        const Eigen::Matrix3d hs = system_matrix(model, t);
        for (int n = 0; n < nph; ++n) {
            const Eigen::Vector3cd v(psi(n), psi(nph + n), psi(2 * nph + n));
            const Eigen::Vector3cd w = hs * v;
            out(n) += w(0);
            out(nph + n) += w(1);
            out(2 * nph + n) += w(2);
        }
        return -iu * out;
    };
    const auto record = [&](const Eigen::VectorXcd& psi, double t) {
        ExactRecord rec;
        rec.t = t;
        rec.fock.resize(3, nph);
        for (int s = 0; s < 3; ++s)
            for (int n = 0; n < nph; ++n) rec.fock(s, n) = std::norm(psi(basis.index(s, n)));
        rec.pops.p_plus1 = rec.fock.row(0).sum();
        rec.pops.p_zero = rec.fock.row(1).sum();
        rec.pops.p_minus1 = rec.fock.row(2).sum();
        return rec;
    };

    Eigen::VectorXcd psi = coherent_initial_state(spin, f0, basis);
    const long n_steps = std::lround((t_end - t_start) / dt);
    std::vector<ExactRecord> out;
    out.push_back(record(psi, t_start));
    for (long i = 0; i < n_steps; ++i) {
        const double t = t_start + static_cast<double>(i) * dt;
        const Eigen::VectorXcd k1 = deriv(psi, t);
        const Eigen::VectorXcd k2 = deriv(psi + 0.5 * dt * k1, t + 0.5 * dt);
        const Eigen::VectorXcd k3 = deriv(psi + 0.5 * dt * k2, t + 0.5 * dt);
        const Eigen::VectorXcd k4 = deriv(psi + dt * k3, t + dt);
        psi += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if ((i + 1) % record_every == 0 || i + 1 == n_steps) out.push_back(record(psi, t + dt));
    }
    return out;
}

}  // namespace detail

// Integrates i dpsi/dt = H(t) psi with RK4 at a quarter of the caller's step,
// escalating the Fock cutoff until recorded populations move by < 1e-4.
inline ExactResult exact_propagate(const ModelConfig& model, const BathModes& bath, int spin,
                                   double t_start, double t_end, double dt_main,
                                   int record_every_main, int n_max_start = 2) {
    if (bath.size() != 1)
        throw std::invalid_argument("exact_propagate: exactly one phonon mode required");
    const cplx f0 = bath.f0.empty() ? cplx(0.0) : bath.f0[0];
    const double dt = dt_main / 4.0;
    const int record_every = record_every_main * 4;
    constexpr double tol = 1e-4;
    constexpr int n_max_limit = 40;

    ExactResult result;
    result.n_max = n_max_start;
    result.records = detail::propagate_fixed(model, bath, TruncatedBasis{n_max_start}, spin, f0,
                                             t_start, t_end, dt, record_every);
    for (int n_max = n_max_start + 2;; n_max += 2) {
        if (n_max > n_max_limit)
            throw std::runtime_error("exact_propagate: no Fock-space convergence by n_max = 40");
        auto next = detail::propagate_fixed(model, bath, TruncatedBasis{n_max}, spin, f0, t_start,
                                            t_end, dt, record_every);
        double change = 0.0;
        for (std::size_t i = 0; i < next.size(); ++i) {
            change = std::max(change, std::abs(next[i].pops.p_plus1 -
                                               result.records[i].pops.p_plus1));
            change = std::max(change, std::abs(next[i].pops.p_zero -
                                               result.records[i].pops.p_zero));
            change = std::max(change, std::abs(next[i].pops.p_minus1 -
                                               result.records[i].pops.p_minus1));
        }
        result.records = std::move(next);
        result.n_max = n_max;
        if (change < tol) break;
    }
    return result;
}

// Sorted eigenvalue curves of the full Hamiltonian over a time grid.
inline Eigen::MatrixXd energy_levels(const ModelConfig& model, const BathModes& bath,
                                     const TruncatedBasis& basis,
                                     const std::vector<double>& t_grid) {
    Eigen::MatrixXd levels(static_cast<int>(t_grid.size()), basis.dim());
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(full_hamiltonian(model, bath, t_grid[i],
                                                                           basis),
                                                          Eigen::EigenvaluesOnly);
        levels.row(static_cast<int>(i)) = es.eigenvalues().transpose();
    }
    return levels;
}

}  // namespace lzm::oracle
