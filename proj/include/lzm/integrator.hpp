// integrator.hpp — Fixed-step RK4 propagation with norm monitoring

#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "lzm/eom.hpp"

namespace lzm {

struct PropagationConfig {
    double t_start{0.0};
    double t_end{50.0};
    double dt{1e-3};
    int record_every{100};
    double eps_reg{1e-8};  // Tikhonov factor, relative to ||M||_inf
    double noise{1e-4};    // initial-parameter noise half-width
    std::uint64_t seed{1};
    int multiplicity{6};
    double norm_tolerance{1e-6};
    int initial_spin{0};
    int n_max{-1};  // >= 0 records joint spin/Fock populations (single mode)
    bool record_energy{false};
};

inline void validate(const PropagationConfig& cfg) {
    if (!(cfg.dt > 0.0)) throw std::invalid_argument("PropagationConfig: dt must be > 0");
    if (!(cfg.t_end > cfg.t_start))
        throw std::invalid_argument("PropagationConfig: t_end must be > t_start");
    if (!(cfg.norm_tolerance > 0.0))
        throw std::invalid_argument("PropagationConfig: norm_tolerance must be > 0");
    if (cfg.record_every < 1)
        throw std::invalid_argument("PropagationConfig: record_every must be >= 1");
    if (cfg.multiplicity < 1)
        throw std::invalid_argument("PropagationConfig: multiplicity must be >= 1");
}

struct TrajectoryRecord {
    double t{0.0};
    Populations pops;
    double norm{1.0};
    double energy{std::numeric_limits<double>::quiet_NaN()};
    Eigen::MatrixXd fock;  // 3 x (n_max+1) when requested, empty otherwise
};

struct NormDriftError : std::runtime_error {
    double t, drift;
    NormDriftError(double t_, double drift_)
        : std::runtime_error("norm drift " + std::to_string(drift_) + " at t = " +
                             std::to_string(t_)),
          t(t_),
          drift(drift_) {}
};

inline Eigen::VectorXcd parameter_derivative(const MultiD2State& st, const ModelConfig& model,
                                             const BathModes& bath, double t, double eps_reg) {
    const EomSystem sys = assemble(st, model, bath, t);
    return solve(sys, eps_reg * inf_norm(sys));
}

// One classical RK4 step; dt may be negative for reverse propagation.
inline MultiD2State step(MultiD2State st, const ModelConfig& model, const BathModes& bath,
                         double t, double dt, double eps_reg) {
    const Eigen::VectorXcd u = st.flatten();
    MultiD2State work = st;
    const Eigen::VectorXcd k1 = parameter_derivative(st, model, bath, t, eps_reg);
    work.unflatten(u + 0.5 * dt * k1);
    const Eigen::VectorXcd k2 = parameter_derivative(work, model, bath, t + 0.5 * dt, eps_reg);
    work.unflatten(u + 0.5 * dt * k2);
    const Eigen::VectorXcd k3 = parameter_derivative(work, model, bath, t + 0.5 * dt, eps_reg);
    work.unflatten(u + dt * k3);
    const Eigen::VectorXcd k4 = parameter_derivative(work, model, bath, t + dt, eps_reg);
    st.unflatten(u + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
    st.t = t + dt;
    if (!st.finite()) throw std::runtime_error("step: non-finite state after RK4 step");
    return st;
}

inline TrajectoryRecord observe(const MultiD2State& st, const ModelConfig& model,
                                const BathModes& bath, const PropagationConfig& cfg) {
    TrajectoryRecord rec;
    rec.t = st.t;
    rec.pops = populations(st);
    rec.norm = norm(st);
    if (cfg.record_energy) rec.energy = hamiltonian_expectation(st, model, bath, st.t);
    if (cfg.n_max >= 0) rec.fock = fock_populations(st, cfg.n_max);
    return rec;
}

inline std::vector<TrajectoryRecord> propagate(const PropagationConfig& cfg,
                                               const ModelConfig& model, const BathModes& bath) {
    validate(cfg);
    MultiD2State st = initial_state(cfg.initial_spin, bath, cfg.multiplicity, cfg.noise, cfg.seed);
    st.t = cfg.t_start;
    const long n_steps = std::lround((cfg.t_end - cfg.t_start) / cfg.dt);
    std::vector<TrajectoryRecord> records;
    records.reserve(static_cast<std::size_t>(n_steps / cfg.record_every) + 2);
    records.push_back(observe(st, model, bath, cfg));
    const double norm0 = records.front().norm;
    for (long i = 0; i < n_steps; ++i) {
        const double t = cfg.t_start + static_cast<double>(i) * cfg.dt;
        st = step(std::move(st), model, bath, t, cfg.dt, cfg.eps_reg);
        if ((i + 1) % cfg.record_every == 0 || i + 1 == n_steps) {
            records.push_back(observe(st, model, bath, cfg));
            const double drift = std::abs(records.back().norm - norm0);
            if (drift > cfg.norm_tolerance) throw NormDriftError(st.t, drift);
        }
    }
    return records;
}

}  // namespace lzm
