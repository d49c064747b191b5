// analysis.hpp — Contour sweeps, sinusoidal Rabi fitting, peak extraction

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "lzm/integrator.hpp"

namespace lzm {

struct Axis {
    double min{0.0}, max{1.0};
    int count{2};

    double value(int i) const { return min + (max - min) * i / (count - 1); }
};

struct SweepGrid {
    Axis anisotropy;            // D axis (rows of the result matrix)
    Axis a_z;                   // drive-amplitude axis (columns)
    double t_obs{5.0};
    std::vector<double> frame_times;  // optional extra observation times
    PropagationConfig prop;
    std::uint64_t base_seed{1};
};

inline void validate(const SweepGrid& grid) {
    if (grid.anisotropy.count < 2 || grid.a_z.count < 2)
        throw std::invalid_argument("SweepGrid: axis counts must be >= 2");
    if (grid.t_obs < grid.prop.t_start || grid.t_obs > grid.prop.t_end)
        throw std::invalid_argument("SweepGrid: t_obs outside the propagation window");
    for (double ft : grid.frame_times)
        if (ft < grid.prop.t_start || ft > grid.prop.t_end)
            throw std::invalid_argument("SweepGrid: frame time outside the propagation window");
}

struct SweepResult {
    Eigen::MatrixXd p_m1;                                  // count_D x count_Az
    std::vector<std::pair<double, Eigen::MatrixXd>> frames;
    int n_failures{0};
    std::vector<std::string> diagnostics;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

inline std::uint64_t point_seed(std::uint64_t base, int i, int j) {
    return splitmix64(base ^ splitmix64((static_cast<std::uint64_t>(i) << 32) |
                                        static_cast<std::uint32_t>(j)));
}

}  // namespace detail

// Propagates every grid point from |0> and records P_-1 at t_obs (plus the
// optional frame times). Per-point failures become NaN entries, not aborts.
inline SweepResult sweep(const SweepGrid& grid, const ModelConfig& model_template,
                         const BathModes& bath, int jobs = 1) {
    validate(grid);
    validate(grid.prop);
    if (!std::holds_alternative<PeriodicDrive>(model_template.drive))
        throw std::invalid_argument("sweep: requires a periodic drive template");
    const int nd = grid.anisotropy.count, na = grid.a_z.count;

    std::vector<double> capture_times = grid.frame_times;
    capture_times.push_back(grid.t_obs);
    std::vector<long> capture_steps(capture_times.size());
    long last_step = 0;
    for (std::size_t f = 0; f < capture_times.size(); ++f) {
        capture_steps[f] = std::lround((capture_times[f] - grid.prop.t_start) / grid.prop.dt);
        last_step = std::max(last_step, capture_steps[f]);
    }

    SweepResult result;
    result.p_m1.setConstant(nd, na, std::numeric_limits<double>::quiet_NaN());
    result.frames.reserve(grid.frame_times.size());
    for (double ft : grid.frame_times)
        result.frames.emplace_back(
            ft, Eigen::MatrixXd::Constant(nd, na, std::numeric_limits<double>::quiet_NaN()));

    std::atomic<int> next{0};
    std::mutex diag_mutex;
    const auto worker = [&]() {
        for (;;) {
            const int idx = next.fetch_add(1);
            if (idx >= nd * na) return;
            const int i = idx / na, j = idx % na;
            ModelConfig model = model_template;
            model.anisotropy = grid.anisotropy.value(i);
            std::get<PeriodicDrive>(model.drive).a_z = grid.a_z.value(j);
            PropagationConfig prop = grid.prop;
            prop.seed = detail::point_seed(grid.base_seed, i, j);
            try {
                MultiD2State st =
                    initial_state(prop.initial_spin, bath, prop.multiplicity, prop.noise,
                                  prop.seed);
                st.t = prop.t_start;
                const double norm0 = norm(st);
                std::vector<double> captured(capture_times.size(), 0.0);
                if (last_step == 0) captured.assign(capture_times.size(), populations(st).p_minus1);
                for (long s = 0; s < last_step; ++s) {
                    const double t = prop.t_start + static_cast<double>(s) * prop.dt;
                    st = step(std::move(st), model, bath, t, prop.dt, prop.eps_reg);
                    for (std::size_t f = 0; f < capture_steps.size(); ++f)
                        if (capture_steps[f] == s + 1) captured[f] = populations(st).p_minus1;
                }
                const double drift = std::abs(norm(st) - norm0);
                if (drift > prop.norm_tolerance) throw NormDriftError(st.t, drift);
                for (std::size_t f = 0; f < grid.frame_times.size(); ++f)
                    result.frames[f].second(i, j) = captured[f];
                result.p_m1(i, j) = captured.back();
            } catch (const std::exception& ex) {
                std::lock_guard<std::mutex> lock(diag_mutex);
                ++result.n_failures;
                result.diagnostics.push_back("point (" + std::to_string(i) + ", " +
                                             std::to_string(j) + "): " + ex.what());
            }
        }
    };

    if (jobs <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < jobs; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return result;
}

struct RabiFit {
    double period{0.0};
    double amplitude{0.0};
    double phase{0.0};
    double offset{0.0};
    double residual{0.0};      // rms on the smoothed series used for fitting
    double residual_raw{0.0};  // rms against the unsmoothed series
};

namespace detail {

inline std::vector<double> moving_average(const std::vector<double>& y, int window) {
    if (window <= 1) return y;
    const int n = static_cast<int>(y.size());
    std::vector<double> out(y.size());
    const int half = window / 2;
    for (int i = 0; i < n; ++i) {
        const int lo = std::max(0, i - half), hi = std::min(n - 1, i + half);
        double acc = 0.0;
        for (int j = lo; j <= hi; ++j) acc += y[j];
        out[i] = acc / (hi - lo + 1);
    }
    return out;
}

// Dominant nonzero frequency of the mean-subtracted series (plain DFT scan).
inline double dominant_period(const std::vector<double>& t, const std::vector<double>& y) {
    const int n = static_cast<int>(y.size());
    const double span = t.back() - t.front();
    double mean = 0.0;
    for (double v : y) mean += v;
    mean /= n;
    double best_power = -1.0;
    int best_j = 1;
    for (int j = 1; j <= n / 2; ++j) {
        const double freq = j / span;
        double re = 0.0, im = 0.0;
        for (int i = 0; i < n; ++i) {
            const double arg = 2.0 * M_PI * freq * (t[i] - t.front());
            re += (y[i] - mean) * std::cos(arg);
            im += (y[i] - mean) * std::sin(arg);
        }
        const double power = re * re + im * im;
        if (power > best_power) {
            best_power = power;
            best_j = j;
        }
    }
    return span / best_j;
}

}  // namespace detail

// Fits P(t) = c + (a/2)(1 - cos(2 pi t / T + phi)) by Levenberg-Marquardt,
// seeding T from the dominant spectral component of the smoothed series.
inline RabiFit fit_rabi(const std::vector<double>& t, const std::vector<double>& p, int window) {
    if (t.size() != p.size() || t.size() < 8)
        throw std::invalid_argument("fit_rabi: need matching series of at least 8 samples");
    const int n = static_cast<int>(t.size());
    const std::vector<double> ys = detail::moving_average(p, window);
    const double span = t.back() - t.front();
    const double t0_guess = detail::dominant_period(t, ys);
    if (t0_guess > span / 1.5)
        throw std::runtime_error("fit_rabi: dominant period " + std::to_string(t0_guess) +
                                 " exceeds 2/3 of the series span " + std::to_string(span));

    double lo = ys[0], hi = ys[0];
    for (double v : ys) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    // theta = (c, a, T, phi)
    Eigen::Vector4d theta(lo, hi - lo, t0_guess, 0.0);
    const auto model_at = [](const Eigen::Vector4d& th, double ti) {
        return th(0) + 0.5 * th(1) * (1.0 - std::cos(2.0 * M_PI * ti / th(2) + th(3)));
    };
    const auto chi2 = [&](const Eigen::Vector4d& th) {
        double acc = 0.0;
        for (int i = 0; i < n; ++i) {
            const double r = ys[i] - model_at(th, t[i]);
            acc += r * r;
        }
        return acc;
    };

    double lambda = 1e-3;
    double cost = chi2(theta);
    bool converged = false;
    for (int iter = 0; iter < 200; ++iter) {
        Eigen::Matrix4d jtj = Eigen::Matrix4d::Zero();
        Eigen::Vector4d jtr = Eigen::Vector4d::Zero();
        for (int i = 0; i < n; ++i) {
            const double arg = 2.0 * M_PI * t[i] / theta(2) + theta(3);
            Eigen::Vector4d jac;
            jac(0) = 1.0;
            jac(1) = 0.5 * (1.0 - std::cos(arg));
            jac(2) = -0.5 * theta(1) * std::sin(arg) * 2.0 * M_PI * t[i] /
                     (theta(2) * theta(2));
            jac(3) = 0.5 * theta(1) * std::sin(arg);
            const double r = ys[i] - model_at(theta, t[i]);
            jtj += jac * jac.transpose();
            jtr += jac * r;
        }
        Eigen::Matrix4d damped = jtj;
        damped.diagonal() += lambda * jtj.diagonal();
        const Eigen::Vector4d delta = damped.ldlt().solve(jtr);
        const Eigen::Vector4d trial = theta + delta;
        if (trial(2) > 0.0 && chi2(trial) < cost) {
            const double new_cost = chi2(trial);
            const bool small_step = delta.norm() < 1e-12 * (1.0 + theta.norm()) ||
                                    cost - new_cost < 1e-14 * (1.0 + cost);
            theta = trial;
            cost = new_cost;
            lambda = std::max(lambda * 0.3, 1e-12);
            if (small_step) {
                converged = true;
                break;
            }
        } else {
            lambda *= 10.0;
            if (lambda > 1e12) break;
        }
    }
    if (!converged && lambda > 1e12)
        throw std::runtime_error("fit_rabi: no convergence (period guess " +
                                 std::to_string(t0_guess) + ")");
    if (theta(2) > span / 1.5 || theta(2) <= 0.0)
        throw std::runtime_error("fit_rabi: fitted period " + std::to_string(theta(2)) +
                                 " outside the series window");

    RabiFit fit;
    fit.offset = theta(0);
    fit.amplitude = theta(1);
    fit.period = theta(2);
    fit.phase = std::remainder(theta(3), 2.0 * M_PI);
    fit.residual = std::sqrt(cost / n);
    double raw = 0.0;
    for (int i = 0; i < n; ++i) {
        const double r = p[i] - model_at(theta, t[i]);
        raw += r * r;
    }
    fit.residual_raw = std::sqrt(raw / n);
    return fit;
}

struct Peak {
    double anisotropy{0.0};
    double a_z{0.0};
    double height{0.0};
};

// Local maxima over 8-neighborhoods above `floor`, merged within one grid
// cell, sorted by descending height.
inline std::vector<Peak> find_peaks(const Eigen::MatrixXd& matrix, const Axis& d_axis,
                                    const Axis& az_axis, double floor = 1e-3) {
    std::vector<Peak> peaks;
    const int nd = static_cast<int>(matrix.rows()), na = static_cast<int>(matrix.cols());
    for (int i = 0; i < nd; ++i)
        for (int j = 0; j < na; ++j) {
            const double v = matrix(i, j);
            if (!(v > floor)) continue;
            bool is_max = true;
            for (int di = -1; di <= 1 && is_max; ++di)
                for (int dj = -1; dj <= 1 && is_max; ++dj) {
                    if (di == 0 && dj == 0) continue;
                    const int ni = i + di, nj = j + dj;
                    if (ni < 0 || ni >= nd || nj < 0 || nj >= na) continue;
                    if (matrix(ni, nj) >= v && !(matrix(ni, nj) == v && (di > 0 || (di == 0 && dj > 0))))
                        is_max = false;
                }
            if (is_max) peaks.push_back({d_axis.value(i), az_axis.value(j), v});
        }
    // Merge peaks that sit within one grid cell of a taller one.
    std::sort(peaks.begin(), peaks.end(),
              [](const Peak& x, const Peak& y) { return x.height > y.height; });
    const double dd = (d_axis.max - d_axis.min) / (d_axis.count - 1);
    const double da = (az_axis.max - az_axis.min) / (az_axis.count - 1);
    std::vector<Peak> merged;
    for (const Peak& pk : peaks) {
        bool absorbed = false;
        for (const Peak& kept : merged)
            if (std::abs(pk.anisotropy - kept.anisotropy) <= dd * (1.0 + 1e-9) &&
                std::abs(pk.a_z - kept.a_z) <= da * (1.0 + 1e-9)) {
                absorbed = true;
                break;
            }
        if (!absorbed) merged.push_back(pk);
    }
    return merged;
}

// Oscillation swing of P_-1: the largest max - min over any sliding time
// window of width `window` (default: the whole record). A finite window
// separates the oscillation amplitude from any slow secular drift of the
// population that would otherwise dominate the global range.
inline double rabi_swing(const std::vector<TrajectoryRecord>& records,
                         double window = std::numeric_limits<double>::infinity()) {
    double best = 0.0;
    std::size_t lo_idx = 0;
    for (std::size_t hi_idx = 0; hi_idx < records.size(); ++hi_idx) {
        while (records[hi_idx].t - records[lo_idx].t > window) ++lo_idx;
        double lo = records[lo_idx].pops.p_minus1, hi = lo;
        for (std::size_t k = lo_idx; k <= hi_idx; ++k) {
            lo = std::min(lo, records[k].pops.p_minus1);
            hi = std::max(hi, records[k].pops.p_minus1);
        }
        best = std::max(best, hi - lo);
    }
    return best;
}

}  // namespace lzm
