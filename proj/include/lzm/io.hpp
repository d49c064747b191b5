// io.hpp — Atomic file output and CSV serialization of results

#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "lzm/analysis.hpp"
#include "lzm/integrator.hpp"

namespace lzm::io {

// Write-temp-then-rename; never leaves a partial file at `path`.
inline void atomic_write(const std::filesystem::path& path, const std::string& content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open for writing: " + tmp.string());
        out << content;
        if (!out) throw std::runtime_error("write failed: " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

inline std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

inline std::string trajectory_csv(const std::vector<TrajectoryRecord>& records, bool with_energy,
                                  int n_max) {
    std::ostringstream out;
    out << "t,P_m1,P_0,P_1,norm";
    if (with_energy) out << ",E";
    static const char* spin_tag[3] = {"m1", "0", "1"};
    static const int spin_row[3] = {2, 1, 0};  // fock table rows: a=+1, b=0, c=-1
    if (n_max >= 0)
        for (int k = 0; k < 3; ++k)
            for (int n = 0; n <= n_max; ++n) out << ",P_" << spin_tag[k] << "_" << n;
    out << "\n";
    for (const auto& rec : records) {
        out << format_number(rec.t) << "," << format_number(rec.pops.p_minus1) << ","
            << format_number(rec.pops.p_zero) << "," << format_number(rec.pops.p_plus1) << ","
            << format_number(rec.norm);
        if (with_energy) out << "," << format_number(rec.energy);
        if (n_max >= 0)
            for (int k = 0; k < 3; ++k)
                for (int n = 0; n <= n_max; ++n)
                    out << "," << format_number(rec.fock(spin_row[k], n));
        out << "\n";
    }
    return out.str();
}

// One row per anisotropy index, columns over the A_z axis.
inline std::string matrix_csv(const Eigen::MatrixXd& matrix) {
    std::ostringstream out;
    for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
        for (Eigen::Index j = 0; j < matrix.cols(); ++j) {
            if (j) out << ",";
            out << format_number(matrix(i, j));
        }
        out << "\n";
    }
    return out.str();
}

inline std::string levels_csv(const std::vector<double>& t_grid, const Eigen::MatrixXd& levels) {
    std::ostringstream out;
    out << "t";
    for (Eigen::Index j = 0; j < levels.cols(); ++j) out << ",E_" << (j + 1);
    out << "\n";
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        out << format_number(t_grid[i]);
        for (Eigen::Index j = 0; j < levels.cols(); ++j)
            out << "," << format_number(levels(static_cast<Eigen::Index>(i), j));
        out << "\n";
    }
    return out.str();
}

inline std::string modes_csv(const BathModes& bath) {
    std::ostringstream out;
    out << "k,omega_k,eta_z_k,eta_x_k\n";
    for (int k = 0; k < bath.size(); ++k)
        out << (k + 1) << "," << format_number(bath.modes[k].omega) << ","
            << format_number(bath.modes[k].eta_z) << "," << format_number(bath.modes[k].eta_x)
            << "\n";
    return out.str();
}

}  // namespace lzm::io
