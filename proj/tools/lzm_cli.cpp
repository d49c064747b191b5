// lzm_cli.cpp — Command-line driver: propagate / sweep / levels / fit / discretize

#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "lzm/analysis.hpp"
#include "lzm/config.hpp"
#include "lzm/io.hpp"
#include "lzm/oracle.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

using nlohmann::json;

json axis_json(const lzm::Axis& axis) {
    return json{{"min", axis.min}, {"max", axis.max}, {"count", axis.count}};
}

int cmd_propagate(const std::string& config_path, const std::string& out_path,
                  const std::string& format) {
    const lzm::RunConfig cfg = lzm::load_config(config_path);
    const lzm::BathModes bath = lzm::build_bath(cfg.bath);
    const auto records = lzm::propagate(cfg.prop, cfg.model, bath);
    if (format == "csv") {
        lzm::io::atomic_write(out_path,
                              lzm::io::trajectory_csv(records, cfg.prop.record_energy,
                                                      cfg.prop.n_max));
    } else {
        json rows = json::array();
        for (const auto& rec : records) {
            json row{{"t", rec.t},
                     {"P_m1", rec.pops.p_minus1},
                     {"P_0", rec.pops.p_zero},
                     {"P_1", rec.pops.p_plus1},
                     {"norm", rec.norm}};
            if (cfg.prop.record_energy) row["E"] = rec.energy;
            rows.push_back(std::move(row));
        }
        lzm::io::atomic_write(out_path, rows.dump(2) + "\n");
    }
    return kExitOk;
}

int cmd_sweep(const std::string& config_path, const std::string& out_dir, int jobs) {
    const lzm::RunConfig cfg = lzm::load_config(config_path);
    if (!cfg.sweep) throw lzm::ConfigError("sweep: config has no 'sweep' section");
    const lzm::BathModes bath = lzm::build_bath(cfg.bath);
    lzm::SweepGrid grid;
    grid.anisotropy = cfg.sweep->anisotropy;
    grid.a_z = cfg.sweep->a_z;
    grid.t_obs = cfg.sweep->t_obs;
    grid.frame_times = cfg.sweep->frames;
    grid.prop = cfg.prop;
    grid.base_seed = cfg.prop.seed;
    const lzm::SweepResult result = lzm::sweep(grid, cfg.model, bath, jobs);

    const int total = grid.anisotropy.count * grid.a_z.count;
    if (result.n_failures >= total) {
        for (const auto& diag : result.diagnostics) std::cerr << diag << "\n";
        std::cerr << "sweep: all " << total << " points failed\n";
        return kExitNumerical;
    }

    const std::filesystem::path dir(out_dir);
    std::filesystem::create_directories(dir);
    lzm::io::atomic_write(dir / "matrix.csv", lzm::io::matrix_csv(result.p_m1));
    json sidecar{{"D", axis_json(grid.anisotropy)},
                 {"A_z", axis_json(grid.a_z)},
                 {"t_obs", grid.t_obs},
                 {"base_seed", grid.base_seed},
                 {"n_failures", result.n_failures},
                 {"frames", json::array()}};
    for (std::size_t f = 0; f < result.frames.size(); ++f) {
        char name[32];
        std::snprintf(name, sizeof(name), "frame_%02zu.csv", f);
        lzm::io::atomic_write(dir / name, lzm::io::matrix_csv(result.frames[f].second));
        sidecar["frames"].push_back(json{{"t", result.frames[f].first}, {"file", name}});
    }
    lzm::io::atomic_write(dir / "matrix.json", sidecar.dump(2) + "\n");
    if (result.n_failures > 0) {
        std::cerr << "sweep: " << result.n_failures << " of " << total
                  << " points failed (recorded as missing values)\n";
        for (const auto& diag : result.diagnostics) std::cerr << "  " << diag << "\n";
    }
    return kExitOk;
}

int cmd_levels(const std::string& config_path, const std::string& out_path) {
    const lzm::RunConfig cfg = lzm::load_config(config_path);
    const lzm::BathModes bath = lzm::build_bath(cfg.bath);
    if (bath.size() != 1)
        throw lzm::ConfigError("levels: requires a single-mode bath");
    const lzm::oracle::TruncatedBasis basis{cfg.prop.n_max >= 0 ? cfg.prop.n_max : 2};
    std::vector<double> t_grid;
    const double spacing = cfg.prop.dt * cfg.prop.record_every;
    for (double t = cfg.prop.t_start; t <= cfg.prop.t_end + 1e-12 * std::abs(cfg.prop.t_end);
         t += spacing)
        t_grid.push_back(t);
    const Eigen::MatrixXd levels = lzm::oracle::energy_levels(cfg.model, bath, basis, t_grid);
    lzm::io::atomic_write(out_path, lzm::io::levels_csv(t_grid, levels));
    return kExitOk;
}

int cmd_fit(const std::string& config_path, const std::string& out_path) {
    const lzm::RunConfig cfg = lzm::load_config(config_path);
    if (!cfg.fit) throw lzm::ConfigError("fit: config has no 'fit' section");
    std::vector<double> alphas = cfg.fit->alphas;
    if (!alphas.empty() && !std::holds_alternative<lzm::SpectralParams>(cfg.bath))
        throw lzm::ConfigError("fit.alphas: requires a spectral bath");

    json fits = json::array();
    const auto run_one = [&](const lzm::BathModes& bath, const json& extra) {
        const auto records = lzm::propagate(cfg.prop, cfg.model, bath);
        std::vector<double> ts, ps;
        ts.reserve(records.size());
        ps.reserve(records.size());
        for (const auto& rec : records) {
            ts.push_back(rec.t);
            ps.push_back(rec.pops.p_minus1);
        }
        const lzm::RabiFit fit = lzm::fit_rabi(ts, ps, cfg.fit->window);
        json row{{"period", fit.period},   {"amplitude", fit.amplitude},
                 {"phase", fit.phase},     {"offset", fit.offset},
                 {"residual", fit.residual}, {"residual_raw", fit.residual_raw}};
        row.update(extra);
        fits.push_back(std::move(row));
    };

    if (alphas.empty()) {
        run_one(lzm::build_bath(cfg.bath), json::object());
    } else {
        for (double alpha : alphas) {
            lzm::SpectralParams params = std::get<lzm::SpectralParams>(cfg.bath);
            params.alpha = alpha;
            run_one(lzm::discretize(params), json{{"alpha", alpha}});
        }
    }
    lzm::io::atomic_write(out_path, fits.dump(2) + "\n");
    return kExitOk;
}

int cmd_discretize(const std::string& config_path, const std::string& out_path) {
    const lzm::RunConfig cfg = lzm::load_config(config_path);
    if (!std::holds_alternative<lzm::SpectralParams>(cfg.bath))
        throw lzm::ConfigError("discretize: requires a spectral bath");
    lzm::io::atomic_write(out_path, lzm::io::modes_csv(lzm::build_bath(cfg.bath)));
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dissipative three-level Landau-Zener dynamics (multiple Davydov D2 ansatz)"};
    app.require_subcommand(1);

    std::string config_path, out_path = "out.csv", out_dir = "sweep_out", format = "csv";
    int jobs = 1;

    auto* propagate = app.add_subcommand("propagate", "Propagate one trajectory");
    propagate->add_option("config", config_path, "JSON run configuration")->required();
    propagate->add_option("--out", out_path, "output file");
    propagate->add_option("--format", format, "csv|json")
        ->check(CLI::IsMember({"csv", "json"}));

    auto* sweep = app.add_subcommand("sweep", "Contour sweep over (D, A_z)");
    sweep->add_option("config", config_path, "JSON run configuration")->required();
    sweep->add_option("--out", out_dir, "output directory");
    sweep->add_option("--jobs", jobs, "worker count")->check(CLI::PositiveNumber);

    auto* levels = app.add_subcommand("levels", "Truncated-Fock energy diagram");
    levels->add_option("config", config_path, "JSON run configuration")->required();
    levels->add_option("--out", out_path, "output file");

    auto* fit = app.add_subcommand("fit", "Sinusoidal Rabi-cycle fit");
    fit->add_option("config", config_path, "JSON run configuration")->required();
    fit->add_option("--out", out_path, "output file");

    auto* discretize = app.add_subcommand("discretize", "Dump discretized bath modes");
    discretize->add_option("config", config_path, "JSON run configuration")->required();
    discretize->add_option("--out", out_path, "output file");

    CLI11_PARSE(app, argc, argv);

    try {
        if (propagate->parsed()) return cmd_propagate(config_path, out_path, format);
        if (sweep->parsed()) return cmd_sweep(config_path, out_dir, jobs);
        if (levels->parsed()) return cmd_levels(config_path, out_path);
        if (fit->parsed()) return cmd_fit(config_path, out_path);
        if (discretize->parsed()) return cmd_discretize(config_path, out_path);
    } catch (const lzm::ConfigError& ex) {
        std::cerr << "configuration error: " << ex.what() << "\n";
        return kExitValidation;
    } catch (const std::invalid_argument& ex) {
        std::cerr << "validation error: " << ex.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& ex) {
        std::cerr << "numerical error: " << ex.what() << "\n";
        return kExitNumerical;
    }
    return kExitOk;
}
