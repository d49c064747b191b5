#include <catch_amalgamated.hpp>

#include <json.hpp>

#include "lzm/config.hpp"

using namespace lzm;
using nlohmann::json;

namespace {

json minimal() {
    return json::parse(R"({
        "model": {"D": -1.0, "drive": {"type": "periodic", "A_z": 0.5, "omega_z": 1.0,
                                       "A_x": 0.1, "omega_x": 10.0}},
        "bath": {"mode": "single", "omega_p": 1.0, "eta_z": 0.0, "eta_x": 0.1},
        "propagation": {"M": 4, "dt": 1e-3, "t_start": 0.0, "t_end": 5.0, "seed": 7}
    })");
}

}  // namespace

TEST_CASE("minimal configuration parses") {
    const RunConfig cfg = parse_config(minimal());
    REQUIRE(cfg.model.anisotropy == -1.0);
    const auto& drive = std::get<PeriodicDrive>(cfg.model.drive);
    REQUIRE(drive.a_z == 0.5);
    REQUIRE(drive.omega_x == 10.0);
    REQUIRE(cfg.prop.multiplicity == 4);
    REQUIRE(cfg.prop.seed == 7);
    REQUIRE(cfg.prop.record_every == 100);  // default
    REQUIRE(cfg.prop.noise == 1e-4);        // default
    REQUIRE_FALSE(cfg.sweep.has_value());
    REQUIRE_FALSE(cfg.fit.has_value());

    const BathModes bath = build_bath(cfg.bath);
    REQUIRE(bath.size() == 1);
    REQUIRE(bath.modes[0].eta_x == 0.1);
}

TEST_CASE("linear drive and complex displacement") {
    json doc = minimal();
    doc["model"]["drive"] = {{"type", "linear"}, {"v", 1.0}, {"Delta", 0.5}};
    doc["bath"]["f0"] = {0.3, -0.2};
    const RunConfig cfg = parse_config(doc);
    REQUIRE(std::get<LinearDrive>(cfg.model.drive).v == 1.0);
    REQUIRE(std::get<SingleModeSpec>(cfg.bath).f0 == cplx(0.3, -0.2));

    doc["bath"]["f0"] = 1.0;
    REQUIRE(std::get<SingleModeSpec>(parse_config(doc).bath).f0 == cplx(1.0));
}

TEST_CASE("spectral bath block") {
    json doc = minimal();
    doc["bath"] = {{"mode", "spectral"}, {"alpha", 0.1}, {"s", 3.0},
                   {"omega_c", 0.5}, {"omega_m", 6.0}, {"N_b", 10}};
    const RunConfig cfg = parse_config(doc);
    const auto& p = std::get<SpectralParams>(cfg.bath);
    REQUIRE(p.alpha == 0.1);
    REQUIRE(p.n_modes == 10);
    REQUIRE(build_bath(cfg.bath).size() == 10);
}

TEST_CASE("sweep and fit blocks") {
    json doc = minimal();
    doc["sweep"] = {{"D", {{"min", -15.0}, {"max", 15.0}, {"count", 41}}},
                    {"A_z", {{"min", 0.0}, {"max", 5.0}, {"count", 21}}},
                    {"t_obs", 5.0},
                    {"frames", {0.5, 1.0}}};
    doc["fit"] = {{"window", 7}, {"alphas", {0.0, 0.05}}};
    const RunConfig cfg = parse_config(doc);
    REQUIRE(cfg.sweep.has_value());
    REQUIRE(cfg.sweep->anisotropy.count == 41);
    REQUIRE(cfg.sweep->a_z.max == 5.0);
    REQUIRE(cfg.sweep->frames.size() == 2);
    REQUIRE(cfg.fit.has_value());
    REQUIRE(cfg.fit->window == 7);
    REQUIRE(cfg.fit->alphas == std::vector<double>{0.0, 0.05});
}

TEST_CASE("strict validation") {
    SECTION("unknown top-level key") {
        json doc = minimal();
        doc["extra"] = 1;
        REQUIRE_THROWS_AS(parse_config(doc), ConfigError);
    }
    SECTION("unknown propagation key") {
        json doc = minimal();
        doc["propagation"]["step"] = 1e-3;
        REQUIRE_THROWS_AS(parse_config(doc), ConfigError);
    }
    SECTION("missing required key") {
        json doc = minimal();
        doc["propagation"].erase("seed");
        REQUIRE_THROWS_AS(parse_config(doc), ConfigError);
    }
    SECTION("wrong type") {
        json doc = minimal();
        doc["propagation"]["dt"] = "small";
        REQUIRE_THROWS_AS(parse_config(doc), ConfigError);
    }
    SECTION("bad drive type") {
        json doc = minimal();
        doc["model"]["drive"] = {{"type", "quadratic"}};
        REQUIRE_THROWS_AS(parse_config(doc), ConfigError);
    }
    SECTION("linear drive rejects periodic keys") {
        json doc = minimal();
        doc["model"]["drive"] = {{"type", "linear"}, {"v", 1.0}, {"Delta", 0.5}, {"A_z", 1.0}};
        REQUIRE_THROWS_AS(parse_config(doc), ConfigError);
    }
    SECTION("bad bath mode") {
        json doc = minimal();
        doc["bath"]["mode"] = "many";
        REQUIRE_THROWS_AS(parse_config(doc), ConfigError);
    }
    SECTION("malformed f0") {
        json doc = minimal();
        doc["bath"]["f0"] = {1.0, 2.0, 3.0};
        REQUIRE_THROWS_AS(parse_config(doc), ConfigError);
    }
    SECTION("invalid physical values surface as ConfigError or invalid_argument") {
        json doc = minimal();
        doc["propagation"]["dt"] = 0.0;
        REQUIRE_THROWS(parse_config(doc));
    }
}

TEST_CASE("file loading") {
    SECTION("missing file") { REQUIRE_THROWS_AS(load_config("/nonexistent.json"), ConfigError); }
    SECTION("roundtrip through disk") {
        const std::string path = "test_config_roundtrip.json";
        {
            std::ofstream out(path);
            out << minimal().dump();
        }
        const RunConfig cfg = load_config(path);
        REQUIRE(cfg.prop.multiplicity == 4);
        std::remove(path.c_str());
    }
    SECTION("malformed JSON") {
        const std::string path = "test_config_bad.json";
        {
            std::ofstream out(path);
            out << "{ not json";
        }
        REQUIRE_THROWS_AS(load_config(path), ConfigError);
        std::remove(path.c_str());
    }
}
