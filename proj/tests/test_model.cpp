#include <catch_amalgamated.hpp>

#include "lzm/model.hpp"

using namespace lzm;

TEST_CASE("spin-1 operator matrices") {
    const auto [sz, sx] = spin1_matrices();

    SECTION("Sz eigenvalues are {+1, 0, -1}") {
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(sz);
        REQUIRE(es.eigenvalues()(0) == Catch::Approx(-1.0));
        REQUIRE(es.eigenvalues()(1) == Catch::Approx(0.0).margin(1e-15));
        REQUIRE(es.eigenvalues()(2) == Catch::Approx(1.0));
    }
    SECTION("Sx couples adjacent states with 1/sqrt(2)") {
        REQUIRE(sx(0, 1) == Catch::Approx(1.0 / std::sqrt(2.0)));
        REQUIRE(sx(1, 2) == Catch::Approx(1.0 / std::sqrt(2.0)));
        REQUIRE(sx(0, 2) == 0.0);
        REQUIRE(sx(0, 0) == 0.0);
        REQUIRE((sx - sx.transpose()).norm() == 0.0);
    }
    SECTION("anisotropy term is traceless") {
        const Eigen::Matrix3d zfs = sz * sz - (2.0 / 3.0) * Eigen::Matrix3d::Identity();
        REQUIRE(zfs(0, 0) == Catch::Approx(1.0 / 3.0));
        REQUIRE(zfs(1, 1) == Catch::Approx(-2.0 / 3.0));
        REQUIRE(zfs(2, 2) == Catch::Approx(1.0 / 3.0));
        REQUIRE(zfs.trace() == Catch::Approx(0.0).margin(1e-15));
    }
}

TEST_CASE("drive evaluators") {
    SECTION("linear drive") {
        const DriveSpec drive = LinearDrive{1.0, 0.5};
        const auto [oz, ox] = drive_values(drive, -10.0);
        REQUIRE(oz == Catch::Approx(-10.0));
        REQUIRE(ox == Catch::Approx(0.5));
    }
    SECTION("periodic drive at t = 0") {
        const DriveSpec drive = PeriodicDrive{0.5, 1.0, 0.05, 10.0};
        const auto [oz, ox] = drive_values(drive, 0.0);
        REQUIRE(oz == Catch::Approx(0.5));
        REQUIRE(ox == Catch::Approx(0.05));
    }
    SECTION("zero amplitudes give zero fields") {
        const DriveSpec drive = PeriodicDrive{0.0, 1.0, 0.0, 10.0};
        const auto [oz, ox] = drive_values(drive, 1.7);
        REQUIRE(oz == 0.0);
        REQUIRE(ox == 0.0);
    }
    SECTION("validation") {
        REQUIRE_THROWS_AS(validate(DriveSpec{LinearDrive{0.0, 0.5}}), std::invalid_argument);
        REQUIRE_THROWS_AS(validate(DriveSpec{PeriodicDrive{0.1, -1.0, 0.0, 1.0}}),
                          std::invalid_argument);
    }
}

TEST_CASE("system matrix") {
    SECTION("all couplings zero gives the zero matrix") {
        ModelConfig cfg{0.0, PeriodicDrive{0.0, 1.0, 0.0, 1.0}};
        REQUIRE(system_matrix(cfg, 3.3).norm() == 0.0);
    }
    SECTION("symmetric at arbitrary times") {
        ModelConfig cfg{4.2, PeriodicDrive{0.7, 1.0, 0.3, 10.0}};
        for (double t : {-3.0, 0.0, 0.123, 7.7}) {
            const Eigen::Matrix3d h = system_matrix(cfg, t);
            REQUIRE((h - h.transpose()).norm() == 0.0);
        }
    }
    SECTION("level degeneracy at the first avoided crossing") {
        ModelConfig cfg{10.0, LinearDrive{1.0, 0.5}};
        const Eigen::Matrix3d h = system_matrix(cfg, -10.0);
        REQUIRE(h(0, 0) - h(1, 1) == Catch::Approx(0.0).margin(1e-12));
    }
    SECTION("trace is zero for any drive") {
        ModelConfig cfg{10.0, LinearDrive{1.0, 0.5}};
        for (double t : {-20.0, -5.0, 0.0, 13.0})
            REQUIRE(system_matrix(cfg, t).trace() == Catch::Approx(0.0).margin(1e-12));
    }
    SECTION("periodicity when omega_x/omega_z is an integer") {
        ModelConfig cfg{-1.0, PeriodicDrive{0.5, 1.0, 0.1, 10.0}};
        const double period = 2.0 * M_PI;
        for (double t : {0.0, 0.37, 2.5}) {
            const Eigen::Matrix3d a = system_matrix(cfg, t);
            const Eigen::Matrix3d b = system_matrix(cfg, t + period);
            REQUIRE((a - b).norm() < 1e-12);
        }
    }
}
