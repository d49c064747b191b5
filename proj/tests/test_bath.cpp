#include <catch_amalgamated.hpp>

#include "lzm/ansatz.hpp"
#include "lzm/bath.hpp"

using namespace lzm;

namespace {

// Independent composite-Simpson quadrature used as the oracle in this file.
double simpson(const std::function<double(double)>& f, double a, double b, int n) {
    if (n % 2) ++n;
    const double h = (b - a) / n;
    double acc = f(a) + f(b);
    for (int i = 1; i < n; ++i) acc += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

}  // namespace

TEST_CASE("spectral density") {
    SpectralParams p{0.1, 3.0, 0.5, 6.0, 20};

    SECTION("vanishes at omega = 0") { REQUIRE(spectral_density(0.0, p) == 0.0); }
    SECTION("direct substitution at omega = omega_c") {
        REQUIRE(spectral_density(0.5, p) == Catch::Approx(0.1 * std::exp(-1.0)).epsilon(1e-12));
    }
    SECTION("maximum sits at s * omega_c") {
        const double peak = p.s * p.omega_c;
        const double jp = spectral_density(peak, p);
        REQUIRE(jp > spectral_density(peak - 1e-3, p));
        REQUIRE(jp > spectral_density(peak + 1e-3, p));
    }
    SECTION("negative frequency rejected") {
        REQUIRE_THROWS_AS(spectral_density(-0.1, p), std::invalid_argument);
    }
}

TEST_CASE("bath discretization") {
    SpectralParams p{0.1, 3.0, 0.5, 6.0, 20};

    SECTION("single mode lands on omega_m") {
        SpectralParams one = p;
        one.n_modes = 1;
        const BathModes bath = discretize(one);
        REQUIRE(bath.size() == 1);
        REQUIRE(bath.modes[0].omega == Catch::Approx(6.0));
    }
    SECTION("frequencies strictly increase up to omega_m") {
        const BathModes bath = discretize(p);
        REQUIRE(bath.size() == 20);
        for (int k = 1; k < bath.size(); ++k)
            REQUIRE(bath.modes[k].omega > bath.modes[k - 1].omega);
        REQUIRE(bath.modes.back().omega == Catch::Approx(6.0));
        for (const Mode& m : bath.modes) {
            REQUIRE(m.eta_z >= 0.0);
            REQUIRE(m.eta_x == 0.0);
        }
    }
    SECTION("coupling strengths integrate the spectral density") {
        const BathModes bath = discretize(p);
        double sum_eta2 = 0.0;
        for (const Mode& m : bath.modes) {
            // eta_k^2 = N omega_k exactly, by construction of the mode density.
            REQUIRE(m.eta_z * m.eta_z ==
                    Catch::Approx(bath.normalization * m.omega).epsilon(1e-12));
            sum_eta2 += m.eta_z * m.eta_z;
        }
        // Right-edge sampling of the equal-measure bins is first-order in 1/N_b.
        const double integral =
            simpson([&p](double w) { return spectral_density(w, p); }, 0.0, p.omega_m, 4000);
        REQUIRE(sum_eta2 == Catch::Approx(integral).epsilon(0.2));
    }
    SECTION("refinement improves the quadrature match") {
        const double integral =
            simpson([&p](double w) { return spectral_density(w, p); }, 0.0, p.omega_m, 4000);
        double prev_err = 1e300;
        for (int nb : {10, 20, 40}) {
            SpectralParams q = p;
            q.n_modes = nb;
            const BathModes bath = discretize(q);
            double sum_eta2 = 0.0;
            for (const Mode& m : bath.modes) sum_eta2 += m.eta_z * m.eta_z;
            const double err = std::abs(sum_eta2 - integral);
            REQUIRE(err < prev_err);
            prev_err = err;
        }
    }
    SECTION("mode density is normalized to N_b") {
        const BathModes bath = discretize(p);
        const double total = simpson(
            [&p](double w) { return w == 0.0 ? 0.0 : spectral_density(w, p) / w; }, 0.0,
            p.omega_m, 4000);
        REQUIRE(total / bath.normalization == Catch::Approx(20.0).epsilon(1e-6));
    }
    SECTION("zero coupling degenerates to a uniform grid") {
        SpectralParams q = p;
        q.alpha = 0.0;
        const BathModes bath = discretize(q);
        for (const Mode& m : bath.modes) REQUIRE(m.eta_z == 0.0);
        REQUIRE(bath.modes.back().omega == Catch::Approx(6.0));
        for (int k = 1; k < bath.size(); ++k)
            REQUIRE(bath.modes[k].omega > bath.modes[k - 1].omega);
    }
    SECTION("general exponent goes through quadrature") {
        SpectralParams q{0.2, 2.0, 0.5, 6.0, 8};
        const BathModes bath = discretize(q);
        for (int k = 1; k < bath.size(); ++k)
            REQUIRE(bath.modes[k].omega > bath.modes[k - 1].omega);
        for (const Mode& m : bath.modes)
            REQUIRE(m.eta_z * m.eta_z ==
                    Catch::Approx(bath.normalization * m.omega).epsilon(1e-10));
        // The mode-density normalization comes from quadrature at s != 3.
        const double total = simpson(
            [&q](double w) { return w == 0.0 ? 0.0 : spectral_density(w, q) / w; }, 0.0,
            q.omega_m, 4000);
        REQUIRE(bath.normalization == Catch::Approx(total / q.n_modes).epsilon(1e-6));
    }
    SECTION("invalid parameters rejected") {
        SpectralParams bad = p;
        bad.n_modes = 0;
        REQUIRE_THROWS_AS(discretize(bad), std::invalid_argument);
    }
}

TEST_CASE("single-mode construction") {
    SECTION("diagonal-coupling configuration") {
        const BathModes bath = single_mode(1.0, 0.4, 0.0);
        REQUIRE(bath.size() == 1);
        REQUIRE(bath.modes[0].omega == 1.0);
        REQUIRE(bath.modes[0].eta_z == 0.4);
        REQUIRE(bath.f0[0] == cplx(0.0));
    }
    SECTION("off-diagonal coupling with displacement") {
        const BathModes bath = single_mode(5.0, 0.0, 0.1, 1.0);
        REQUIRE(bath.modes[0].eta_x == 0.1);
        REQUIRE(bath.f0[0] == cplx(1.0));
    }
    SECTION("nonpositive frequency rejected") {
        REQUIRE_THROWS_AS(single_mode(0.0, 0.1, 0.0), std::invalid_argument);
    }
}
