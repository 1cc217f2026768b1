#include <doctest.h>

#include <cmath>

#include "strichartz/asymptotics.hpp"
#include "strichartz/error.hpp"
#include "strichartz/fit.hpp"
#include "strichartz/thresholds.hpp"

using namespace strichartz;

TEST_SUITE("asymptotic_limits") {
    TEST_CASE("alpha = 2 limit curve is flat at the target") {
        const WaveFunction phi = gaussian_packet(SpectralGrid(2048, 40.0), 0.0, 0.0, 1.0);
        const auto c = schrodinger_limit_curve(phi, 2.0, 6.0, 6.0, {1.0, 2.0, 4.0, 8.0});
        for (const auto& p : c) {
            CHECK(p.rel_error < 2e-4);
            CHECK(std::abs(p.value - c.front().value) < 2e-4 * p.value);
        }
        CHECK(std::abs(c.front().target - std::pow(12.0, -1.0 / 12.0)) < 2e-4);
    }

    TEST_CASE("alpha = 4 limit approaches the threshold") {
        const WaveFunction phi = gaussian_packet(SpectralGrid(2048, 40.0), 0.0, 0.0, 1.0);
        const auto c = schrodinger_limit_curve(phi, 4.0, 6.0, 6.0, {4.0, 8.0, 16.0, 32.0});
        std::vector<double> err;
        for (const auto& p : c) err.push_back(p.rel_error);
        CHECK(err.back() <= 0.05);
        CHECK(eventually_decreasing(err));
        CHECK(std::abs(c.back().target - symmetric_threshold(4.0)) < 2e-4);
    }

    TEST_CASE("limit curve is stable under refinement") {
        const std::vector<double> xi = {4.0, 8.0};
        const auto a = schrodinger_limit_curve(gaussian_packet(SpectralGrid(1024, 40.0), 0.0, 0.0, 1.0), 3.0, 6.0, 6.0, xi);
        WindowConfig fine;
        fine.steps_per_tau *= 2.0;
        const auto b = schrodinger_limit_curve(gaussian_packet(SpectralGrid(2048, 40.0), 0.0, 0.0, 1.0), 3.0, 6.0, 6.0, xi, fine);
        for (std::size_t i = 0; i < xi.size(); ++i) CHECK(std::abs(a[i].value - b[i].value) < 1e-3 * b[i].value);
    }

    TEST_CASE("modulation beyond the band is rejected") {
        const WaveFunction phi = gaussian_packet(SpectralGrid(256, 40.0), 0.0, 0.0, 1.0);
        CHECK_THROWS_WITH_AS(modulate(phi, 18.0), doctest::Contains("grid-underresolved"), Error);
    }

    TEST_CASE("eventually decreasing") {
        CHECK(eventually_decreasing({5, 1, 3, 2, 1}));
        CHECK_FALSE(eventually_decreasing({1, 2, 3}));
        CHECK_FALSE(eventually_decreasing({3, 2, 1, 2}));
        CHECK(eventually_decreasing({3, 2, 1, 1}));
    }

    TEST_CASE("dominating function") {
        const DominatingScale sc{2.5, 2.0};
        CHECK(dominating_function(0.0, 0.0, 6.0, sc) == 2.5);
        // q = 6: exponents -1/4 on both factors inside the cone, -1/2 outside.
        CHECK(dominating_function(10.0, 1.0, 6.0, sc) == doctest::Approx(2.5 * std::pow(11.0 * 2.0, -0.25)));
        CHECK(dominating_function(1.0, 10.0, 6.0, sc) == doctest::Approx(2.5 * std::pow(2.0 * 11.0, -0.5)));
        for (double q : {4.0, 6.0, 8.0}) {
            // Monotone on each side of the cone |x| = c|t|.
            auto inside = [&](double t, double x) { return std::abs(x) <= sc.c * std::abs(t); };
            for (double x : {0.0, 0.5, 3.0, 20.0}) {
                for (double t = 0.25; t <= 40.0; t += 0.25) {
                    if (inside(t, x) != inside(t - 0.25, x)) continue;
                    CHECK(dominating_function(t, x, q, sc) <= dominating_function(t - 0.25, x, q, sc) * (1.0 + 1e-15));
                }
            }
            for (double t : {0.0, 1.0, 10.0}) {
                for (double x = 0.25; x <= 40.0; x += 0.25) {
                    if (inside(t, x) != inside(t, x - 0.25)) continue;
                    CHECK(dominating_function(t, x, q, sc) <= dominating_function(t, x - 0.25, q, sc) * (1.0 + 1e-15));
                }
            }
        }
        CHECK_THROWS_AS(dominating_function(0.0, 0.0, 3.0, sc), Error);
    }

    TEST_CASE("pointwise domination along a modulation sweep") {
        const WaveFunction phi = gaussian_packet(SpectralGrid(2048, 40.0), 0.0, 0.0, 1.0);
        const DominationSweep d = domination_sweep(phi, 4.0, 6.0, {4.0, 8.0, 16.0}, 8.0, 16.0, 33);
        CHECK(d.scale.C > 0.0);
        CHECK(d.dominated);
    }

    TEST_CASE("concentrating sequence") {
        const SpectralGrid g(4096, 40.0);
        CHECK(concentrating_mass_outside(4, 1.0) < 1e-11);
        double prev = 1.0;
        for (int n : {1, 2, 4, 8}) {
            const WaveFunction u = concentrating_sequence(g, n, 0.5);
            CHECK(std::abs(l2_norm(u) - 1.0) < 1e-10);
            const double m = mass_outside(u, 0.5, 0.5);
            // The sharp cutoff costs at most one cell of density on each side.
            const double edge = 2.0 * n * std::sqrt(2.0 / kPi) * std::exp(-2.0 * n * n * 0.25) * g.spacing();
            CHECK(std::abs(m - concentrating_mass_outside(n, 0.5)) <= edge + 1e-12);
            CHECK(m <= prev);
            prev = m;
        }
        const WaveFunction u8 = concentrating_sequence(g, 8, 0.0);
        const double r = strichartz_ratio(u8, 3.0, 6.0, 6.0);
        CHECK(std::abs(r / symmetric_threshold(3.0) - 1.0) <= 0.10);
    }

    TEST_CASE("vanishing modulation") {
        const WaveFunction phi = gaussian_packet(SpectralGrid(2048, 40.0), 0.0, 0.0, 1.0);
        const std::vector<double> xi = {4.0, 8.0, 16.0, 32.0};
        const auto flat = vanishing_modulation_curve(phi, 2.0, xi);
        for (const auto& p : flat) CHECK(std::abs(p.value - flat.front().value) < 1e-3 * p.value);
        const auto c = vanishing_modulation_curve(phi, 4.0, xi);
        std::vector<double> v;
        for (const auto& p : c) v.push_back(p.value);
        for (std::size_t i = 1; i < v.size(); ++i) CHECK(v[i] < v[i - 1]);
        CHECK(fit_loglog(xi, v).slope < 0.0);
        CHECK_THROWS_AS(vanishing_modulation_curve(phi, 1.5, xi), Error);
    }

    TEST_CASE("line fits") {
        const LineFit f = fit_line({0, 1, 2, 3}, {1, 3, 5, 7});
        CHECK(f.slope == doctest::Approx(2.0));
        CHECK(f.intercept == doctest::Approx(1.0));
        CHECK(f.residual < 1e-12);
        CHECK(fit_loglog({1, 2, 4, 8}, {1, 0.5, 0.25, 0.125}).slope == doctest::Approx(-1.0));
        CHECK_THROWS_AS(fit_line({1, 1}, {2, 3}), Error);
    }
}
