#include <doctest.h>

#include <cmath>

#include "strichartz/error.hpp"
#include "strichartz/spacetime_norms.hpp"

using namespace strichartz;

TEST_SUITE("spacetime_norms") {
    TEST_CASE("mixed norm oracles") {
        const SpectralGrid g(512, 16.0);
        const TimeAxis axis(0.0, 256, 1.0 / 32.0);
        SpaceTimeField zero(axis, g, 2.0, 0.0);
        CHECK(mixed_norm(zero, 6.0, 6.0) == 0.0);

        SpaceTimeField box(axis, g, 2.0, 0.0);
        for (std::size_t k = 0; k < axis.size(); ++k)
            for (std::size_t j = 0; j < g.size(); ++j)
                if (axis[k] >= 0.0 && axis[k] < 1.0 && g.x(j) >= 0.0 && g.x(j) < 1.0) box.slice(k)[j] = 1.0;
        for (auto [q, r] : {std::pair{6.0, 6.0}, {8.0, 4.0}, {3.0, 1.5}, {kInf, 2.0}})
            CHECK(std::abs(mixed_norm(box, q, r) - 1.0) <= 2.0 * (axis.step() + g.spacing()));

        // e^{-t^2 - x^2}: the L^6 norm is (pi/6)^{1/6}.
        SpaceTimeField gauss(axis, g, 2.0, 0.0);
        for (std::size_t k = 0; k < axis.size(); ++k)
            for (std::size_t j = 0; j < g.size(); ++j) gauss.slice(k)[j] = std::exp(-axis[k] * axis[k] - g.x(j) * g.x(j));
        CHECK(std::abs(mixed_norm(gauss, 6.0, 6.0) / std::pow(kPi / 6.0, 1.0 / 6.0) - 1.0) < 1e-6);
        // (8, 4): e^{-t^2} (pi/4)^{1/8} in x, then (pi/8)^{1/16} in t.
        CHECK(std::abs(mixed_norm(gauss, 8.0, 4.0) / (std::pow(kPi / 4.0, 0.125) * std::pow(kPi / 8.0, 0.0625)) - 1.0) < 1e-6);
        for (double p : {2.0, 3.0, 6.0}) CHECK(std::abs(mixed_norm(gauss, p, p) - lp_norm(gauss, p)) < 1e-12 * lp_norm(gauss, p));
    }

    TEST_CASE("exponent checks") {
        CHECK_THROWS_WITH_AS(check_ratio_pair(6.0, 2.0), doctest::Contains("inadmissible-pair"), Error);
        CHECK_THROWS_WITH_AS(check_ratio_pair(kInf, 2.0), doctest::Contains("endpoint-pair"), Error);
        CHECK_THROWS_WITH_AS(check_ratio_pair(4.0, kInf), doctest::Contains("endpoint-pair"), Error);
        CHECK_THROWS_WITH_AS(check_exponents(-1.0, 2.0), doctest::Contains("invalid-exponent"), Error);
        CHECK_NOTHROW(check_ratio_pair(8.0, 4.0));
    }

    TEST_CASE("Gaussian ratios at alpha = 2") {
        const SpectralGrid g(2048, 40.0);
        const WaveFunction u = gaussian_packet(g, 0.0, 0.0, 1.0);
        CHECK(std::abs(strichartz_ratio(u, 2.0, 6.0, 6.0) - std::pow(12.0, -1.0 / 12.0)) < 1e-3);
        CHECK(std::abs(strichartz_ratio(u, 2.0, 8.0, 4.0) - std::pow(2.0, -0.25)) < 1e-3);
        CHECK(nonendpoint_ratio(u, 2.0) == strichartz_ratio(u, 2.0, 6.0, 6.0));
        CHECK_THROWS_WITH_AS(strichartz_ratio(WaveFunction(g), 2.0, 6.0, 6.0), doctest::Contains("zero-datum"), Error);
    }

    TEST_CASE("symmetry invariance") {
        const SpectralGrid g(4096, 80.0);
        const WaveFunction u = gaussian_packet(g, 0.0, 0.0, 1.0);
        WindowConfig cfg;
        for (double alpha : {2.0, 3.0}) {
            const double base = strichartz_ratio(u, alpha, 6.0, 6.0, cfg);
            // Non-integer powers of |xi| leave algebraic spatial tails, so the
            // time translation is only exercised at alpha = 2.
            const double t0 = alpha == 2.0 ? 0.5 : 0.0;
            for (const ProfileParams& p : {ProfileParams{1.6, 0.0, 0.0, 0.0}, ProfileParams{0.7, 3.0, 0.0, 0.0},
                                           ProfileParams{1.0, -2.0, 0.0, t0}}) {
                const double moved = strichartz_ratio(apply_symmetry(u, p, alpha), alpha, 6.0, 6.0, cfg);
                CHECK(std::abs(moved - base) <= 2.0 * cfg.tol * base);
            }
        }
    }

    TEST_CASE("nonendpoint ratio at alpha = 4 against a refined grid") {
        const WaveFunction a = gaussian_packet(SpectralGrid(512, 40.0), 0.0, 0.0, 1.0);
        const WaveFunction b = gaussian_packet(SpectralGrid(1024, 40.0), 0.0, 0.0, 1.0);
        WindowConfig fine;
        fine.steps_per_tau *= 2.0;
        const double va = nonendpoint_ratio(a, 4.0), vb = nonendpoint_ratio(b, 4.0, fine);
        CHECK(std::abs(va - vb) < 1e-3 * vb);
    }

    TEST_CASE("window convergence") {
        const WaveFunction u = gaussian_packet(SpectralGrid(2048, 40.0), 0.0, 0.0, 1.0);
        WindowConfig loose, tight;
        loose.tol = 1e-3;
        tight.tol = 1e-5;
        const NormReport a = weighted_norm(u, 3.0, 1.0 / 6.0, 6.0, 6.0, loose);
        const NormReport b = weighted_norm(u, 3.0, 1.0 / 6.0, 6.0, 6.0, tight);
        CHECK(b.halfwidth >= a.halfwidth);
        CHECK(std::abs(a.norm - b.norm) <= 2e-3 * b.norm);
        CHECK(b.tail_fraction >= 0.0);
    }
}
