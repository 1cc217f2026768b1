#include <doctest.h>

#include <cmath>
#include <random>

#include "strichartz/error.hpp"
#include "strichartz/extremizer.hpp"
#include "strichartz/thresholds.hpp"

using namespace strichartz;

namespace {

cplx field_inner(const SpaceTimeField& a, const SpaceTimeField& b) {
    cplx s = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) s += a.values[i] * std::conj(b.values[i]);
    return s * a.time.step() * a.grid.spacing();
}

SpaceTimeField random_field(const TimeAxis& axis, const SpectralGrid& g, double alpha, double s, unsigned seed) {
    SpaceTimeField F(axis, g, alpha, s);
    std::mt19937_64 rng(seed);
    for (std::size_t k = 0; k < axis.size(); ++k) {
        const WaveFunction w = random_bandlimited(g, 3.0, rng());
        std::copy(w.values.begin(), w.values.end(), F.slice(k));
    }
    return F;
}

double profile_distance(const WaveFunction& a, const WaveFunction& b) {
    // Profiles are compared up to the residual global phase.
    const cplx ip = inner_product(a, b);
    const cplx ph = std::abs(ip) > 0.0 ? ip / std::abs(ip) : 1.0;
    WaveFunction c = b;
    for (auto& v : c.values) v *= ph;
    return l2_distance(a, c);
}

}  // namespace

TEST_SUITE("extremizer") {
    TEST_CASE("adjoint duality") {
        const SpectralGrid g(512, 40.0);
        const TimeAxis axis(0.0, 32, 0.05);
        for (double alpha : {2.0, 3.0, 4.0}) {
            const double s = (alpha - 2.0) / 6.0;
            for (unsigned seed = 1; seed <= 3; ++seed) {
                const WaveFunction u = random_bandlimited(g, 3.0, seed);
                const SpaceTimeField F = random_field(axis, g, alpha, s, 100 + seed);
                const cplx lhs = field_inner(evolve_window(u, alpha, s, axis), F);
                const cplx rhs = inner_product(u, adjoint_extension(F, alpha, s));
                CHECK(std::abs(lhs - rhs) <= 1e-6 * std::abs(lhs));
            }
        }
    }

    TEST_CASE("adjoint of trivial fields") {
        const SpectralGrid g(256, 20.0);
        const TimeAxis axis(0.0, 4, 0.1);
        const WaveFunction z = adjoint_extension(SpaceTimeField(axis, g, 3.0, 0.2), 3.0, 0.2);
        for (const auto& v : z.values) CHECK(v == cplx(0.0));

        const TimeAxis one(0.0, 0, 0.1);
        SpaceTimeField F(one, g, 3.0, 0.2);
        const WaveFunction w = gaussian_packet(g, 0.0, 0.0, 1.0);
        std::copy(w.values.begin(), w.values.end(), F.slice(0));
        WaveFunction expect = fractional_derivative(w, 0.2);
        for (auto& v : expect.values) v *= 0.1;
        CHECK(l2_distance(adjoint_extension(F, 3.0, 0.2), expect) < 1e-14);
    }

    TEST_CASE("symmetry normalization") {
        const SpectralGrid g(2048, 40.0);
        const WaveFunction u = gaussian_packet(g, 0.0, 0.0, 1.0);
        const WaveFunction n = symmetry_normalize(u, 2.0);
        // |u|^2 of the unit-width packet has standard deviation 1/2; normalization rescales it to 1.
        CHECK(std::abs(spread(n) - 1.0) < 1e-2);
        CHECK(std::abs(l2_norm(n) - 1.0) < 1e-10);
        CHECK(std::abs(centroid(n)) < g.spacing());
        CHECK(l2_distance(symmetry_normalize(n, 2.0), n) < 1e-8);
        const WaveFunction moved = apply_symmetry(u, {1.4, 2.0, 0.0, 0.3}, 2.0);
        CHECK(profile_distance(symmetry_normalize(moved, 2.0), symmetry_normalize(u, 2.0)) < 1e-3);
        const WaveFunction moved3 = apply_symmetry(u, {1.4, 2.0, 0.0, 0.0}, 3.0);
        CHECK(profile_distance(symmetry_normalize(moved3, 3.0), symmetry_normalize(u, 3.0)) < 1e-3);
    }

    TEST_CASE("alpha = 2 search finds the Gaussian") {
        const SpectralGrid g(2048, 40.0);
        const WaveFunction gauss = symmetry_normalize(gaussian_packet(g, 0.0, 0.0, 1.0), 2.0);
        ExtremizerConfig cfg;
        cfg.seed = 3;
        const ExtremizerResult r = extremize(2.0, 6.0, 6.0, cfg);
        CHECK(r.converged);
        CHECK(std::abs(r.final_ratio / std::pow(12.0, -1.0 / 12.0) - 1.0) < 1e-2);
        CHECK(std::abs(l2_norm(r.profile) - 1.0) < 1e-10);
        CHECK(r.residual < 10.0 * cfg.ratio_tol);
        for (std::size_t i = 1; i < r.ratio_history.size(); ++i)
            CHECK(r.ratio_history[i] >= r.ratio_history[i - 1] * (1.0 - cfg.dip_tol));
        CHECK(profile_distance(resample(r.profile, g), gauss) < 5e-2);
        CHECK(precompactness_report(2.0, 6.0, 6.0, r.final_ratio, 1e-3).verdict == Verdict::within_tolerance);
    }

    TEST_CASE("seeds agree at alpha = 2" * doctest::timeout(300)) {
        std::vector<WaveFunction> profiles;
        for (unsigned seed = 1; seed <= 10; ++seed) {
            ExtremizerConfig cfg;
            cfg.seed = seed;
            const ExtremizerResult r = extremize(2.0, 6.0, 6.0, cfg);
            if (r.converged) profiles.push_back(r.profile);
        }
        REQUIRE(profiles.size() >= 9);
        // Count seeds whose profile agrees with the majority within 1e-2.
        std::size_t best = 0;
        for (const auto& a : profiles) {
            std::size_t agree = 0;
            for (const auto& b : profiles) agree += profile_distance(a, resample(b, a.grid)) < 1e-2;
            best = std::max(best, agree);
        }
        CHECK(best >= 9);
    }

    TEST_CASE("asymmetric pair at alpha = 2") {
        ExtremizerConfig cfg;
        cfg.seed = 2;
        const ExtremizerResult r = extremize(2.0, 8.0, 4.0, cfg);
        CHECK(r.converged);
        CHECK(std::abs(r.final_ratio / std::pow(2.0, -0.25) - 1.0) < 1e-2);
    }

    TEST_CASE("alpha = 4 search clears the threshold") {
        ExtremizerConfig cfg;
        cfg.seed = 1;
        const ExtremizerResult r = extremize(4.0, 6.0, 6.0, cfg);
        CHECK(r.final_ratio >= 0.99 * symmetric_threshold(4.0));
    }

    TEST_CASE("input validation") {
        CHECK_THROWS_WITH_AS(extremize(1.0, 6.0, 6.0), doctest::Contains("invalid-alpha"), Error);
        CHECK_THROWS_WITH_AS(extremize(2.0, 6.0, 2.0), doctest::Contains("inadmissible-pair"), Error);
        const WaveFunction a = random_bandlimited(SpectralGrid(256, 20.0), 2.0, 5);
        const WaveFunction b = random_bandlimited(SpectralGrid(256, 20.0), 2.0, 5);
        CHECK(a.values == b.values);
        CHECK(std::abs(l2_norm(a) - 1.0) < 1e-12);
    }
}
