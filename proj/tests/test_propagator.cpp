#include <doctest.h>

#include <cmath>

#include "strichartz/error.hpp"
#include "strichartz/propagator.hpp"

using namespace strichartz;

namespace {

cplx schrodinger_gaussian(double x, double t) {
    const cplx w(1.0, 2.0 * t);
    return std::exp(-x * x / (2.0 * w)) / std::sqrt(w) / std::pow(kPi, 0.25);
}

double rel_l2(const WaveFunction& a, const WaveFunction& b) { return l2_distance(a, b) / l2_norm(b); }

}  // namespace

TEST_SUITE("propagator") {
    TEST_CASE("alpha validation") {
        CHECK_THROWS_WITH_AS(check_alpha(1.0), doctest::Contains("invalid-alpha"), Error);
        CHECK_THROWS_AS(check_alpha(std::nan("")), Error);
        CHECK_NOTHROW(check_alpha(1.01));
        CHECK(weight(0.0, -0.5) == 0.0);
        CHECK(weight(0.0, 0.0) == 1.0);
        CHECK(weight(-4.0, 0.5) == doctest::Approx(2.0));
    }

    TEST_CASE("flow at t = 0 and closed-form Gaussian evolution") {
        const SpectralGrid g(2048, 80.0);
        const WaveFunction u0 = sample_function(g, [](double x) -> cplx { return schrodinger_gaussian(x, 0.0); });
        CHECK(rel_l2(fractional_flow(u0, 0.0, 3.0), u0) < 1e-15);
        for (double t : {0.3, 1.0, 2.5}) {
            const WaveFunction u = fractional_flow(u0, t, 2.0);
            double err = 0.0;
            for (std::size_t j = 0; j < g.size(); ++j)
                err = std::max(err, std::abs(u.values[j] - schrodinger_gaussian(g.x(j), t)));
            CHECK(err < 1e-6);
        }
    }

    TEST_CASE("Galilean identity at alpha = 2") {
        const SpectralGrid g(4096, 120.0);
        const WaveFunction phi = gaussian_packet(g, 0.0, 0.0, 1.0);
        const double xi0 = 1.5, t = 3.0;
        const WaveFunction a = fractional_flow(gaussian_packet(g, 0.0, xi0, 1.0), t, 2.0);
        const WaveFunction b = translate(fractional_flow(phi, t, 2.0), 2.0 * xi0 * t);
        double err = 0.0;
        for (std::size_t j = 0; j < g.size(); ++j) err = std::max(err, std::abs(std::abs(a.values[j]) - std::abs(b.values[j])));
        CHECK(err < 1e-9);
    }

    TEST_CASE("fractional derivative") {
        const SpectralGrid g(2048, 2.0 * kPi * 256.0);
        const WaveFunction u = inverse_fourier(sample_spectrum(g, [](double xi) -> cplx { return xi >= 1.0 && xi < 2.0 ? 1.0 : 0.0; }));
        CHECK(rel_l2(fractional_derivative(u, 0.0), u) < 1e-15);
        const double r = std::pow(l2_norm(fractional_derivative(u, 1.0)) / l2_norm(u), 2);
        CHECK(r == doctest::Approx(7.0 / 3.0).epsilon(1e-2));

        const SpectralGrid h(1024, 40.0);
        const WaveFunction v = gaussian_packet(h, 0.0, 0.0, 1.0);
        CHECK(rel_l2(fractional_derivative(fractional_derivative(v, 0.3), 0.45), fractional_derivative(v, 0.75)) < 1e-10);
    }

    TEST_CASE("group law and commutation") {
        const SpectralGrid g(1024, 40.0);
        const WaveFunction u = gaussian_packet(g, 1.0, 0.5, 0.8);
        for (double alpha : {1.5, 2.0, 3.0, 4.0}) {
            const WaveFunction a = fractional_flow(fractional_flow(u, 0.7, alpha), -0.25, alpha);
            CHECK(rel_l2(a, fractional_flow(u, 0.45, alpha)) < 1e-10);
            const WaveFunction b = fractional_derivative(fractional_flow(u, 0.7, alpha), 0.4);
            const WaveFunction c = fractional_flow(fractional_derivative(u, 0.4), 0.7, alpha);
            CHECK(rel_l2(b, c) < 1e-12);
            CHECK(std::abs(l2_norm(fractional_flow(u, 5.0, alpha)) - l2_norm(u)) < 1e-10);
        }
    }

    TEST_CASE("evolve_window") {
        const SpectralGrid g(1024, 60.0);
        const TimeAxis axis(0.0, 16, 0.125);
        const SpaceTimeField z = evolve_window(WaveFunction(g), 3.0, 0.2, axis);
        for (const auto& v : z.values) CHECK(v == cplx(0.0));

        const WaveFunction u = gaussian_packet(g, 0.0, 0.0, 1.0);
        const double ds = l2_norm(fractional_derivative(u, 1.0 / 3.0));
        const SpaceTimeField F = evolve_window(u, 4.0, 1.0 / 3.0, axis);
        for (std::size_t k = 0; k < F.slices(); ++k) {
            const WaveFunction slice(g, cvec(F.slice(k), F.slice(k) + g.size()));
            CHECK(std::abs(l2_norm(slice) - ds) < 1e-10 * ds);
        }

        const WaveFunction v0 = sample_function(g, [](double x) -> cplx { return schrodinger_gaussian(x, 0.0); });
        const SpaceTimeField G = evolve_window(v0, 2.0, 0.0, axis);
        double err = 0.0;
        for (std::size_t k = 0; k < G.slices(); ++k)
            for (std::size_t j = 0; j < g.size(); ++j)
                err = std::max(err, std::abs(G.slice(k)[j] - schrodinger_gaussian(g.x(j), axis[k])));
        CHECK(err < 1e-6);
    }
}
