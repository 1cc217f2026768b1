#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>

#include "strichartz/error.hpp"
#include "strichartz/profile_lab.hpp"

using namespace strichartz;

namespace {

// Integral over the real line by the substitution t = scale tan(theta) and
// composite Simpson in theta; scale should match where f lives.
double integrate_line(const std::function<double(double)>& f, double scale = 1.0, int n = 400000) {
    const double a = -0.5 * kPi, b = 0.5 * kPi, h = (b - a) / n;
    double s = 0.0;
    for (int i = 1; i < n; ++i) {
        const double th = a + i * h, t = scale * std::tan(th), c = 1.0 / std::cos(th);
        s += (i % 2 ? 4.0 : 2.0) * f(t) * scale * c * c;
    }
    return s * h / 3.0;
}

// L3 norm of the product of two alpha = 2 evolutions of (2/pi)^{1/4} e^{-x^2}
// placed at x = +-d/2: |e^{it dxx} phi|^2 = (2/pi)^{1/2} w^{-1/2} e^{-2x^2/w}
// with w = 1 + 16 t^2, and the x integral is Gaussian.
double space_separation_oracle(double d) {
    const double I = integrate_line([d](double t) {
        const double w = 1.0 + 16.0 * t * t;
        return std::exp(-1.5 * d * d / w) / w;
    }, std::max(1.0, 0.25 * d));
    return std::cbrt(std::pow(2.0 / kPi, 1.5) * std::sqrt(kPi / 6.0) * I);
}

// Same at time offsets +-d/2.
double time_separation_oracle(double d) {
    const double I = integrate_line([d](double t) {
        const double wa = 1.0 + 16.0 * (t - 0.5 * d) * (t - 0.5 * d), wb = 1.0 + 16.0 * (t + 0.5 * d) * (t + 0.5 * d);
        return std::pow(wa * wb, -0.75) * std::sqrt(kPi / (3.0 * (1.0 / wa + 1.0 / wb)));
    }, std::max(1.0, d));
    return std::cbrt(std::pow(2.0 / kPi, 1.5) * I);
}

WaveFunction bump_profile(const SpectralGrid& g, double lo, double hi) {
    return normalized(inverse_fourier(sample_spectrum(g, [=](double xi) -> cplx {
        const double u = (2.0 * xi - lo - hi) / (hi - lo);
        return std::abs(u) < 1.0 ? std::exp(-1.0 / (1.0 - u * u)) : 0.0;
    })));
}

WaveFunction windowed_noise(const SpectralGrid& g, double band, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n;
    Spectrum f(g);
    for (std::size_t k = 0; k < g.size(); ++k)
        if (std::abs(g.xi(k)) < band) f.values[k] = cplx(n(rng), n(rng));
    WaveFunction u = inverse_fourier(f);
    for (std::size_t j = 0; j < g.size(); ++j) u.values[j] *= std::exp(-std::pow(g.x(j) / 15.0, 4));
    return normalized(u);
}

}  // namespace

TEST_SUITE("profile_lab") {
    TEST_CASE("profile operator") {
        const SpectralGrid g(2048, 80.0);
        const WaveFunction phi = gaussian_packet(g, 0.0, 0.0, 1.0);
        CHECK(l2_distance(profile_operator(phi, {}, 3.0), phi) < 1e-14);
        const WaveFunction a = profile_operator(phi, {1.0, 0.0, 0.0, 0.7}, 2.0);
        CHECK(l2_distance(a, fractional_flow(phi, -0.7, 2.0)) < 1e-14);
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> lh(-0.5, 0.5), x(-5.0, 5.0), xi(-2.0, 2.0), t(-1.0, 1.0);
        for (int i = 0; i < 8; ++i) {
            const ProfileParams p{std::exp(lh(rng)), x(rng), xi(rng), t(rng)};
            CHECK(std::abs(l2_norm(profile_operator(phi, p, 2.0)) - 1.0) < 1e-10);
        }
    }

    TEST_CASE("profile inner product matches the grid inner product") {
        const SpectralGrid g(4096, 80.0);
        const WaveFunction phi = gaussian_packet(g, 0.0, 0.0, 1.0), psi = hermite_function(g, 1);
        const ProfileParams pj{1.3, 1.0, 0.5, 0.2}, pk{0.8, -0.5, 0.0, -0.3};
        const cplx a = profile_inner(phi, pj, psi, pk, 2.0);
        const cplx b = inner_product(profile_operator(phi, pj, 2.0), profile_operator(psi, pk, 2.0));
        CHECK(std::abs(a - b) < 1e-9);
    }

    TEST_CASE("weak overlap") {
        const SpectralGrid g(2048, 40.0);
        const auto dict = hermite_dictionary(g, 6);
        for (const ProfileParams& p : {ProfileParams{}, ProfileParams{2.0, 1.0, 0.5, 0.3}, ProfileParams{0.25, -3.0, 4.0, -1.0}})
            CHECK(std::abs(weak_overlap(p, p, 3.0, dict) - 1.0) < 1e-12);
        std::vector<double> ov;
        for (int n = 0; n <= 8; ++n) ov.push_back(weak_overlap({std::ldexp(1.0, n), 0, 0, 0}, {}, 2.0, dict));
        CHECK(ov[8] <= 0.2 * ov[2]);
        for (int n = 3; n <= 8; ++n) CHECK(ov[n] <= ov[n - 1]);
        double prev = 1.0;
        for (int n = 0; n <= 6; ++n) {
            const double v = weak_overlap({1.0, std::ldexp(1.0, n), 0, 0}, {}, 2.0, dict);
            CHECK(v <= prev + 1e-12);
            prev = v;
        }
        CHECK(prev < 1e-10);
    }

    TEST_CASE("cross norm: identical profiles saturate Cauchy-Schwarz") {
        const SpectralGrid g(2048, 40.0);
        const WaveFunction phi = gaussian_packet(g, 0.0, 0.0, 1.0);
        for (double alpha : {2.0, 3.0}) {
            WindowConfig cfg;
            cfg.tol = 1e-6;
            const double l6 = weighted_norm(phi, alpha, (alpha - 2.0) / 6.0, 6.0, 6.0, cfg).norm;
            CHECK(std::abs(cross_strichartz_norm(phi, phi, {}, {}, alpha) / (l6 * l6) - 1.0) < 1e-3);
        }
        CHECK_THROWS_AS(cross_strichartz_norm(WaveFunction(g), phi, {}, {}, 2.0), Error);
    }

    TEST_CASE("cross norm is symmetric") {
        const SpectralGrid g(2048, 40.0);
        const WaveFunction a = gaussian_packet(g, 0.0, 0.0, 1.0), b = hermite_function(g, 2);
        const ProfileParams pa{1.0, 1.0, 0.5, 0.3}, pb{1.0, -1.0, 0.0, -0.2};
        for (double alpha : {2.0, 3.0}) {
            const double x = cross_strichartz_norm(a, b, pa, pb, alpha, 1e-3), y = cross_strichartz_norm(b, a, pb, pa, alpha, 1e-3);
            CHECK(std::abs(x - y) <= 1e-12 * x);
        }
    }

    TEST_CASE("cross norm against the closed-form Gaussian oracles") {
        const SpectralGrid g(2048, 40.0);
        const WaveFunction phi = gaussian_packet(g, 0.0, 0.0, 1.0);
        for (int n : {0, 2, 4, 8}) {
            const double d = std::ldexp(1.0, n);
            const double v = cross_strichartz_norm(phi, phi, {1.0, 0.5 * d, 0.0, 0.0}, {1.0, -0.5 * d, 0.0, 0.0}, 2.0, 1e-7);
            INFO("d = ", d);
            CHECK(std::abs(v / space_separation_oracle(d) - 1.0) < 1e-5);
        }
        for (int n : {0, 2, 4}) {
            const double d = std::ldexp(1.0, n);
            const double v = cross_strichartz_norm(phi, phi, {1.0, 0.0, 0.0, 0.5 * d}, {1.0, 0.0, 0.0, -0.5 * d}, 2.0, 1e-7);
            CHECK(std::abs(v / time_separation_oracle(d) - 1.0) < 1e-5);
        }
        // Decay in the separation is only d^{-1/3}: eight doublings leave about 15%.
        CHECK(space_separation_oracle(256.0) / space_separation_oracle(1.0) == doctest::Approx(0.149).epsilon(0.01));
    }

    TEST_CASE("van der Corput decay") {
        const SpectralGrid g(4096, 200.0);
        const WaveFunction phi = bump_profile(g, 1.0, 2.0);
        ParamSequence pj, pk;
        for (int n = 5; n <= 15; ++n) {
            pj.push_back({1.0, 0.0, 0.0, std::ldexp(1.0, n)});
            pk.push_back({});
        }
        const VdcFit f = vdc_decay_fit(phi, pj, pk, 2.0);
        CHECK(f.m0 == 2);
        CHECK(std::abs(f.slope + 0.5) <= 0.1);

        ParamSequence qj, qk;
        for (int n = 8; n <= 18; ++n) {
            qj.push_back({1.0, 0.0, -1.5, std::ldexp(1.0, n)});
            qk.push_back({1.0, 0.0, -1.5, 0.0});
        }
        VdcOptions opt;
        opt.integer_phase = true;
        const VdcFit c = vdc_decay_fit(phi, qj, qk, 3.0, opt);
        CHECK(c.m0 == 3);
        CHECK(std::abs(c.slope + 1.0 / 3.0) <= 0.15);

        const ParamSequence same(5, ProfileParams{1.0, 0.0, 0.0, 1.0}), ref(5, ProfileParams{});
        CHECK_THROWS_WITH_AS(vdc_decay_fit(phi, same, ref, 2.0), doctest::Contains("degenerate-sequence"), Error);
    }

    TEST_CASE("translation branch at alpha = 4") {
        const SpectralGrid g(4096, 200.0);
        const WaveFunction phi = bump_profile(g, 1.0, 2.0);
        const auto dict = hermite_dictionary(g, 6);
        ParamSequence pj, pk;
        for (int n = 0; n <= 8; ++n) {
            pj.push_back({1.0, std::ldexp(1.0, n), 0.0, 0.0});
            pk.push_back({});
        }
        const VdcFit f = vdc_decay_fit(phi, pj, pk, 4.0);
        CHECK(f.m0 == 1);
        CHECK(f.sup_norm.back() >= 0.9 * f.sup_norm.front());
        CHECK(weak_overlap(pj.back(), pk.back(), 4.0, dict) <= 0.1 * weak_overlap(pj.front(), pk.front(), 4.0, dict));
    }

    TEST_CASE("extraction: one planted bubble") {
        const SpectralGrid g(4096, 80.0);
        const WaveFunction t0 = hermite_function(g, 0);
        const ProfileParams p{0.5, 3.0, 6.0, 0.0};
        const Extraction e = greedy_bubble_extraction(profile_operator(t0, p, 2.0), 2.0, {t0});
        REQUIRE(e.bubbles.size() == 1);
        const ProfileParams& q = e.bubbles[0].params;
        CHECK(q.h == doctest::Approx(p.h).epsilon(0.05));
        CHECK(std::abs(q.x0 - p.x0) <= g.spacing());
        CHECK(std::abs(q.xi0 - p.xi0) <= g.freq_spacing());
        CHECK(e.residual_mass < 1e-3);
        CHECK(std::abs(e.ledger_gap) <= 1e-6 + std::abs(e.cross_terms));
    }

    TEST_CASE("extraction: two planted bubbles") {
        const SpectralGrid g(4096, 80.0);
        const WaveFunction t0 = hermite_function(g, 0);
        const ProfileParams a{1.0 / 16.0, 0.0, 30.0, 0.0}, b{4.0, 0.0, -2.0, 0.0};
        WaveFunction u = profile_operator(t0, a, 2.0), ub = profile_operator(t0, b, 2.0);
        for (std::size_t j = 0; j < g.size(); ++j) u.values[j] = std::sqrt(0.6) * u.values[j] + std::sqrt(0.4) * ub.values[j];
        const Extraction e = greedy_bubble_extraction(u, 2.0, {t0});
        REQUIRE(e.bubbles.size() >= 2);
        std::vector<double> masses = {e.bubbles[0].mass, e.bubbles[1].mass};
        std::sort(masses.begin(), masses.end());
        CHECK(masses[1] == doctest::Approx(0.6 * e.total_mass).epsilon(0.05));
        CHECK(masses[0] == doctest::Approx(0.4 * e.total_mass).epsilon(0.05));
        CHECK(e.residual_mass < 5e-2 * e.total_mass);
        CHECK(std::abs(e.ledger_gap) <= 1e-6 + std::abs(e.cross_terms));
    }

    TEST_CASE("extraction: noise yields only small bubbles" * doctest::timeout(300)) {
        const SpectralGrid g(4096, 80.0);
        const WaveFunction t0 = hermite_function(g, 0);
        double worst = 0.0;
        for (unsigned seed = 1; seed <= 20; ++seed) {
            const WaveFunction u = windowed_noise(g, 32.0, seed);
            const Extraction e = greedy_bubble_extraction(u, 2.0, {t0});
            for (const auto& b : e.bubbles) worst = std::max(worst, b.mass);
            CHECK(std::abs(e.ledger_gap) <= 1e-6 + std::abs(e.cross_terms));
            if (seed == 1) {
                const double nu = strichartz_ratio(u, 2.0, 6.0, 6.0) * l2_norm(u);
                const double nr = strichartz_ratio(e.residual, 2.0, 6.0, 6.0) * l2_norm(e.residual);
                CHECK(nr >= 0.5 * nu);
                CHECK(nr <= 1.5 * nu);
            }
        }
        CHECK(worst < 0.15);
    }
}
