#include "strichartz/extremizer.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <boost/math/tools/roots.hpp>

#include "strichartz/error.hpp"
#include "strichartz/parallel.hpp"

namespace strichartz {

WaveFunction adjoint_extension(const SpaceTimeField& F, double alpha, double s) {
    check_alpha(alpha);
    const std::size_t n = F.grid.size();
    if (F.values.size() != n * F.slices() || n == 0)
        fail(errc::grid_mismatch, "field storage does not match its time axis and grid");
    if (F.alpha != alpha || F.s != s) {
        std::ostringstream os;
        os << "field was built for (alpha, s) = (" << F.alpha << ", " << F.s << "), adjoint asked for (" << alpha
           << ", " << s << ")";
        fail(errc::grid_mismatch, os.str());
    }
    const std::size_t m = F.slices();
    std::vector<cvec> spec(m);
    parallel_for(m, [&](std::size_t k) {
        WaveFunction slice(F.grid, cvec(F.slice(k), F.slice(k) + n));
        spec[k] = forward_fourier(slice).values;
    });
    Spectrum acc(F.grid);
    const double dt = F.time.step();
    parallel_for(n, [&](std::size_t j) {
        const double xi = F.grid.xi(j);
        const double lam = std::pow(std::abs(xi), alpha);
        const double w = weight(xi, s) * dt;
        if (w == 0.0) return;
        cplx sum = 0.0;
        for (std::size_t k = 0; k < m; ++k) sum += std::polar(1.0, F.time[k] * lam) * spec[k][j];
        acc.values[j] = w * sum;
    });
    return inverse_fourier(acc);
}

namespace {

// Spread-1 Gaussian e^{-x^2/4}: the reference datum for the automatic window.
double reference_velocity_spread(double alpha) {
    const SpectralGrid g(8192, 160.0);
    return dispersion_of(gaussian_packet(g, 0.0, 0.0, 2.0), alpha).sigma_v;
}

double power_of(const cvec& v, double dx, double r) {
    double acc = 0.0;
    for (const auto& z : v) acc += std::pow(std::abs(z), r);
    return acc * dx;
}

WaveFunction rescale_spread(const WaveFunction& u, double h) {
    // sqrt(h) u(h x) has |.|^2 spread divided by h.
    WaveFunction v(u.grid, sample_affine(u, h * u.grid.x(0), h * u.grid.spacing(), u.grid.size()));
    const double c = std::sqrt(h);
    for (auto& z : v.values) z *= c;
    return v;
}

// Interquartile width of |u|^2 in units of the Gaussian's (1.349 sigma).
// Unlike the spread it ignores low-amplitude tails.
double quartile_width(const WaveFunction& u) {
    const std::size_t n = u.grid.size();
    std::vector<double> cum(n + 1, 0.0);
    for (std::size_t j = 0; j < n; ++j) cum[j + 1] = cum[j] + std::norm(u.values[j]);
    const double total = cum[n];
    auto quantile = [&](double p) {
        const double target = p * total;
        const std::size_t j = static_cast<std::size_t>(std::lower_bound(cum.begin(), cum.end(), target) - cum.begin());
        if (j == 0) return u.grid.x(0);
        const double w = cum[j] - cum[j - 1];
        const double frac = w > 0.0 ? (target - cum[j - 1]) / w : 0.0;
        return u.grid.x(j - 1) + frac * u.grid.spacing();
    };
    return (quantile(0.75) - quantile(0.25)) / 1.3489795003921634;
}

WaveFunction fix_phase(const WaveFunction& u) {
    const Spectrum f = forward_fourier(u);
    std::size_t at = 0;
    for (std::size_t k = 1; k < f.values.size(); ++k)
        if (std::abs(f.values[k]) > std::abs(f.values[at])) at = k;
    const cplx p = f.values[at];
    if (std::abs(p) == 0.0) return u;
    const cplx rot = std::conj(p) / std::abs(p);
    WaveFunction v = u;
    for (auto& z : v.values) z *= rot;
    return v;
}

WaveFunction remove_mean_frequency(const WaveFunction& u) {
    const double k = mean_frequency(forward_fourier(u));
    WaveFunction v = u;
    for (std::size_t j = 0; j < v.values.size(); ++j) v.values[j] *= std::polar(1.0, -k * u.grid.x(j));
    return v;
}

WaveFunction shift_time(const WaveFunction& u, double t, double alpha) {
    return t == 0.0 ? u : fractional_flow(u, t, alpha);
}

WaveFunction scaled(const WaveFunction& u, double c) {
    WaveFunction v = u;
    for (auto& z : v.values) z *= c;
    return v;
}

}  // namespace

double peak_time(const WaveFunction& u, double alpha, double s, double r, double halfwidth) {
    check_alpha(alpha);
    if (r == 2.0 || !std::isfinite(r)) return 0.0;
    const Spectrum f = forward_fourier(u);
    const std::size_t n = u.grid.size();
    std::vector<double> lam(n), w(n);
    for (std::size_t k = 0; k < n; ++k) {
        lam[k] = std::pow(std::abs(f.grid.xi(k)), alpha);
        w[k] = weight(f.grid.xi(k), s);
    }
    const double dx = u.grid.spacing();
    auto slice = [&](double t, bool derivative) {
        Spectrum g(u.grid);
        for (std::size_t k = 0; k < n; ++k) {
            g.values[k] = f.values[k] * w[k] * std::polar(1.0, -t * lam[k]);
            if (derivative) g.values[k] *= cplx(0.0, -lam[k]);
        }
        return inverse_fourier(g).values;
    };
    auto power = [&](double t) { return power_of(slice(t, false), dx, r); };
    auto slope = [&](double t) {
        const cvec v = slice(t, false);
        const cvec dv = slice(t, true);
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double a = std::abs(v[j]);
            if (a > 0.0) acc += r * std::pow(a, r - 2.0) * std::real(std::conj(v[j]) * dv[j]);
        }
        return acc * dx;
    };

    const std::size_t half = 32;
    const double h = halfwidth / static_cast<double>(half);
    std::vector<double> p(2 * half + 1);
    parallel_for(p.size(), [&](std::size_t i) { p[i] = power((static_cast<double>(i) - half) * h); });
    const std::size_t i = static_cast<std::size_t>(std::max_element(p.begin(), p.end()) - p.begin());
    const double ti = (static_cast<double>(i) - half) * h;
    if (i == 0 || i + 1 == p.size()) return ti;
    double lo = ti - h, hi = ti + h;
    double flo = slope(lo), fhi = slope(hi);
    if (!(flo > 0.0 && fhi < 0.0)) return ti;
    // Narrow to the side of ti that holds the sign change.
    const double fmid = slope(ti);
    if (fmid == 0.0) return ti;
    if (fmid > 0.0) {
        lo = ti;
        flo = fmid;
    } else {
        hi = ti;
        fhi = fmid;
    }
    std::uintmax_t iters = 100;
    const auto root = boost::math::tools::toms748_solve(
        slope, lo, hi, flo, fhi, boost::math::tools::eps_tolerance<double>(52), iters);
    return 0.5 * (root.first + root.second);
}

WaveFunction symmetry_normalize(const WaveFunction& u, double alpha, double q, double r) {
    check_alpha(alpha);
    const double nu = l2_norm(u);
    if (!(nu > 0.0)) fail(errc::zero_datum, "cannot normalize the zero function");
    WaveFunction v = scaled(u, 1.0 / nu);
    const double s = std::isfinite(q) ? (alpha - 2.0) / q : 0.0;
    const double tau = dispersion_of(v, alpha).tau;
    v = shift_time(v, peak_time(v, alpha, s, r, 8.0 * tau), alpha);
    if (alpha == 2.0) v = remove_mean_frequency(v);
    v = translate(v, -centroid(v));
    v = rescale_spread(v, spread(v));
    v = fix_phase(v);
    return scaled(v, 1.0 / l2_norm(v));
}

WaveFunction random_bandlimited(const SpectralGrid& g, double band, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    Spectrum f(g);
    for (std::size_t k = 0; k < g.size(); ++k) {
        const double a = normal(rng), b = normal(rng);
        if (std::abs(g.xi(k)) <= band) f.values[k] = cplx(a, b);
    }
    WaveFunction u = inverse_fourier(f);
    const double width = g.extent() / 16.0;
    for (std::size_t j = 0; j < g.size(); ++j) {
        const double x = g.x(j) / width;
        u.values[j] *= std::exp(-0.5 * x * x);
    }
    return normalized(u);
}

SearchSetup resolve_setup(double alpha, double q, double r, const ExtremizerConfig& cfg) {
    check_alpha(alpha);
    SearchSetup st;
    if (cfg.mode == SearchMode::nonendpoint) {
        if (!(alpha >= 2.0)) fail(errc::invalid_alpha, "non-endpoint mode needs alpha >= 2");
        st.q = st.r = 2.0 * alpha + 2.0;
        st.s = 0.0;
    } else {
        check_ratio_pair(q, r);
        st.q = q;
        st.r = r;
        st.s = (alpha - 2.0) / q;
    }
    if (!is_pow2(cfg.grid_points) || cfg.grid_points < 64)
        fail(errc::invalid_input, "grid_points must be a power of two >= 64");
    if (cfg.time_slices < 8) fail(errc::invalid_input, "time_slices must be at least 8");
    const double T = cfg.halfwidth > 0.0 ? cfg.halfwidth : 32.0 / reference_velocity_spread(alpha);
    const std::size_t half = cfg.time_slices / 2;
    st.time = TimeAxis(0.0, half, T / static_cast<double>(half));
    st.band = cfg.band > 0.0 ? cfg.band
                             : std::clamp(std::pow(static_cast<double>(cfg.time_slices) / (2.0 * T), 1.0 / alpha),
                                          2.0, 8.0);
    // Automatic window: band-edge components must not wrap around within the
    // time window, and the Nyquist frequency should stay near 4x the band.
    const double travel = 2.0 * alpha * std::pow(st.band, alpha - 1.0) * T + 32.0;
    const double L = cfg.extent > 0.0
                         ? cfg.extent
                         : std::max(static_cast<double>(cfg.grid_points) * kPi / (4.0 * st.band), travel);
    st.grid = SpectralGrid(cfg.grid_points, L);
    if (st.band >= 0.75 * st.grid.nyquist()) {
        std::ostringstream os;
        os << "band " << st.band << " is not below 3/4 of the Nyquist frequency " << st.grid.nyquist();
        fail(errc::grid_underresolved, os.str());
    }
    return st;
}

namespace {

struct Frame {
    double t_peak = 0.0;
    double value = 0.0;  // fixed-window norm
};

// One fixed-window evaluation; leaves the Euler-Lagrange density in E.
Frame evaluate(const WaveFunction& u, double alpha, const SearchSetup& st, SpaceTimeField& E) {
    E = evolve_window(u, alpha, st.s, st.time);
    const std::size_t n = st.grid.size();
    const std::size_t m = E.slices();
    std::vector<double> inner(m);
    const double dx = st.grid.spacing();
    parallel_for(m, [&](std::size_t k) { inner[k] = power_of(cvec(E.slice(k), E.slice(k) + n), dx, st.r); });
    double acc = 0.0;
    for (double v : inner) acc += std::pow(v, st.q / st.r);
    Frame fr;
    fr.value = std::pow(acc * st.time.step(), 1.0 / st.q);

    const std::size_t i = static_cast<std::size_t>(std::max_element(inner.begin(), inner.end()) - inner.begin());
    fr.t_peak = st.time[i];
    if (i > 0 && i + 1 < m && inner[i - 1] > 0.0 && inner[i + 1] > 0.0) {
        const double a = std::log(inner[i - 1]), b = std::log(inner[i]), c = std::log(inner[i + 1]);
        const double den = a - 2.0 * b + c;
        if (den < 0.0) fr.t_peak += 0.5 * (a - c) / den * st.time.step();
    }

    parallel_for(m, [&](std::size_t k) {
        const double W = std::pow(inner[k], st.q / st.r - 1.0);
        cplx* s = E.slice(k);
        for (std::size_t j = 0; j < n; ++j) {
            const double a = std::abs(s[j]);
            s[j] *= W * std::pow(a, st.r - 2.0);
        }
    });
    return fr;
}

WaveFunction band_filter(const WaveFunction& u, double band) {
    return apply_multiplier(u, [band](double xi) {
        const double z = xi / band;
        const double z2 = z * z;
        return cplx(std::exp(-z2 * z2 * z2 * z2), 0.0);
    });
}

}  // namespace

ExtremizerResult extremize(double alpha, double q, double r, const ExtremizerConfig& cfg) {
    const SearchSetup st = resolve_setup(alpha, q, r, cfg);
    if (!(cfg.relaxation > 0.0 && cfg.relaxation <= 1.0))
        fail(errc::invalid_input, "relaxation must lie in (0, 1]");

    WaveFunction u;
    if (cfg.initial) {
        if (!(cfg.initial->grid == st.grid)) u = resample(*cfg.initial, st.grid);
        else u = *cfg.initial;
        if (!(l2_norm(u) > 0.0)) fail(errc::zero_datum, "initial datum is zero");
        u = normalized(u);
    } else {
        u = random_bandlimited(st.grid, st.grid.nyquist() / 4.0, cfg.seed);
    }

    ExtremizerResult res;
    res.setup = st;
    SpaceTimeField E;
    int calm = 0, dips = 0;
    for (int it = 0; it < cfg.max_iterations; ++it) {
        const Frame fr = evaluate(u, alpha, st, E);
        const double R = fr.value;
        if (!res.ratio_history.empty()) {
            const double prev = res.ratio_history.back();
            if (R < prev * (1.0 - cfg.dip_tol) && ++dips > cfg.max_dips) {
                std::ostringstream os;
                os << "ratio dipped " << dips << " times (last " << prev << " -> " << R << ")";
                fail(errc::stalled, os.str());
            }
            calm = std::abs(R - prev) < cfg.ratio_tol * R ? calm + 1 : 0;
        }
        res.ratio_history.push_back(R);
        res.iterations = it;
        if (calm >= cfg.patience && res.residual < 10.0 * cfg.ratio_tol) {
            res.converged = true;
            break;
        }

        WaveFunction step = adjoint_extension(E, alpha, st.s);
        const double ns = l2_norm(step);
        if (!(ns > 0.0)) fail(errc::zero_datum, "adjoint step vanished");
        step = scaled(step, 1.0 / ns);
        step = shift_time(step, fr.t_peak, alpha);
        if (alpha == 2.0) step = remove_mean_frequency(step);
        step = translate(step, -centroid(step));
        // Early iterates can be far from unit width; limit each rescale.
        step = rescale_spread(step, std::clamp(quartile_width(step), 0.5, 2.0));
        step = fix_phase(step);
        step = normalized(band_filter(step, st.band));
        if (cfg.relaxation < 1.0) {
            for (std::size_t j = 0; j < step.values.size(); ++j)
                step.values[j] = (1.0 - cfg.relaxation) * u.values[j] + cfg.relaxation * step.values[j];
            step = normalized(step);
        }
        res.residual = l2_distance(step, u);
        u = std::move(step);
        if (edge_amplitude(u) > 1e-3) {
            std::ostringstream os;
            os << "iterate reached the window edge at iteration " << it << " (edge amplitude " << edge_amplitude(u)
               << ")";
            fail(errc::grid_underresolved, os.str());
        }
    }
    res.profile = symmetry_normalize(u, alpha, st.q, st.r);
    res.final_report = weighted_norm(res.profile, alpha, st.s, st.q, st.r, cfg.window);
    res.final_ratio = res.final_report.ratio;
    return res;
}

}  // namespace strichartz
