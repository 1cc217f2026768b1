#include "strichartz/spacetime_norms.hpp"

#include <cmath>
#include <map>
#include <sstream>

#include "flow_sampler.hpp"
#include "strichartz/error.hpp"

namespace strichartz {

Dispersion dispersion_of(const WaveFunction& u, double alpha, double amplitude_floor) {
    check_alpha(alpha);
    Dispersion d;
    const Spectrum f = forward_fourier(u);
    d.support = spatial_extent(u, amplitude_floor);
    d.sigma_x = spread(u);

    double mx = 0.0;
    for (const auto& v : f.values) mx = std::max(mx, std::abs(v));
    double m = 0.0, s1 = 0.0, s2 = 0.0;
    d.v_min = kInf;
    d.v_max = -kInf;
    for (std::size_t k = 0; k < f.grid.size(); ++k) {
        const double xi = f.grid.xi(k);
        const double v = alpha * std::pow(std::abs(xi), alpha - 1.0) * (xi < 0 ? -1.0 : 1.0);
        const double w = std::norm(f.values[k]);
        m += w;
        s1 += w * v;
        s2 += w * v * v;
        if (std::abs(f.values[k]) >= amplitude_floor * mx) {
            d.v_min = std::min(d.v_min, v);
            d.v_max = std::max(d.v_max, v);
        }
    }
    if (m == 0.0) fail(errc::zero_datum, "dispersion of the zero function");
    const double mean = s1 / m;
    d.sigma_v = std::sqrt(std::max(0.0, s2 / m - mean * mean));
    const double dx = u.grid.spacing();
    const double sx = std::max(d.sigma_x, dx);
    d.tau = d.sigma_v > 0.0 ? sx / d.sigma_v : sx;
    return d;
}

double dispersive_time_scale(const WaveFunction& u, double alpha) { return dispersion_of(u, alpha).tau; }

void check_exponents(double q, double r) {
    if (!(q > 0.0) || !(r > 0.0) || std::isnan(q) || std::isnan(r)) {
        std::ostringstream os;
        os << "exponents (q, r) = (" << q << ", " << r << ") must be positive";
        fail(errc::invalid_exponent, os.str());
    }
}

void check_ratio_pair(double q, double r) {
    check_exponents(q, r);
    if ((std::isinf(q) && r == 2.0) || (q == 4.0 && std::isinf(r)))
        fail(errc::endpoint_pair, "endpoint pairs (inf, 2) and (4, inf) are excluded");
    const double lhs = 2.0 / q + 1.0 / r;
    if (std::abs(lhs - 0.5) > 1e-12) {
        std::ostringstream os;
        os << "(q, r) = (" << q << ", " << r << ") has 2/q + 1/r = " << lhs << ", not 1/2";
        fail(errc::inadmissible_pair, os.str());
    }
}

double mixed_norm(const SpaceTimeField& F, double q, double r) {
    check_exponents(q, r);
    const std::size_t n = F.grid.size();
    const double dx = F.grid.spacing();
    const double dt = F.time.step();
    double acc = 0.0;
    for (std::size_t k = 0; k < F.slices(); ++k) {
        const cplx* s = F.slice(k);
        double inner;
        if (std::isinf(r)) {
            inner = 0.0;
            for (std::size_t j = 0; j < n; ++j) inner = std::max(inner, std::abs(s[j]));
        } else {
            inner = 0.0;
            for (std::size_t j = 0; j < n; ++j) inner += std::pow(std::abs(s[j]), r);
            inner *= dx;
        }
        if (std::isinf(q)) {
            const double v = std::isinf(r) ? inner : std::pow(inner, 1.0 / r);
            acc = std::max(acc, v);
        } else {
            acc += (std::isinf(r) ? std::pow(inner, q) : std::pow(inner, q / r)) * dt;
        }
    }
    return std::isinf(q) ? acc : std::pow(acc, 1.0 / q);
}

double lp_norm(const SpaceTimeField& F, double p) { return mixed_norm(F, p, p); }

namespace {

// Tail of int_T^inf f for f ~ C t^{-beta}, with beta fitted from f(T/2), f(T).
double tail_estimate(double f_half, double f_end, double T) {
    if (!(f_end > 0.0) || !(f_half > f_end)) return 0.0;
    const double beta = std::log2(f_half / f_end);
    if (beta < 1.2) return 0.0;
    const double b = std::min(beta, 8.0);
    return f_end * T / (b - 1.0);
}

// Nodes on one side of t = 0: uniform with step dt up to 2*T0, then each
// further doubling of the window reuses the same number of steps, so the
// step doubles with every octave.
struct HalfAxis {
    std::vector<double> t;  // ascending |t|, excluding 0
    std::vector<double> f;

    static std::vector<double> octave(long K0, double dt, int m) {
        std::vector<double> out;
        if (m == 0) {
            for (long i = 1; i <= K0; ++i) out.push_back(static_cast<double>(i) * dt);
            return out;
        }
        const double start = static_cast<double>(K0) * dt * std::ldexp(1.0, m - 1);
        const double h = dt * std::ldexp(1.0, m - 1);
        for (long i = 1; i <= K0; ++i) out.push_back(start + static_cast<double>(i) * h);
        return out;
    }
};

double trapezoid(double f0, const HalfAxis& side) {
    double acc = 0.0;
    double tp = 0.0, fp = f0;
    for (std::size_t i = 0; i < side.t.size(); ++i) {
        acc += 0.5 * (side.t[i] - tp) * (side.f[i] + fp);
        tp = side.t[i];
        fp = side.f[i];
    }
    return acc;
}

double value_at(const HalfAxis& side, double t) {
    for (std::size_t i = 0; i < side.t.size(); ++i)
        if (std::abs(side.t[i] - t) <= 1e-9 * t) return side.f[i];
    return std::nan("");
}

}  // namespace

NormReport weighted_norm(const WaveFunction& u, double alpha, double s, double q, double r,
                         const WindowConfig& cfg) {
    check_alpha(alpha);
    check_exponents(q, r);
    const double nu = l2_norm(u);
    if (!(nu > 0.0)) fail(errc::zero_datum, "space-time norm of the zero datum");

    detail::FlowSampler fs(u, alpha, s, r, cfg.amplitude_floor, cfg.max_grid_points);
    const double tau = fs.dispersion().tau;
    const double dt = cfg.dt > 0.0 ? cfg.dt : tau / cfg.steps_per_tau;
    const double T0 = cfg.initial_halfwidth > 0.0 ? cfg.initial_halfwidth : cfg.halfwidth_factor * tau;
    long K0 = std::max<long>(2, static_cast<long>(std::ceil(T0 / dt)));
    if (K0 % 2) ++K0;

    auto f_of = [&](double gv) {
        if (std::isinf(r)) return std::isinf(q) ? gv : std::pow(gv, q);
        return std::isinf(q) ? std::pow(gv, 1.0 / r) : std::pow(gv, q / r);
    };

    HalfAxis pos, neg;
    const double f0 = f_of(fs.power(0.0));

    NormReport rep;
    rep.dt = dt;
    std::vector<double> vals;
    double prev_extrap = std::nan("");
    for (int d = 0; d <= cfg.max_doublings; ++d) {
        const std::vector<double> tn = HalfAxis::octave(K0, dt, d);
        const double T = tn.back();
        if (cfg.max_halfwidth > 0.0 && T > cfg.max_halfwidth * (1.0 + 1e-12)) {
            std::ostringstream os;
            os << "time window reached the halfwidth cap " << cfg.max_halfwidth << " without stabilizing";
            fail(errc::no_convergence, os.str());
        }
        std::vector<double> batch = tn;
        for (double t : tn) batch.push_back(-t);
        const std::vector<double> g = fs.powers(batch);
        for (std::size_t i = 0; i < tn.size(); ++i) {
            pos.t.push_back(tn[i]);
            pos.f.push_back(f_of(g[i]));
            neg.t.push_back(tn[i]);
            neg.f.push_back(f_of(g[i + tn.size()]));
        }
        double value;
        if (std::isinf(q)) {
            value = f0;
            for (double v : pos.f) value = std::max(value, v);
            for (double v : neg.f) value = std::max(value, v);
        } else {
            const double sum = trapezoid(f0, pos) + trapezoid(f0, neg);
            double tail = 0.0;
            if (cfg.tail_correction) {
                tail += tail_estimate(value_at(pos, 0.5 * T), pos.f.back(), T);
                tail += tail_estimate(value_at(neg, 0.5 * T), neg.f.back(), T);
            }
            const double total = sum + tail;
            rep.tail_fraction = total > 0.0 ? tail / total : 0.0;
            value = std::pow(total, 1.0 / q);
        }
        vals.push_back(value);
        rep.norm = value;
        rep.extrapolated = false;
        rep.halfwidth = T;
        rep.doublings = d;
        rep.max_grid_points = fs.points_for(T);
        const std::size_t m = vals.size();
        if (m >= 2 && std::abs(vals[m - 1] - vals[m - 2]) <= cfg.tol * std::abs(value)) break;
        // The window error of the tail-corrected value shrinks geometrically
        // under doubling; Aitken's delta-squared estimate of the limit is
        // accepted once two successive estimates agree.
        if (cfg.extrapolate && m >= 3) {
            const double d1 = vals[m - 2] - vals[m - 3];
            const double d2 = vals[m - 1] - vals[m - 2];
            const double rho = d1 != 0.0 ? d2 / d1 : 0.0;
            double est = std::nan("");
            if (rho > 0.0 && rho < 0.8) est = vals[m - 1] - d2 * d2 / (d2 - d1);
            if (std::isfinite(est) && std::isfinite(prev_extrap) &&
                std::abs(est - prev_extrap) <= cfg.tol * std::abs(est)) {
                rep.norm = est;
                rep.extrapolated = true;
                break;
            }
            prev_extrap = est;
        }
        if (d == cfg.max_doublings) {
            std::ostringstream os;
            os << "time window did not stabilize (last halfwidth " << T << ", value " << value / nu << ")";
            fail(errc::no_convergence, os.str());
        }
    }
    rep.ratio = rep.norm / nu;
    return rep;
}

NormReport strichartz_ratio_report(const WaveFunction& u, double alpha, double q, double r,
                                   const WindowConfig& cfg) {
    check_alpha(alpha);
    check_ratio_pair(q, r);
    return weighted_norm(u, alpha, (alpha - 2.0) / q, q, r, cfg);
}

double strichartz_ratio(const WaveFunction& u, double alpha, double q, double r, const WindowConfig& cfg) {
    return strichartz_ratio_report(u, alpha, q, r, cfg).ratio;
}

double nonendpoint_ratio(const WaveFunction& u, double alpha, const WindowConfig& cfg) {
    if (!(alpha >= 2.0)) fail(errc::invalid_alpha, "non-endpoint mode needs alpha >= 2");
    const double p = 2.0 * alpha + 2.0;
    return weighted_norm(u, alpha, 0.0, p, p, cfg).ratio;
}

}  // namespace strichartz
