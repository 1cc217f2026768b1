#include "strichartz/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "flow_sampler.hpp"
#include "strichartz/error.hpp"
#include "strichartz/parallel.hpp"

namespace strichartz {

WaveFunction modulate(const WaveFunction& phi, double xi) {
    WaveFunction v = phi;
    for (std::size_t j = 0; j < v.values.size(); ++j) v.values[j] *= std::polar(1.0, xi * phi.grid.x(j));
    require_resolved(v, "modulated profile");
    return v;
}

double schrodinger_limit_target(const WaveFunction& phi, double alpha, double q, double r, const WindowConfig& cfg) {
    check_alpha(alpha);
    const double schrod = weighted_norm(phi, 2.0, 0.0, q, r, cfg).ratio;
    return std::pow(0.5 * (alpha * alpha - alpha), -1.0 / q) * schrod;
}

std::vector<LimitPoint> schrodinger_limit_curve(const WaveFunction& phi, double alpha, double q, double r,
                                                const std::vector<double>& xi_list, const WindowConfig& cfg) {
    check_alpha(alpha);
    check_ratio_pair(q, r);
    const double target = schrodinger_limit_target(phi, alpha, q, r, cfg);
    std::vector<LimitPoint> out(xi_list.size());
    for (std::size_t i = 0; i < xi_list.size(); ++i) {
        LimitPoint& p = out[i];
        p.xi = xi_list[i];
        p.report = strichartz_ratio_report(modulate(phi, p.xi), alpha, q, r, cfg);
        p.value = p.report.ratio;
        p.target = target;
        p.rel_error = std::abs(p.value - target) / target;
    }
    return out;
}

std::vector<LimitPoint> vanishing_modulation_curve(const WaveFunction& phi, double alpha,
                                                   const std::vector<double>& xi_list, const WindowConfig& cfg) {
    if (!(alpha >= 2.0)) fail(errc::invalid_alpha, "vanishing-modulation curve needs alpha >= 2");
    const double p = 2.0 * alpha + 2.0;
    std::vector<LimitPoint> out(xi_list.size());
    for (std::size_t i = 0; i < xi_list.size(); ++i) {
        out[i].xi = xi_list[i];
        out[i].report = weighted_norm(modulate(phi, xi_list[i]), alpha, 0.0, p, p, cfg);
        out[i].value = out[i].report.norm;
    }
    return out;
}

bool eventually_decreasing(const std::vector<double>& v) {
    if (v.size() < 3) return false;
    std::size_t from = v.size() - 1;
    while (from > 0 && v[from] <= v[from - 1]) --from;
    return v.size() - 1 - from >= 2;
}

double dominating_function(double t, double x, double q, const DominatingScale& scale) {
    if (!(q > 3.0)) fail(errc::invalid_exponent, "dominating function needs q > 3");
    const double at = 1.0 + std::abs(t), ax = 1.0 + std::abs(x);
    const double et = 3.0 / q, ex = (q - 3.0) / q;
    if (std::abs(x) <= scale.c * std::abs(t)) return scale.C * std::pow(at, -0.5 * et) * std::pow(ax, -0.5 * ex);
    return scale.C * std::pow(at, -et) * std::pow(ax, -ex);
}

namespace {

// Trigonometric-interpolant samples of a periodic slice at y_j = a + b j,
// with a reduced into the window and at most one wrap along the run.
cvec sample_periodic(const WaveFunction& v, double a, double b, std::size_t count) {
    const double L = v.grid.extent();
    const double lo = v.grid.x(0);
    double start = std::fmod(a - lo, L);
    if (start < 0.0) start += L;
    start += lo;
    cvec out(count);
    const double end = lo + L;
    std::size_t first = count;
    for (std::size_t j = 0; j < count; ++j)
        if (start + b * static_cast<double>(j) >= end) {
            first = j;
            break;
        }
    if (first > 0) {
        const cvec part = sample_affine(v, start, b, first);
        std::copy(part.begin(), part.end(), out.begin());
    }
    if (first < count) {
        const cvec part = sample_affine(v, start + b * static_cast<double>(first) - L, b, count - first);
        std::copy(part.begin(), part.end(), out.begin() + static_cast<std::ptrdiff_t>(first));
    }
    return out;
}

}  // namespace

std::vector<std::vector<double>> schrodinger_frame_modulus(const WaveFunction& phi, double alpha, double q, double xi,
                                                           const std::vector<double>& s_list,
                                                           const std::vector<double>& y_list) {
    check_alpha(alpha);
    if (!(xi > 0.0)) fail(errc::invalid_input, "the Schrodinger frame needs a positive modulation");
    if (y_list.size() < 2) fail(errc::invalid_input, "y lattice needs two or more points");
    const double dy = y_list[1] - y_list[0];
    const double sw = (alpha - 2.0) / q;
    const double kappa = 0.5 * alpha * (alpha - 1.0) * std::pow(xi, alpha - 2.0);
    const double vel = alpha * std::pow(xi, alpha - 1.0);
    const double norm = std::pow(xi, -sw);
    detail::FlowSampler fs(modulate(phi, xi), alpha, sw, 2.0, 1e-8, std::size_t(1) << 22);
    std::vector<std::vector<double>> out(s_list.size(), std::vector<double>(y_list.size()));
    for (std::size_t i = 0; i < s_list.size(); ++i) {
        const double t = s_list[i] / kappa;
        const WaveFunction v = fs.slice(t);
        const cvec vals = sample_periodic(v, y_list[0] + vel * t, dy, y_list.size());
        for (std::size_t j = 0; j < y_list.size(); ++j) out[i][j] = norm * std::abs(vals[j]);
    }
    return out;
}

DominationSweep domination_sweep(const WaveFunction& phi, double alpha, double q, const std::vector<double>& xi_list,
                                 double s_max, double y_max, std::size_t lattice, double margin,
                                 double regime_slope) {
    if (xi_list.empty()) fail(errc::invalid_input, "empty modulation list");
    if (lattice < 2) fail(errc::invalid_input, "lattice needs two or more points per axis");
    std::vector<double> s(lattice), y(lattice);
    for (std::size_t i = 0; i < lattice; ++i) {
        const double f = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(lattice - 1);
        s[i] = f * s_max;
        y[i] = f * y_max;
    }
    const DominatingScale unit{1.0, regime_slope};
    auto worst = [&](double xi) {
        const auto m = schrodinger_frame_modulus(phi, alpha, q, xi, s, y);
        double w = 0.0;
        for (std::size_t i = 0; i < s.size(); ++i)
            for (std::size_t j = 0; j < y.size(); ++j) w = std::max(w, m[i][j] / dominating_function(s[i], y[j], q, unit));
        return w;
    };
    DominationSweep out;
    out.xi = xi_list;
    out.max_ratio.resize(xi_list.size());
    std::vector<double> raw(xi_list.size());
    parallel_for(xi_list.size(), [&](std::size_t i) { raw[i] = worst(xi_list[i]); });
    out.scale = DominatingScale{margin * raw[0], regime_slope};
    out.dominated = true;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        out.max_ratio[i] = raw[i] / out.scale.C;
        if (out.max_ratio[i] > 1.0) out.dominated = false;
    }
    return out;
}

WaveFunction concentrating_sequence(const SpectralGrid& g, int n, double x0) {
    if (n < 1) fail(errc::invalid_input, "concentrating sequence index must be positive");
    const double dn = static_cast<double>(n);
    WaveFunction u = sample_function(g, [&](double x) {
        const double z = dn * (x - x0);
        return std::sqrt(dn) * std::polar(std::exp(-z * z), dn * dn * x);
    });
    std::ostringstream ctx;
    ctx << "concentrating sequence n = " << n;
    const std::string c = ctx.str();
    require_resolved(u, c.c_str());
    return normalized(u);
}

double mass_outside(const WaveFunction& u, double x0, double rho) {
    double out = 0.0, total = 0.0;
    for (std::size_t j = 0; j < u.values.size(); ++j) {
        const double m = std::norm(u.values[j]);
        total += m;
        if (std::abs(u.grid.x(j) - x0) >= rho) out += m;
    }
    return total > 0.0 ? out / total : 0.0;
}

double concentrating_mass_outside(int n, double rho) { return std::erfc(std::sqrt(2.0) * n * rho); }

}  // namespace strichartz
