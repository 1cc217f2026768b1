#include "strichartz/propagator.hpp"

#include <cmath>
#include <sstream>

#include "strichartz/error.hpp"
#include "strichartz/parallel.hpp"

namespace strichartz {

TimeAxis::TimeAxis(double center, std::size_t half_steps, double dt)
    : center_(center), half_(half_steps), dt_(dt) {
    if (!(dt > 0.0) || !std::isfinite(dt) || !std::isfinite(center))
        fail(errc::invalid_input, "time axis needs a finite center and positive step");
}

std::vector<double> TimeAxis::times() const {
    std::vector<double> t(size());
    for (std::size_t k = 0; k < t.size(); ++k) t[k] = (*this)[k];
    return t;
}

void check_alpha(double alpha) {
    if (!(alpha > 1.0) || !std::isfinite(alpha)) {
        std::ostringstream os;
        os << "alpha = " << alpha << " must exceed 1";
        fail(errc::invalid_alpha, os.str());
    }
}

double weight(double xi, double s) {
    if (s == 0.0) return 1.0;
    if (xi == 0.0) return 0.0;
    return std::pow(std::abs(xi), s);
}

cplx flow_symbol(double xi, double t, double alpha) {
    return std::polar(1.0, -t * std::pow(std::abs(xi), alpha));
}

WaveFunction fractional_flow(const WaveFunction& u, double t, double alpha) {
    check_alpha(alpha);
    if (t == 0.0) return u;
    return apply_multiplier(u, [t, alpha](double xi) { return flow_symbol(xi, t, alpha); });
}

WaveFunction fractional_derivative(const WaveFunction& u, double s) {
    if (!std::isfinite(s)) fail(errc::invalid_input, "derivative order must be finite");
    if (s == 0.0) return u;
    Spectrum f = forward_fourier(u);
    if (s < 0.0) {
        double mx = 0.0;
        for (const auto& v : f.values) mx = std::max(mx, std::abs(v));
        const double band = 2.0 * f.grid.freq_spacing();
        for (std::size_t k = 0; k < f.grid.size(); ++k)
            if (std::abs(f.grid.xi(k)) <= band && std::abs(f.values[k]) >= 1e-12 * mx)
                fail(errc::singular_at_zero, "negative-order derivative of data with mass near zero frequency");
    }
    for (std::size_t k = 0; k < f.grid.size(); ++k) f.values[k] *= weight(f.grid.xi(k), s);
    return inverse_fourier(f);
}

SpaceTimeField evolve_window(const WaveFunction& u, double alpha, double s, const TimeAxis& time) {
    check_alpha(alpha);
    SpaceTimeField field(time, u.grid, alpha, s);
    const Spectrum f = forward_fourier(u);
    const std::size_t n = u.grid.size();
    std::vector<double> w(n), lam(n);
    for (std::size_t k = 0; k < n; ++k) {
        w[k] = weight(f.grid.xi(k), s);
        lam[k] = std::pow(std::abs(f.grid.xi(k)), alpha);
    }
    parallel_for(time.size(), [&](std::size_t i) {
        const double t = time[i];
        Spectrum g(u.grid);
        for (std::size_t k = 0; k < n; ++k) g.values[k] = f.values[k] * w[k] * std::polar(1.0, -t * lam[k]);
        const WaveFunction v = inverse_fourier(g);
        std::copy(v.values.begin(), v.values.end(), field.slice(i));
    });
    return field;
}

}  // namespace strichartz
