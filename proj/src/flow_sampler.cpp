#include "flow_sampler.hpp"

#include <cmath>
#include <algorithm>
#include <sstream>

#include "strichartz/error.hpp"
#include "strichartz/parallel.hpp"

namespace strichartz::detail {

FlowSampler::FlowSampler(const WaveFunction& u, double alpha, double s, double r, double amplitude_floor,
                         std::size_t max_points)
    : u_(u), alpha_(alpha), s_(s), r_(r), max_points_(max_points), disp_(dispersion_of(u, alpha, amplitude_floor)) {
    const Spectrum f = forward_fourier(u);
    const Extent band = spectral_extent(f, amplitude_floor);
    center_ = 0.5 * (band.lo + band.hi);
    const double half = std::max(0.5 * band.width(), 4.0 * u.grid.freq_spacing());
    // |v|^r of a signal with half-band W has half-band (r/2) W for even r.
    const double order = std::isinf(r) ? 2.0 : std::max(1.0, 0.5 * r);
    dx_ = std::max(u.grid.spacing(), kPi / (1.1 * order * half));
    // Keep the carrier exactly representable when the band is centered.
    if (std::abs(center_) < u.grid.freq_spacing()) center_ = 0.0;
    // |xi|^s has a cusp at 0 when the band straddles it; D^s u then has a
    // |x|^{-1-s} tail and the window error decays only like L^{-1-s}.
    if (s != 0.0 && band.lo <= 0.0 && band.hi >= 0.0)
        min_window_ = std::max(u.grid.extent(), kCuspWindowFactor * disp_.support.width());
}

std::size_t FlowSampler::points_for(double t) const {
    const double need = 1.2 * (disp_.support.width() + (disp_.v_max - disp_.v_min) * std::abs(t)) + 16.0 * dx_;
    const double want = std::max({64.0, std::ceil(need / dx_), std::ceil(min_window_ / dx_)});
    if (want > static_cast<double>(max_points_)) {
        std::ostringstream os;
        os << "spreading over |t| <= " << std::abs(t) << " needs " << want << " grid points (cap "
           << max_points_ << ")";
        fail(errc::grid_underresolved, os.str());
    }
    return next_pow2(static_cast<std::size_t>(want));
}

std::shared_ptr<const FlowSampler::Level> FlowSampler::level(std::size_t n) {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = levels_.find(n);
    if (it != levels_.end()) return it->second;
    auto lv = std::make_shared<Level>();
    lv->grid = SpectralGrid(n, dx_ * static_cast<double>(n));
    const double dxi = lv->grid.freq_spacing();
    lv->spec = fourier_samples(u_, center_ + lv->grid.xi(0), dxi, n);
    lv->lam.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double xi = center_ + lv->grid.xi(k);
        lv->spec[k] *= weight(xi, s_);
        lv->lam[k] = std::pow(std::abs(xi), alpha_);
    }
    levels_.emplace(n, lv);
    return lv;
}

void FlowSampler::fill(const Level& lv, double t, cvec& out) const {
    const std::size_t n = lv.grid.size();
    Spectrum g(lv.grid);
    for (std::size_t k = 0; k < n; ++k) g.values[k] = lv.spec[k] * std::polar(1.0, -t * lv.lam[k]);
    out = inverse_fourier(g).values;
}

WaveFunction FlowSampler::slice(double t) {
    auto lv = level(points_for(t));
    WaveFunction v(lv->grid);
    fill(*lv, t, v.values);
    if (center_ != 0.0)
        for (std::size_t j = 0; j < v.values.size(); ++j) v.values[j] *= std::polar(1.0, center_ * lv->grid.x(j));
    return v;
}

double slice_power(const cvec& v, double dx, double r) {
    if (std::isinf(r)) {
        double m = 0.0;
        for (const auto& z : v) m = std::max(m, std::abs(z));
        return m;
    }
    double s = 0.0;
    if (r == 2.0) {
        for (const auto& z : v) s += std::norm(z);
    } else if (r == 6.0) {
        for (const auto& z : v) {
            const double a = std::norm(z);
            s += a * a * a;
        }
    } else if (r == 4.0) {
        for (const auto& z : v) {
            const double a = std::norm(z);
            s += a * a;
        }
    } else {
        const double h = 0.5 * r;
        for (const auto& z : v) s += std::pow(std::norm(z), h);
    }
    return s * dx;
}

double FlowSampler::power(double t) {
    auto lv = level(points_for(t));
    cvec v;
    fill(*lv, t, v);
    return slice_power(v, lv->grid.spacing(), r_);
}

std::vector<double> FlowSampler::powers(const std::vector<double>& times) {
    std::vector<double> out(times.size());
    for (double t : times) level(points_for(t));
    parallel_for(times.size(), [&](std::size_t i) { out[i] = power(times[i]); });
    return out;
}

}  // namespace strichartz::detail
