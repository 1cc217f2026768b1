#include "strichartz/profile_lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/zeta.hpp>

#include "strichartz/error.hpp"
#include "strichartz/fit.hpp"
#include "strichartz/parallel.hpp"
#include "strichartz/propagator.hpp"

namespace strichartz {

namespace {

constexpr double kSupportFloor = 1e-9;
constexpr std::size_t kMaxSamples = std::size_t(1) << 22;

struct Footprint {
    Extent space;  // of phi
    Extent band;   // of F[phi]
};

Footprint footprint(const WaveFunction& phi, double floor = kSupportFloor) {
    if (l2_norm(phi) == 0.0) fail(errc::zero_datum, "profile of the zero function");
    return {spatial_extent(phi, floor), spectral_extent(forward_fourier(phi), floor)};
}

std::size_t sample_count(double width, double step, const char* what) {
    const double n = std::ceil(width / step) + 1.0;
    if (!(n <= static_cast<double>(kMaxSamples))) {
        std::ostringstream os;
        os << what << " needs " << n << " samples";
        fail(errc::grid_underresolved, os.str());
    }
    return static_cast<std::size_t>(std::max(n, 2.0));
}

double group_velocity(double xi, double alpha) {
    return std::copysign(alpha * std::pow(std::abs(xi), alpha - 1.0), xi);
}

double inverse_velocity(double v, double alpha) {
    return std::copysign(std::pow(std::abs(v) / alpha, 1.0 / (alpha - 1.0)), v);
}

// Bound on |d^2/dxi^2 |xi|^alpha| over [lo, hi], finite for alpha < 2 by
// staying away from 0.
double curvature_bound(double lo, double hi, double alpha) {
    const double a = std::abs(lo), b = std::abs(hi);
    double r;
    if (alpha >= 2.0) r = std::max(a, b);
    else r = std::max((lo <= 0.0 && hi >= 0.0) ? 0.0 : std::min(a, b), 1e-3);
    return alpha * (alpha - 1.0) * std::pow(r, alpha - 2.0);
}

// C-infinity step: 0 for u <= 0, 1 for u >= 1.
double smooth_step(double u) {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    const double a = std::exp(-1.0 / u), b = std::exp(-1.0 / (1.0 - u));
    return a / (a + b);
}

Extent band_of(const Footprint& f, const ProfileParams& p) {
    return {p.xi0 + f.band.lo / p.h, p.xi0 + f.band.hi / p.h};
}

// Where T(p) phi lives at time 0: the frequency-xi component of the
// geometric image is carried to x - t0 v(xi) by the backward flow.
Extent transported_support(const Footprint& f, const ProfileParams& p, double alpha) {
    const Extent b = band_of(f, p);
    const double a = -p.t0 * group_velocity(b.lo, alpha), c = -p.t0 * group_velocity(b.hi, alpha);
    const double m = 8.0 * std::sqrt(std::abs(p.t0) * curvature_bound(b.lo, b.hi, alpha));
    return {p.x0 + p.h * f.space.lo + std::min(a, c) - m, p.x0 + p.h * f.space.hi + std::max(a, c) + m};
}

// inner[a * nb + b] = <T(pa) A[a], T(pb) B[b]> by trapezoid quadrature over
// the common band.
std::vector<cplx> overlap_matrix(const std::vector<const WaveFunction*>& A, const ProfileParams& pa,
                                 const std::vector<const WaveFunction*>& B, const ProfileParams& pb, double alpha) {
    check_alpha(alpha);
    pa.validate();
    pb.validate();
    auto unite = [](const std::vector<const WaveFunction*>& set) {
        Footprint u = footprint(*set.front());
        for (std::size_t i = 1; i < set.size(); ++i) {
            const Footprint f = footprint(*set[i]);
            u.space = {std::min(u.space.lo, f.space.lo), std::max(u.space.hi, f.space.hi)};
            u.band = {std::min(u.band.lo, f.band.lo), std::max(u.band.hi, f.band.hi)};
        }
        return u;
    };
    const Footprint fa = unite(A), fb = unite(B);
    std::vector<cplx> out(A.size() * B.size(), cplx(0.0));
    const Extent ba = band_of(fa, pa), bb = band_of(fb, pb);
    const double lo = std::max(ba.lo, bb.lo), hi = std::min(ba.hi, bb.hi);
    if (!(lo < hi)) return out;
    // The integrand's content in x is the cross-correlation of the two
    // profiles; the step must not alias its largest lag.
    const Extent sa = transported_support(fa, pa, alpha), sb = transported_support(fb, pb, alpha);
    const double lag = std::max(std::abs(sa.hi - sb.lo), std::abs(sb.hi - sa.lo));
    const double dxi = 2.0 * kPi / (1.5 * lag + 8.0);
    const std::size_t n = sample_count(hi - lo, dxi, "overlap quadrature");
    const double step = (hi - lo) / static_cast<double>(n - 1);
    std::vector<cvec> sa_vals(A.size()), sb_vals(B.size());
    for (std::size_t i = 0; i < A.size(); ++i) sa_vals[i] = profile_spectrum(*A[i], pa, alpha, lo, step, n);
    for (std::size_t i = 0; i < B.size(); ++i) sb_vals[i] = profile_spectrum(*B[i], pb, alpha, lo, step, n);
    for (std::size_t a = 0; a < A.size(); ++a)
        for (std::size_t b = 0; b < B.size(); ++b) {
            cplx s = 0.0;
            for (std::size_t l = 0; l < n; ++l) {
                const double w = (l == 0 || l + 1 == n) ? 0.5 : 1.0;
                s += w * sa_vals[a][l] * std::conj(sb_vals[b][l]);
            }
            out[a * B.size() + b] = s * step / (2.0 * kPi);
        }
    return out;
}

// F[phi] on an 8x oversampled table over its band, demodulated by the
// spatial center so the tabulated function varies slowly; read back by
// 10-point Lagrange interpolation (relative error well below 1e-9).
class SpectrumTable {
public:
    SpectrumTable(const WaveFunction& phi, const Footprint& f) {
        yc_ = 0.5 * (f.space.lo + f.space.hi);
        const double w = f.space.width() + 4.0 * phi.grid.spacing();
        dz_ = 2.0 * kPi / (8.0 * w);
        z0_ = f.band.lo - kOrder * dz_;
        const std::size_t n = static_cast<std::size_t>(std::ceil(f.band.width() / dz_)) + 2 * kOrder + 1;
        vals_ = fourier_samples(phi, z0_, dz_, n);
        for (std::size_t k = 0; k < n; ++k) vals_[k] *= std::polar(1.0, yc_ * (z0_ + dz_ * static_cast<double>(k)));
        lo_ = f.band.lo;
        hi_ = f.band.hi;
    }

    cplx operator()(double z) const {
        if (z < lo_ || z > hi_) return 0.0;
        const double u = (z - z0_) / dz_;
        const long base = std::clamp(static_cast<long>(std::floor(u)) - (kOrder / 2 - 1), 0L,
                                     static_cast<long>(vals_.size()) - kOrder);
        // Barycentric weights for equispaced nodes: (-1)^i C(n-1, i).
        cplx num = 0.0;
        double den = 0.0;
        double binom = 1.0;
        for (int i = 0; i < kOrder; ++i) {
            const double d = u - static_cast<double>(base + i);
            if (d == 0.0) return vals_[static_cast<std::size_t>(base + i)] * std::polar(1.0, -yc_ * z);
            const double wi = ((i % 2) ? -binom : binom) / d;
            num += wi * vals_[static_cast<std::size_t>(base + i)];
            den += wi;
            binom = binom * (kOrder - 1 - i) / (i + 1);
        }
        return num / den * std::polar(1.0, -yc_ * z);
    }

private:
    static constexpr int kOrder = 10;
    double yc_ = 0.0, dz_ = 1.0, z0_ = 0.0, lo_ = 0.0, hi_ = 0.0;
    cvec vals_;
};

// |D^s e^{-it|grad|^alpha} T(p) phi| on demand, from samples of F[phi]. Only
// the frequencies that the flow carries near the requested x-range are
// summed, with a smooth cutoff placed well outside it, so far-field
// evaluations cost about as much as near-field ones.
class PacketSampler {
public:
    PacketSampler(const WaveFunction& phi, const ProfileParams& p, double alpha, double s)
        : p_(p), alpha_(alpha), s_(s), f_(footprint(phi)), table_(phi, f_) {
        p_.validate();
        band_ = band_of(f_, p_);
        curv_ = curvature_bound(band_.lo, band_.hi, alpha_);
        const double dv = group_velocity(band_.hi, alpha_) - group_velocity(band_.lo, alpha_);
        tau_ = p_.h * f_.space.width() / std::max(dv, std::numeric_limits<double>::min());
        const double low = (band_.lo <= 0.0 && band_.hi >= 0.0)
                               ? 0.0
                               : std::min(std::abs(band_.lo), std::abs(band_.hi));
        cusp_ = s_ != 0.0 && band_.lo < 0.0 && band_.hi > 0.0;
        if (cusp_) zeta_ = boost::math::zeta(-s_);
        uniform_ = alpha_ == 2.0 || (alpha_ > 2.0 && low > 0.5 * std::max(std::abs(band_.lo), std::abs(band_.hi)));
    }

    double focus() const { return p_.t0; }
    double tau() const { return tau_; }
    double halfband() const { return 0.5 * band_.width(); }

    // Factor by which the modulus at time t is smoother than at the focus:
    // linear in |t - t0| when the curvature is bounded below on the band,
    // cube-root (inflection point) otherwise.
    double smoothing(double t) const {
        const double r = std::abs(t - p_.t0) / tau_;
        return std::max(1.0, uniform_ ? 0.25 * r : 0.25 * std::cbrt(r));
    }

    double spread_margin(double dt) const { return 8.0 * std::sqrt(std::abs(dt) * curv_); }

    // Near the focus the |x|^{-1-s} tails of a singular weight matter, so
    // the whole band is summed over a widened support. Further out they are
    // negligible next to the dispersed body.
    bool wide(double dt) const { return cusp_ && std::abs(dt) <= 64.0 * tau_; }

    Extent support(double t) const {
        const double dt = t - p_.t0;
        const double a = dt * group_velocity(band_.lo, alpha_), b = dt * group_velocity(band_.hi, alpha_);
        double m = spread_margin(dt);
        // |xi|^s with 0 in the band leaves |x|^{-1-s} tails.
        if (wide(dt)) m += 16.0 * p_.h * f_.space.width();
        return {p_.x0 + p_.h * f_.space.lo + std::min(a, b) - m, p_.x0 + p_.h * f_.space.hi + std::max(a, b) + m};
    }

    // Long ranges are split into chunks, each summing only its own band.
    std::vector<double> modulus(double t, double x_start, double dx, std::size_t count) const {
        const double dt = t - p_.t0;
        if (wide(dt)) return modulus_chunk(t, x_start, dx, count);
        const double chunk = std::max(8.0 * std::max(spread_margin(dt), p_.h * f_.space.width()), 64.0 * dx);
        const std::size_t per = std::max<std::size_t>(16, static_cast<std::size_t>(chunk / dx));
        if (count <= per) return modulus_chunk(t, x_start, dx, count);
        std::vector<double> out;
        out.reserve(count);
        for (std::size_t i = 0; i < count; i += per) {
            const std::size_t c = std::min(per, count - i);
            const auto part = modulus_chunk(t, x_start + dx * static_cast<double>(i), dx, c);
            out.insert(out.end(), part.begin(), part.end());
        }
        return out;
    }

private:
    std::vector<double> modulus_chunk(double t, double x_start, double dx, std::size_t count) const {
        const double dt = t - p_.t0;
        const double x_end = x_start + dx * static_cast<double>(count - 1);
        const double hw = p_.h * f_.space.width();
        const double m = std::max(spread_margin(dt), hw);
        double lo = band_.lo, hi = band_.hi;
        // Positions dt v(xi) kept: [q_lo, q_hi], tapered over the outer m.
        double q_lo = -std::numeric_limits<double>::infinity(), q_hi = std::numeric_limits<double>::infinity();
        const bool localize = dt != 0.0 && !wide(dt);
        if (localize) {
            q_lo = x_start - p_.x0 - p_.h * f_.space.hi - 2.0 * m;
            q_hi = x_end - p_.x0 - p_.h * f_.space.lo + 2.0 * m;
            double v1 = q_lo / dt, v2 = q_hi / dt;
            if (dt < 0.0) std::swap(v1, v2);
            lo = std::max(lo, inverse_velocity(v1, alpha_));
            hi = std::min(hi, inverse_velocity(v2, alpha_));
            if (!(lo < hi)) return std::vector<double>(count, 0.0);
        }
        const double qa = dt * group_velocity(lo, alpha_), qb = dt * group_velocity(hi, alpha_);
        const double ms = spread_margin(dt);
        const double s_lo = std::min(x_start, p_.x0 + p_.h * f_.space.lo + std::min(qa, qb) - ms);
        const double s_hi = std::max(x_end, p_.x0 + p_.h * f_.space.hi + std::max(qa, qb) + ms);
        const double period = 2.0 * (s_hi - s_lo) + 2.0;
        const double dxi0 = 2.0 * kPi / period;
        std::size_t n;
        double dxi;
        const bool corner_node = cusp_ && lo < 0.0 && hi > 0.0;
        if (corner_node) {
            // Put xi = 0 on a node so the |xi|^s corner has a closed-form
            // trapezoid correction: -2 zeta(-s) f(0) dxi^{1+s}.
            const double k = std::ceil(-lo / dxi0);
            dxi = -lo / k;
            n = sample_count(hi - lo, dxi, "packet spectrum");
        } else {
            n = sample_count(hi - lo, dxi0, "packet spectrum");
            dxi = (hi - lo) / static_cast<double>(n - 1);
        }
        cvec c(n);
        const double sh = std::sqrt(p_.h);
        for (std::size_t l = 0; l < n; ++l) {
            const double xi = lo + dxi * static_cast<double>(l);
            double w = (l == 0 || l + 1 == n) ? 0.5 : 1.0;
            if (localize) {
                const double q = dt * group_velocity(xi, alpha_);
                w *= smooth_step((q - q_lo) / m) * smooth_step((q_hi - q) / m);
            }
            w *= sh * weight(xi, s_);
            const double phase = -dt * std::pow(std::abs(xi), alpha_) - p_.x0 * xi + x_start * dxi * static_cast<double>(l);
            c[l] = w * table_(p_.h * (xi - p_.xi0)) * std::polar(1.0, phase);
        }
        const cvec v = chirp_sum(c, static_cast<long double>(dx) * dxi, count);
        std::vector<double> out(count);
        cplx corner = 0.0;
        if (corner_node) {
            const double w0 = localize ? smooth_step(-q_lo / m) * smooth_step(q_hi / m) : 1.0;
            corner = -2.0 * zeta_ * w0 * sh * table_(-p_.h * p_.xi0) * std::pow(dxi, 1.0 + s_) / (2.0 * kPi);
        }
        for (std::size_t k = 0; k < count; ++k) {
            const double x = x_start + dx * static_cast<double>(k);
            out[k] = std::abs(v[k] * dxi / (2.0 * kPi) + corner * std::polar(1.0, -x * lo));
        }
        return out;
    }

    ProfileParams p_;
    double alpha_;
    double s_;
    Footprint f_;
    SpectrumTable table_;
    Extent band_;
    double curv_ = 0.0;
    double tau_ = 0.0;
    bool uniform_ = false;
    bool cusp_ = false;  // weight singular inside the band
    double zeta_ = 0.0;
};

// int |F_j F_k|^3 dx at time t.
double cubic_overlap(const PacketSampler& a, const PacketSampler& b, double t) {
    const Extent sa = a.support(t), sb = b.support(t);
    const double lo = std::max(sa.lo, sb.lo), hi = std::min(sa.hi, sb.hi);
    if (!(lo < hi)) return 0.0;
    // A dispersed packet's modulus varies slowly; its effective band shrinks.
    auto eff = [t](const PacketSampler& p) { return p.halfband() / p.smoothing(t); };
    const double dx0 = kPi / (3.3 * (eff(a) + eff(b)));
    const std::size_t m = sample_count(hi - lo, dx0, "cross-norm slice");
    const double dx = (hi - lo) / static_cast<double>(m - 1);
    const std::vector<double> fa = a.modulus(t, lo, dx, m), fb = b.modulus(t, lo, dx, m);
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double w = (i == 0 || i + 1 == m) ? 0.5 : 1.0;
        const double p = fa[i] * fb[i];
        s += w * p * p * p;
    }
    return s * dx;
}

template <class G>
double gk(G&& g, double lo, double hi, double tol) {
    if (lo == hi) return 0.0;
    return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(g, lo, hi, 5, tol);
}

// Octave pieces from `from` toward `to` (finite) with first width d0.
template <class G>
double octaves_between(G&& g, double from, double to, double d0, double tol) {
    const double dir = to > from ? 1.0 : -1.0;
    const double len = std::abs(to - from);
    double a = 0.0, w = d0, sum = 0.0;
    while (a < len) {
        const double b = std::min(len, w);
        sum += dir * gk(g, from + dir * a, from + dir * b, tol);
        a = b;
        w *= 2.0;
    }
    return sum;
}

// Last entry of the epsilon_4 column of Wynn's table for the partial sums
// (two geometric modes eliminated); NaN until five sums exist.
double wynn_eps4(const std::vector<double>& sums) {
    const std::size_t n = sums.size();
    if (n < 5) return std::numeric_limits<double>::quiet_NaN();
    std::vector<double> prev(6, 0.0), cur(sums.end() - 5, sums.end());
    for (int k = 0; k < 4; ++k) {
        std::vector<double> next(cur.size() - 1);
        for (std::size_t j = 0; j + 1 < cur.size(); ++j) {
            const double d = cur[j + 1] - cur[j];
            if (d == 0.0) return cur.back();
            next[j] = prev[j + 1] + 1.0 / d;
        }
        prev = cur;
        cur = next;
    }
    return cur.front();
}

// Octave pieces from `from` to infinity in direction dir. The pieces decay
// like a power of t times slowly varying corrections, so the partial sums are
// extrapolated with Wynn's epsilon algorithm; stops when two successive
// extrapolations agree.
template <class G>
double octaves_outward(G&& g, double from, double dir, double d0, double rel_tol, double base) {
    double a = 0.0, w = d0, sum = 0.0, last = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> sums;
    for (int k = 0; k < 90; ++k) {
        sum += std::abs(gk(g, from + dir * a, from + dir * w, rel_tol));
        sums.push_back(sum);
        a = w;
        w *= 2.0;
        if (k >= 40 && sum == 0.0) return 0.0;
        if (k < 8) continue;
        const double est = wynn_eps4(sums);
        if (std::isfinite(est) && est >= sum && std::abs(est - last) <= rel_tol * (base + est)) return est;
        last = est;
    }
    fail(errc::no_convergence, "cross-norm time integral did not settle");
}

double symbol(double xi, double alpha, bool integer_phase) {
    return integer_phase ? std::pow(xi, alpha) : std::pow(std::abs(xi), alpha);
}

// m-th derivative of the symbol.
double symbol_derivative(double xi, double alpha, int m, bool integer_phase) {
    double ff = 1.0;
    for (int i = 0; i < m; ++i) ff *= alpha - i;
    if (integer_phase) {
        if (m > alpha) return 0.0;
        return ff * std::pow(xi, alpha - m);
    }
    const double v = ff * std::pow(std::abs(xi), alpha - m);
    return (xi < 0.0 && m % 2 == 1) ? -v : v;
}

void check_phase_mode(double alpha, const VdcOptions& opt) {
    check_alpha(alpha);
    if (opt.integer_phase && alpha != std::round(alpha))
        fail(errc::invalid_alpha, "integer-phase mode needs an integer alpha");
}

}  // namespace

WaveFunction profile_operator(const WaveFunction& phi, const ProfileParams& p, double alpha) {
    check_alpha(alpha);
    return apply_symmetry(phi, p, alpha);
}

cvec profile_spectrum(const WaveFunction& phi, const ProfileParams& p, double alpha, double xi_start, double dxi,
                      std::size_t count) {
    check_alpha(alpha);
    p.validate();
    cvec out = fourier_samples(phi, p.h * (xi_start - p.xi0), p.h * dxi, count);
    const double sh = std::sqrt(p.h);
    for (std::size_t k = 0; k < count; ++k) {
        const double xi = xi_start + dxi * static_cast<double>(k);
        out[k] *= sh * std::polar(1.0, p.t0 * std::pow(std::abs(xi), alpha) - p.x0 * xi);
    }
    return out;
}

cplx profile_inner(const WaveFunction& phi, const ProfileParams& pj, const WaveFunction& psi, const ProfileParams& pk,
                   double alpha) {
    return overlap_matrix({&phi}, pj, {&psi}, pk, alpha).front();
}

double weak_overlap(const ProfileParams& pj, const ProfileParams& pk, double alpha,
                    const std::vector<WaveFunction>& dictionary) {
    if (dictionary.empty()) fail(errc::invalid_input, "empty test dictionary");
    std::vector<const WaveFunction*> d;
    for (const auto& f : dictionary) {
        require_resolved(f, "dictionary element");
        d.push_back(&f);
    }
    double best = 0.0;
    for (const cplx& v : overlap_matrix(d, pj, d, pk, alpha)) best = std::max(best, std::abs(v));
    return best;
}

double cross_strichartz_norm(const WaveFunction& phi_j, const WaveFunction& phi_k, const ProfileParams& pj,
                             const ProfileParams& pk, double alpha, double rel_tol) {
    check_alpha(alpha);
    if (!(rel_tol > 0.0)) fail(errc::invalid_input, "tolerance must be positive");
    require_resolved(phi_j, "cross-norm profile");
    require_resolved(phi_k, "cross-norm profile");
    const double s = (alpha - 2.0) / 6.0;
    const PacketSampler a(phi_j, pj, alpha, s), b(phi_k, pk, alpha, s);
    auto g = [&](double t) { return cubic_overlap(a, b, t); };
    const double ta = std::min(pj.t0, pk.t0), tb = std::max(pj.t0, pk.t0);
    const double d0 = 0.25 * std::min(a.tau(), b.tau());
    // The norm is a cube root: relative error rel_tol allows 3 rel_tol on the integral.
    const double tol = 3.0 * rel_tol;
    double total = 0.0;
    if (tb > ta) {
        const double mid = 0.5 * (ta + tb);
        total += octaves_between(g, ta, mid, d0, tol) + octaves_between(g, tb, mid, d0, tol);
    }
    const double right = octaves_outward(g, tb, 1.0, d0, 0.5 * tol, total);
    const double left = octaves_outward(g, ta, -1.0, d0, 0.5 * tol, total + right);
    total += right + left;
    return std::cbrt(total);
}

double composed_sup_norm(const WaveFunction& phi, const ProfileParams& pj, const ProfileParams& pk, double alpha,
                         const VdcOptions& opt) {
    check_phase_mode(alpha, opt);
    pj.validate();
    pk.validate();
    // Up to a unimodular factor and the scale (h_j/h_k)^{1/2}, the output is
    // Y -> (1/2pi) int e^{i Y z} e^{-i dt P(xi_k + z/h_k)} F[phi](z) dz.
    const Footprint f = footprint(phi, opt.amplitude_floor);
    const double dt = pj.t0 - pk.t0, h = pk.h, xk = pk.xi0;
    const std::size_t probe = 1025;
    double vmin = std::numeric_limits<double>::infinity(), vmax = -vmin, curv = 0.0;
    for (std::size_t i = 0; i < probe; ++i) {
        const double z = f.band.lo + f.band.width() * static_cast<double>(i) / static_cast<double>(probe - 1);
        const double xi = xk + z / h;
        const double v = dt / h * symbol_derivative(xi, alpha, 1, opt.integer_phase);
        vmin = std::min(vmin, v);
        vmax = std::max(vmax, v);
        curv = std::max(curv, std::abs(dt / (h * h) * symbol_derivative(xi, alpha, 2, opt.integer_phase)));
    }
    const double m = 8.0 * std::sqrt(curv) + 0.25 * f.space.width();
    const double y_lo = f.space.lo + vmin - m, y_hi = f.space.hi + vmax + m;
    const double dz0 = 2.0 * kPi / (1.25 * (y_hi - y_lo) + 2.0);
    const std::size_t n = sample_count(f.band.width(), dz0, "composed operator spectrum");
    const double dz = f.band.width() / static_cast<double>(n - 1);
    cvec c = fourier_samples(phi, f.band.lo, dz, n);
    for (std::size_t l = 0; l < n; ++l) {
        const double z = f.band.lo + dz * static_cast<double>(l);
        const double w = (l == 0 || l + 1 == n) ? 0.5 : 1.0;
        const double phase = -dt * symbol(xk + z / h, alpha, opt.integer_phase) + y_lo * dz * static_cast<double>(l);
        c[l] *= w * std::polar(1.0, phase);
    }
    // |output| is band-limited to the width of the band; oversample 16x.
    const double dy0 = 2.0 * kPi / f.band.width() / 16.0;
    const std::size_t count = sample_count(y_hi - y_lo, dy0, "composed operator sup");
    const double dy = (y_hi - y_lo) / static_cast<double>(count - 1);
    const cvec v = chirp_sum(c, static_cast<long double>(dy) * dz, count);
    std::size_t arg = 0;
    for (std::size_t i = 1; i < count; ++i)
        if (std::abs(v[i]) > std::abs(v[arg])) arg = i;
    double peak = std::abs(v[arg]);
    if (arg > 0 && arg + 1 < count) {
        const double l = std::abs(v[arg - 1]), r = std::abs(v[arg + 1]);
        const double den = l - 2.0 * peak + r;
        if (den < 0.0) {
            const double off = 0.5 * (l - r) / den;
            peak -= 0.25 * (l - r) * off;
        }
    }
    return std::sqrt(pj.h / pk.h) * peak * dz / (2.0 * kPi);
}

double phase_coefficient(const WaveFunction& phi, const ProfileParams& pj, const ProfileParams& pk, double alpha,
                         int m, const VdcOptions& opt) {
    check_phase_mode(alpha, opt);
    if (m < 1) fail(errc::invalid_input, "derivative order must be positive");
    pj.validate();
    pk.validate();
    const Footprint f = footprint(phi, opt.amplitude_floor);
    const double dt = pj.t0 - pk.t0, h = pk.h;
    double fact = 1.0;
    for (int i = 2; i <= m; ++i) fact *= i;
    auto psi_m = [&](double z) {
        const double xi = pk.xi0 + z / h;
        const double d = dt * std::pow(h, -m) * symbol_derivative(xi, alpha, m, opt.integer_phase);
        // The linear term carries the relative translation.
        return m == 1 ? ((pj.x0 - pk.x0) / h - d) : -d / fact;
    };
    const bool continuous = opt.integer_phase || alpha - m >= 0.0;
    const std::size_t probe = 2049;
    double best = std::numeric_limits<double>::infinity(), prev = 0.0;
    for (std::size_t i = 0; i < probe; ++i) {
        const double z = f.band.lo + f.band.width() * static_cast<double>(i) / static_cast<double>(probe - 1);
        const double d = psi_m(z);
        if (d == 0.0 || (continuous && i > 0 && (d > 0.0) != (prev > 0.0))) return 0.0;
        best = std::min(best, std::abs(d));
        prev = d;
    }
    return best;
}

VdcFit vdc_decay_fit(const WaveFunction& phi, const ParamSequence& pj, const ParamSequence& pk, double alpha,
                     const VdcOptions& opt) {
    check_phase_mode(alpha, opt);
    if (pj.empty() || pj.size() != pk.size())
        fail(errc::invalid_input, "parameter sequences must be nonempty and of equal length");
    if (pj.size() < 3) fail(errc::invalid_input, "decay fit needs three or more sequence entries");
    constexpr int kMaxOrder = 8;
    const std::size_t n = pj.size();
    std::vector<std::vector<double>> a(kMaxOrder + 1, std::vector<double>(n));
    for (int m = 1; m <= kMaxOrder; ++m)
        for (std::size_t i = 0; i < n; ++i) a[m][i] = phase_coefficient(phi, pj[i], pk[i], alpha, m, opt);
    auto diverges = [&](int m) {
        const auto& v = a[m];
        return v.back() > 0.0 && v.back() >= 10.0 * v.front();
    };
    VdcFit out;
    for (int m = 2; m <= kMaxOrder && out.m0 == 0; ++m)
        if (diverges(m)) out.m0 = m;
    if (out.m0 == 0 && diverges(1)) out.m0 = 1;
    if (out.m0 == 0) fail(errc::degenerate_sequence, "no phase coefficient diverges along the sequence");
    out.coefficient = a[out.m0];
    out.sup_norm.resize(n);
    parallel_for(n, [&](std::size_t i) { out.sup_norm[i] = composed_sup_norm(phi, pj[i], pk[i], alpha, opt); });
    std::vector<double> x, y;
    for (std::size_t i = 0; i < n; ++i)
        if (out.coefficient[i] > 0.0) {
            x.push_back(out.coefficient[i]);
            y.push_back(out.sup_norm[i]);
        }
    const LineFit fit = fit_loglog(x, y);
    out.slope = fit.slope;
    out.residual = fit.residual;
    return out;
}

namespace {

struct Template {
    Footprint f;
    SpectrumTable table;
    double spectral_spread = 0.0;
};

struct Candidate {
    double score = -1.0;
    std::size_t index = 0;
    ProfileParams p;
};

// Unit-norm spectrum of T(p) psi on grid bins [first, first + values.size()).
struct Atom {
    std::size_t first = 0;
    cvec values;
    bool empty() const { return values.empty(); }
};

class Extractor {
public:
    Extractor(const WaveFunction& u, double alpha, const std::vector<WaveFunction>& templates,
              const ExtractionConfig& cfg)
        : g_(u.grid), alpha_(alpha), cfg_(cfg) {
        for (const auto& t : templates) {
            const Spectrum s = forward_fourier(t);
            const double mu = mean_frequency(s);
            double m = 0.0, v = 0.0;
            for (std::size_t k = 0; k < s.values.size(); ++k) {
                const double w = std::norm(s.values[k]);
                m += w;
                v += w * (s.grid.xi(k) - mu) * (s.grid.xi(k) - mu);
            }
            const Footprint f = footprint(t);
            templates_.push_back({f, SpectrumTable(t, f), std::sqrt(v / m)});
        }
    }

    // Empty when the profile does not fit the grid.
    Atom atom(const Template& t, const ProfileParams& p) const {
        const double nyq = g_.nyquist();
        const Extent b = band_of(t.f, p);
        if (b.lo <= -0.95 * nyq || b.hi >= 0.95 * nyq) return {};
        if (transported_support(t.f, p, alpha_).width() > g_.extent()) return {};
        const double dxi = g_.freq_spacing(), mid = 0.5 * static_cast<double>(g_.size());
        const auto k_lo = static_cast<std::size_t>(std::max(0.0, std::floor(b.lo / dxi + mid)));
        const auto k_hi = std::min(g_.size() - 1, static_cast<std::size_t>(std::ceil(b.hi / dxi + mid)));
        Atom out{k_lo, cvec(k_hi - k_lo + 1)};
        double s = 0.0;
        for (std::size_t k = 0; k < out.values.size(); ++k) {
            const double xi = g_.xi(k_lo + k);
            out.values[k] = t.table(p.h * (xi - p.xi0)) *
                            std::polar(1.0, p.t0 * std::pow(std::abs(xi), alpha_) - p.x0 * xi);
            s += std::norm(out.values[k]);
        }
        const double nrm = std::sqrt(s / g_.extent());
        if (!(nrm > 0.0)) return {};
        for (auto& z : out.values) z /= nrm;
        return out;
    }

    cplx project(const cvec& r, const Atom& a) const {
        cplx s = 0.0;
        for (std::size_t k = 0; k < a.values.size(); ++k) s += r[a.first + k] * std::conj(a.values[k]);
        return s / g_.extent();
    }

    Candidate lattice_search(const cvec& r) const {
        const Spectrum rs(g_, r);
        const Extent rb = spectral_extent(rs, 1e-6);
        struct Task {
            std::size_t index;
            double h;
            double xi0;
        };
        std::vector<Task> tasks;
        for (std::size_t i = 0; i < templates_.size(); ++i)
            for (int j = -cfg_.scale_octaves; j <= cfg_.scale_octaves; ++j) {
                const double h = std::ldexp(1.0, j);
                const double step = cfg_.xi_step * templates_[i].spectral_spread / h;
                const long k_lo = static_cast<long>(std::floor(rb.lo / step));
                const long k_hi = static_cast<long>(std::ceil(rb.hi / step));
                for (long k = k_lo; k <= k_hi; ++k) tasks.push_back({i, h, static_cast<double>(k) * step});
            }
        const double L = g_.extent(), x_lo = g_.x(0);
        std::vector<Candidate> best(tasks.size());
        parallel_for(tasks.size(), [&](std::size_t n) {
            const Task& tk = tasks[n];
            const Template& t = templates_[tk.index];
            for (double t0 : cfg_.times) {
                const ProfileParams p{tk.h, 0.0, tk.xi0, t0};
                const Atom a = atom(t, p);
                if (a.empty()) continue;
                // |<r, T(p with x0) psi>| for x0 on a lattice of m points at
                // once: a short inverse DFT of the banded product.
                const std::size_t m = std::min(g_.size(), next_pow2(std::max<std::size_t>(64, 2 * a.values.size())));
                cvec prod(m, cplx(0.0));
                for (std::size_t k = 0; k < a.values.size(); ++k)
                    prod[k] = r[a.first + k] * std::conj(a.values[k]) *
                              std::polar(1.0, 2.0 * kPi * static_cast<double>(k) * x_lo / L);
                dft_inplace(prod, +1);
                for (std::size_t j = 0; j < m; ++j) {
                    const double sc = std::abs(prod[j]) / L;
                    if (sc > best[n].score) {
                        const double x0 = x_lo + L * static_cast<double>(j) / static_cast<double>(m);
                        best[n] = {sc, tk.index, ProfileParams{tk.h, x0, tk.xi0, t0}};
                    }
                }
            }
        });
        Candidate out;
        for (const auto& c : best)
            if (c.score > out.score) out = c;
        return out;
    }

    double score(const cvec& r, const Template& t, const ProfileParams& p) const {
        if (!(p.h > 0.0)) return -1.0;
        const Atom a = atom(t, p);
        return a.empty() ? -1.0 : std::abs(project(r, a));
    }

    // Coordinate pattern search around the lattice optimum.
    Candidate refine(const cvec& r, Candidate c) const {
        const Template& t = templates_[c.index];
        double steps[4] = {0.5, 0.5 * c.p.h * t.f.space.width() / 8.0, 0.5 * cfg_.xi_step * t.spectral_spread / c.p.h,
                           0.0};
        if (cfg_.times.size() > 1) {
            double gap = std::numeric_limits<double>::infinity();
            for (std::size_t i = 1; i < cfg_.times.size(); ++i)
                gap = std::min(gap, std::abs(cfg_.times[i] - cfg_.times[i - 1]));
            steps[3] = 0.5 * gap;
        }
        auto moved = [](ProfileParams p, int coord, double d) {
            switch (coord) {
                case 0: p.h *= std::exp2(d); break;
                case 1: p.x0 += d; break;
                case 2: p.xi0 += d; break;
                default: p.t0 += d; break;
            }
            return p;
        };
        for (int round = 0; round < cfg_.refine_steps; ++round)
            for (int coord = 0; coord < 4; ++coord) {
                if (steps[coord] == 0.0) continue;
                bool improved = false;
                for (double sgn : {1.0, -1.0}) {
                    const ProfileParams q = moved(c.p, coord, sgn * steps[coord]);
                    const double sc = score(r, t, q);
                    if (sc > c.score) {
                        c.score = sc;
                        c.p = q;
                        improved = true;
                        break;
                    }
                }
                if (!improved) steps[coord] *= 0.5;
            }
        return c;
    }

    const Template& tmpl(std::size_t i) const { return templates_[i]; }

private:
    SpectralGrid g_;
    double alpha_;
    ExtractionConfig cfg_;
    std::vector<Template> templates_;
};

}  // namespace

Extraction greedy_bubble_extraction(const WaveFunction& u, double alpha, const std::vector<WaveFunction>& templates,
                                    const ExtractionConfig& cfg) {
    check_alpha(alpha);
    if (templates.empty()) fail(errc::invalid_input, "no extraction templates");
    if (cfg.times.empty()) fail(errc::invalid_input, "extraction needs at least one time on the lattice");
    require_resolved(u, "extraction datum");
    for (const auto& t : templates)
        if (t.grid.size() == 0) fail(errc::invalid_input, "empty template");
    const Extractor ex(u, alpha, templates, cfg);
    Extraction out;
    cvec r = forward_fourier(u).values;
    out.total_mass = std::pow(l2_norm(u), 2);
    if (out.total_mass > 0.0) {
        for (int b = 0; b < cfg.max_bubbles; ++b) {
            Candidate c = ex.lattice_search(r);
            if (c.score < 0.0) break;
            c = ex.refine(r, c);
            const Atom a = ex.atom(ex.tmpl(c.index), c.p);
            const cplx coef = ex.project(r, a);
            const double mass = std::norm(coef);
            if (mass < cfg.mass_floor * out.total_mass) break;
            Spectrum bs(u.grid);
            for (std::size_t k = 0; k < a.values.size(); ++k) {
                bs.values[a.first + k] = coef * a.values[k];
                r[a.first + k] -= bs.values[a.first + k];
            }
            out.bubbles.push_back({c.p, c.index, coef, mass, inverse_fourier(bs)});
        }
    }
    out.residual = inverse_fourier(Spectrum(u.grid, r));
    out.residual_mass = std::pow(l2_norm(out.residual), 2);
    double captured = 0.0;
    for (const auto& b : out.bubbles) captured += b.mass;
    out.ledger_gap = out.total_mass - captured - out.residual_mass;
    for (std::size_t i = 0; i < out.bubbles.size(); ++i)
        for (std::size_t l = i + 1; l < out.bubbles.size(); ++l)
            out.cross_terms += 2.0 * std::real(inner_product(out.bubbles[i].profile, out.bubbles[l].profile));
    return out;
}

}  // namespace strichartz
