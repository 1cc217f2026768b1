#include "strichartz/spectral_core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "strichartz/error.hpp"

namespace strichartz {

void ProfileParams::validate() const {
    if (!(h > 0.0) || !std::isfinite(h) || !std::isfinite(x0) || !std::isfinite(xi0) ||
        !std::isfinite(t0))
        fail(errc::invalid_input, "profile parameters must be finite with h > 0");
}

SpectralGrid::SpectralGrid(std::size_t num_points, double extent) : n_(num_points), extent_(extent) {
    if (!is_pow2(num_points) || num_points < 2)
        fail(errc::invalid_input, "grid size must be a power of two >= 2");
    if (!(extent > 0.0) || !std::isfinite(extent))
        fail(errc::invalid_input, "grid extent must be positive");
}

std::vector<double> SpectralGrid::space_axis() const {
    std::vector<double> a(n_);
    for (std::size_t j = 0; j < n_; ++j) a[j] = x(j);
    return a;
}

std::vector<double> SpectralGrid::freq_axis() const {
    std::vector<double> a(n_);
    for (std::size_t k = 0; k < n_; ++k) a[k] = xi(k);
    return a;
}

WaveFunction::WaveFunction(const SpectralGrid& g, cvec v) : grid(g), values(std::move(v)) {
    if (values.size() != grid.size()) fail(errc::grid_mismatch, "sample count differs from grid size");
}

Spectrum::Spectrum(const SpectralGrid& g, cvec v) : grid(g), values(std::move(v)) {
    if (values.size() != grid.size()) fail(errc::grid_mismatch, "sample count differs from grid size");
}

namespace {

inline double alt(std::size_t j) { return (j & 1u) ? -1.0 : 1.0; }

}  // namespace

Spectrum forward_fourier(const WaveFunction& u) {
    const std::size_t n = u.grid.size();
    if (u.values.size() != n) fail(errc::grid_mismatch, "sample count differs from grid size");
    cvec a(n);
    for (std::size_t j = 0; j < n; ++j) a[j] = alt(j) * u.values[j];
    dft_inplace(a, -1);
    // (-1)^{k - N/2} = (-1)^k because N/2 is even for N >= 4; keep it general.
    const double dx = u.grid.spacing();
    const std::size_t half = n / 2;
    for (std::size_t k = 0; k < n; ++k) a[k] *= dx * alt(k + half);
    return Spectrum(u.grid, std::move(a));
}

WaveFunction inverse_fourier(const Spectrum& f) {
    const std::size_t n = f.grid.size();
    if (f.values.size() != n) fail(errc::grid_mismatch, "sample count differs from grid size");
    cvec a(n);
    const std::size_t half = n / 2;
    for (std::size_t k = 0; k < n; ++k) a[k] = alt(k + half) * f.values[k];
    dft_inplace(a, +1);
    const double scale = 1.0 / (static_cast<double>(n) * f.grid.spacing());
    for (std::size_t j = 0; j < n; ++j) a[j] *= scale * alt(j);
    return WaveFunction(f.grid, std::move(a));
}

double l2_norm(const WaveFunction& u) {
    double s = 0.0;
    for (const auto& v : u.values) s += std::norm(v);
    return std::sqrt(s * u.grid.spacing());
}

double l2_norm(const Spectrum& f) {
    double s = 0.0;
    for (const auto& v : f.values) s += std::norm(v);
    return std::sqrt(s * f.grid.freq_spacing());
}

cplx inner_product(const WaveFunction& a, const WaveFunction& b) {
    if (!(a.grid == b.grid)) fail(errc::grid_mismatch, "inner product of functions on different grids");
    cplx s = 0.0;
    for (std::size_t j = 0; j < a.values.size(); ++j) s += a.values[j] * std::conj(b.values[j]);
    return s * a.grid.spacing();
}

double l2_distance(const WaveFunction& a, const WaveFunction& b) {
    if (!(a.grid == b.grid)) fail(errc::grid_mismatch, "distance between functions on different grids");
    double s = 0.0;
    for (std::size_t j = 0; j < a.values.size(); ++j) s += std::norm(a.values[j] - b.values[j]);
    return std::sqrt(s * a.grid.spacing());
}

WaveFunction normalized(const WaveFunction& u) {
    const double n = l2_norm(u);
    if (!(n > 0.0)) fail(errc::zero_datum, "cannot normalize the zero function");
    WaveFunction out = u;
    for (auto& v : out.values) v /= n;
    return out;
}

WaveFunction sample_function(const SpectralGrid& g, const std::function<cplx(double)>& f) {
    WaveFunction u(g);
    for (std::size_t j = 0; j < g.size(); ++j) u.values[j] = f(g.x(j));
    return u;
}

Spectrum sample_spectrum(const SpectralGrid& g, const std::function<cplx(double)>& f) {
    Spectrum s(g);
    for (std::size_t k = 0; k < g.size(); ++k) s.values[k] = f(g.xi(k));
    return s;
}

WaveFunction gaussian_packet(const SpectralGrid& g, double x0, double xi0, double h) {
    if (!(h > 0.0)) fail(errc::invalid_input, "gaussian width must be positive");
    if (std::abs(xi0) + 4.0 / h >= g.nyquist()) {
        std::ostringstream os;
        os << "|xi0| + 4/h = " << std::abs(xi0) + 4.0 / h << " exceeds the grid band " << g.nyquist();
        fail(errc::grid_underresolved, os.str());
    }
    if (std::abs(x0) + 5.3 * h > 0.5 * g.extent()) {
        std::ostringstream os;
        os << "packet at " << x0 << " with width " << h << " does not fit in the window";
        fail(errc::grid_underresolved, os.str());
    }
    const double c = std::pow(2.0 / kPi, 0.25) / std::sqrt(h);
    return sample_function(g, [&](double x) {
        const double y = (x - x0) / h;
        return c * std::exp(-y * y) * std::polar(1.0, x * xi0);
    });
}

WaveFunction hermite_function(const SpectralGrid& g, int n) {
    if (n < 0) fail(errc::invalid_input, "hermite order must be nonnegative");
    if (std::sqrt(2.0 * n + 1.0) + 6.0 > std::min(0.5 * g.extent(), g.nyquist()))
        fail(errc::grid_underresolved, "grid too small for the requested hermite order");
    const double c0 = std::pow(kPi, -0.25);
    return sample_function(g, [&](double x) {
        double prev = 0.0;
        double cur = c0 * std::exp(-0.5 * x * x);
        for (int k = 0; k < n; ++k) {
            const double next = std::sqrt(2.0 / (k + 1)) * x * cur - std::sqrt(double(k) / (k + 1)) * prev;
            prev = cur;
            cur = next;
        }
        return cplx(cur, 0.0);
    });
}

std::vector<WaveFunction> hermite_dictionary(const SpectralGrid& g, int count) {
    std::vector<WaveFunction> d;
    d.reserve(static_cast<std::size_t>(std::max(count, 0)));
    for (int n = 0; n < count; ++n) d.push_back(hermite_function(g, n));
    return d;
}

namespace {

// e^{i phase} with the phase reduced in extended precision, so chirps with
// large quadratic arguments keep their accuracy.
inline cplx unit_phase(long double phase) {
    const long double two_pi = 2.0L * 3.141592653589793238462643383279502884L;
    long double r = std::fmod(phase, two_pi);
    return std::polar(1.0, static_cast<double>(r));
}

}  // namespace

cvec chirp_sum(const cvec& a, long double theta, std::size_t count) {
    const std::size_t n = a.size();
    cvec out(count, cplx(0.0));
    if (count == 0 || n == 0) return out;
    // jk = (j^2 + k^2 - (k-j)^2)/2 turns the sum into a convolution.
    const std::size_t m = next_pow2(n + count - 1);
    cvec A(m, cplx(0.0)), B(m, cplx(0.0));
    for (std::size_t j = 0; j < n; ++j) {
        const long double jj = static_cast<long double>(j);
        A[j] = a[j] * unit_phase(theta * jj * jj / 2.0L);
    }
    for (std::size_t d = 0; d < count; ++d) {
        const long double dd = static_cast<long double>(d);
        B[d] = unit_phase(-theta * dd * dd / 2.0L);
    }
    for (std::size_t d = 1; d < n; ++d) {
        const long double dd = static_cast<long double>(d);
        B[m - d] = unit_phase(-theta * dd * dd / 2.0L);
    }
    dft_inplace(A, -1);
    dft_inplace(B, -1);
    for (std::size_t i = 0; i < m; ++i) A[i] *= B[i];
    dft_inplace(A, +1);
    const double inv_m = 1.0 / static_cast<double>(m);
    for (std::size_t k = 0; k < count; ++k) {
        const long double kk = static_cast<long double>(k);
        out[k] = A[k] * inv_m * unit_phase(theta * kk * kk / 2.0L);
    }
    return out;
}

cvec sample_affine(const Spectrum& f, double a, double b, std::size_t count) {
    const std::size_t n = f.grid.size();
    const double L = f.grid.extent();
    // u(y_j) = (1/L) sum_k F_k e^{i xi_k (a + b j)}
    //        = e^{-i theta N j / 2} sum_k c_k e^{i theta k j},  theta = dxi b.
    const long double theta = static_cast<long double>(f.grid.freq_spacing()) * b;
    cvec c(n);
    for (std::size_t k = 0; k < n; ++k)
        c[k] = f.values[k] * unit_phase(static_cast<long double>(f.grid.xi(k)) * a) / L;
    cvec out = chirp_sum(c, theta, count);
    const long double half_n = static_cast<long double>(n) / 2.0L;
    for (std::size_t j = 0; j < count; ++j) {
        const double y = a + b * static_cast<double>(j);
        if (y < -0.5 * L || y >= 0.5 * L) {
            out[j] = 0.0;
            continue;
        }
        out[j] *= unit_phase(-theta * half_n * static_cast<long double>(j));
    }
    return out;
}

cvec fourier_samples(const WaveFunction& u, double xi_start, double dxi, std::size_t count) {
    // F(xi_k) = dx sum_j u_j e^{-i x_j xi_k},  xi_k = xi_start + k dxi.
    const std::size_t n = u.grid.size();
    const double dx = u.grid.spacing();
    const double x0 = u.grid.x(0);
    cvec a(n);
    for (std::size_t j = 0; j < n; ++j)
        a[j] = u.values[j] * unit_phase(-static_cast<long double>(j) * dx * xi_start);
    cvec out = chirp_sum(a, -static_cast<long double>(dx) * dxi, count);
    for (std::size_t k = 0; k < count; ++k) {
        const double xi = xi_start + dxi * static_cast<double>(k);
        out[k] *= dx * unit_phase(-static_cast<long double>(x0) * xi);
    }
    return out;
}

cvec sample_affine(const WaveFunction& u, double a, double b, std::size_t count) {
    return sample_affine(forward_fourier(u), a, b, count);
}

WaveFunction resample(const WaveFunction& u, const SpectralGrid& target) {
    if (target == u.grid) return u;
    return WaveFunction(target, sample_affine(u, target.x(0), target.spacing(), target.size()));
}

WaveFunction zero_pad(const WaveFunction& u, std::size_t n) {
    const std::size_t n0 = u.grid.size();
    if (n < n0 || !is_pow2(n)) fail(errc::invalid_input, "padded size must be a larger power of two");
    if (n == n0) return u;
    SpectralGrid g(n, u.grid.spacing() * static_cast<double>(n));
    WaveFunction out(g);
    // x = 0 sits at index N/2 on both grids.
    const std::size_t off = n / 2 - n0 / 2;
    std::copy(u.values.begin(), u.values.end(), out.values.begin() + static_cast<std::ptrdiff_t>(off));
    return out;
}

Spectrum multiply_spectrum(const Spectrum& f, const std::function<cplx(double)>& m) {
    Spectrum out = f;
    for (std::size_t k = 0; k < f.grid.size(); ++k) out.values[k] *= m(f.grid.xi(k));
    return out;
}

WaveFunction apply_multiplier(const WaveFunction& u, const std::function<cplx(double)>& m) {
    return inverse_fourier(multiply_spectrum(forward_fourier(u), m));
}

WaveFunction translate(const WaveFunction& u, double shift) {
    return apply_multiplier(u, [shift](double xi) { return std::polar(1.0, -xi * shift); });
}

namespace {

void check_mapped_support(const WaveFunction& u, const ProfileParams& p) {
    const double floor = 1e-8;
    const Extent sx = spatial_extent(u, floor);
    const Spectrum f = forward_fourier(u);
    const Extent sf = spectral_extent(f, floor);
    const double half = 0.5 * u.grid.extent();
    const double lo = p.x0 + p.h * sx.lo, hi = p.x0 + p.h * sx.hi;
    const double klo = p.xi0 + sf.lo / p.h, khi = p.xi0 + sf.hi / p.h;
    if (lo < -half || hi >= half) {
        std::ostringstream os;
        os << "transformed support [" << lo << ", " << hi << "] leaves the window of half-width " << half;
        fail(errc::grid_underresolved, os.str());
    }
    const double nyq = u.grid.nyquist();
    if (klo <= -nyq || khi >= nyq) {
        std::ostringstream os;
        os << "transformed band [" << klo << ", " << khi << "] exceeds the grid band " << nyq;
        fail(errc::grid_underresolved, os.str());
    }
}

}  // namespace

WaveFunction geometric_transform(const WaveFunction& u, const ProfileParams& p) {
    p.validate();
    if (p.h == 1.0 && p.x0 == 0.0 && p.xi0 == 0.0) return u;
    check_mapped_support(u, p);
    const SpectralGrid& g = u.grid;
    WaveFunction out(g);
    if (p.h == 1.0) {
        out = translate(u, p.x0);
    } else {
        const double a = (g.x(0) - p.x0) / p.h;
        const double b = g.spacing() / p.h;
        out.values = sample_affine(u, a, b, g.size());
        const double c = 1.0 / std::sqrt(p.h);
        for (auto& v : out.values) v *= c;
    }
    if (p.xi0 != 0.0) {
        for (std::size_t j = 0; j < g.size(); ++j)
            out.values[j] *= unit_phase(static_cast<long double>(g.x(j) - p.x0) * p.xi0);
    }
    return out;
}

WaveFunction apply_symmetry(const WaveFunction& u, const ProfileParams& p, double alpha) {
    if (!(alpha > 1.0)) fail(errc::invalid_alpha, "alpha must exceed 1");
    WaveFunction out = geometric_transform(u, p);
    if (p.t0 != 0.0) {
        const double t0 = p.t0;
        out = apply_multiplier(out, [t0, alpha](double xi) {
            return std::polar(1.0, t0 * std::pow(std::abs(xi), alpha));
        });
        require_resolved(out, "time-translated profile");
    }
    return out;
}

Extent spatial_extent(const WaveFunction& u, double rel_floor) {
    double mx = 0.0;
    for (const auto& v : u.values) mx = std::max(mx, std::abs(v));
    Extent e;
    if (mx == 0.0) return e;
    const double thr = rel_floor * mx;
    std::size_t lo = u.values.size(), hi = 0;
    for (std::size_t j = 0; j < u.values.size(); ++j)
        if (std::abs(u.values[j]) >= thr) {
            lo = std::min(lo, j);
            hi = j;
        }
    e.lo = u.grid.x(lo);
    e.hi = u.grid.x(hi);
    return e;
}

Extent spectral_extent(const Spectrum& f, double rel_floor) {
    double mx = 0.0;
    for (const auto& v : f.values) mx = std::max(mx, std::abs(v));
    Extent e;
    if (mx == 0.0) return e;
    const double thr = rel_floor * mx;
    std::size_t lo = f.values.size(), hi = 0;
    for (std::size_t k = 0; k < f.values.size(); ++k)
        if (std::abs(f.values[k]) >= thr) {
            lo = std::min(lo, k);
            hi = k;
        }
    e.lo = f.grid.xi(lo);
    e.hi = f.grid.xi(hi);
    return e;
}

double centroid(const WaveFunction& u) {
    double m = 0.0, s = 0.0;
    for (std::size_t j = 0; j < u.values.size(); ++j) {
        const double w = std::norm(u.values[j]);
        m += w;
        s += w * u.grid.x(j);
    }
    if (m == 0.0) fail(errc::zero_datum, "centroid of the zero function");
    return s / m;
}

double spread(const WaveFunction& u) {
    const double c = centroid(u);
    double m = 0.0, s = 0.0;
    for (std::size_t j = 0; j < u.values.size(); ++j) {
        const double w = std::norm(u.values[j]);
        const double d = u.grid.x(j) - c;
        m += w;
        s += w * d * d;
    }
    return std::sqrt(s / m);
}

double mean_frequency(const Spectrum& f) {
    double m = 0.0, s = 0.0;
    for (std::size_t k = 0; k < f.values.size(); ++k) {
        const double w = std::norm(f.values[k]);
        m += w;
        s += w * f.grid.xi(k);
    }
    if (m == 0.0) fail(errc::zero_datum, "mean frequency of the zero function");
    return s / m;
}

namespace {

double edge_ratio(const cvec& v) {
    const std::size_t n = v.size();
    const std::size_t band = std::max<std::size_t>(2, n / 32);
    double mx = 0.0, edge = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double a = std::abs(v[j]);
        mx = std::max(mx, a);
        if (j < band || j + band >= n) edge = std::max(edge, a);
    }
    return mx > 0.0 ? edge / mx : 0.0;
}

}  // namespace

double edge_amplitude(const WaveFunction& u) { return edge_ratio(u.values); }

double spectral_edge_amplitude(const Spectrum& f) { return edge_ratio(f.values); }

void require_resolved(const WaveFunction& u, const char* context, double tol) {
    const double e = edge_amplitude(u);
    if (e > tol) {
        std::ostringstream os;
        os << context << ": amplitude " << e << " (relative) at the window edge";
        fail(errc::grid_underresolved, os.str());
    }
    const double s = spectral_edge_amplitude(forward_fourier(u));
    if (s > tol) {
        std::ostringstream os;
        os << context << ": amplitude " << s << " (relative) at the band edge";
        fail(errc::grid_underresolved, os.str());
    }
}

}  // namespace strichartz
