#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "strichartz/fft.hpp"

namespace strichartz {

inline constexpr double kPi = 3.14159265358979323846264338327950288;

// One element of the symmetry / profile group: scale h, translation x0,
// modulation xi0, time translation t0.
struct ProfileParams {
    double h = 1.0;
    double x0 = 0.0;
    double xi0 = 0.0;
    double t0 = 0.0;

    void validate() const;
    bool operator==(const ProfileParams&) const = default;
};

// Uniform periodic grid on [-L/2, L/2) with the matched frequency axis
// xi_k = (k - N/2) * 2pi/L, which is ascending and contains 0 at k = N/2.
class SpectralGrid {
public:
    SpectralGrid() = default;
    SpectralGrid(std::size_t num_points, double extent);

    std::size_t size() const { return n_; }
    double extent() const { return extent_; }
    double spacing() const { return extent_ / static_cast<double>(n_); }
    double freq_spacing() const { return 2.0 * kPi / extent_; }
    double nyquist() const { return kPi / spacing(); }
    double x(std::size_t j) const { return -0.5 * extent_ + static_cast<double>(j) * spacing(); }
    double xi(std::size_t k) const {
        return (static_cast<double>(k) - 0.5 * static_cast<double>(n_)) * freq_spacing();
    }
    std::vector<double> space_axis() const;
    std::vector<double> freq_axis() const;

    bool operator==(const SpectralGrid& o) const { return n_ == o.n_ && extent_ == o.extent_; }

private:
    std::size_t n_ = 0;
    double extent_ = 0.0;
};

struct WaveFunction {
    SpectralGrid grid;
    cvec values;

    WaveFunction() = default;
    explicit WaveFunction(const SpectralGrid& g) : grid(g), values(g.size()) {}
    WaveFunction(const SpectralGrid& g, cvec v);
};

// Samples of F[u](xi_k) on grid.freq_axis().
struct Spectrum {
    SpectralGrid grid;
    cvec values;

    Spectrum() = default;
    explicit Spectrum(const SpectralGrid& g) : grid(g), values(g.size()) {}
    Spectrum(const SpectralGrid& g, cvec v);
};

// F[u](xi) = int e^{-i x xi} u(x) dx, rectangle rule with the window-offset phase.
Spectrum forward_fourier(const WaveFunction& u);
WaveFunction inverse_fourier(const Spectrum& f);

double l2_norm(const WaveFunction& u);
double l2_norm(const Spectrum& f);
// int a conj(b) dx
cplx inner_product(const WaveFunction& a, const WaveFunction& b);
double l2_distance(const WaveFunction& a, const WaveFunction& b);
WaveFunction normalized(const WaveFunction& u);

WaveFunction sample_function(const SpectralGrid& g, const std::function<cplx(double)>& f);
Spectrum sample_spectrum(const SpectralGrid& g, const std::function<cplx(double)>& f);

// Unit-L2 h^{-1/2} e^{i x xi0} e^{-((x-x0)/h)^2}.
WaveFunction gaussian_packet(const SpectralGrid& g, double x0, double xi0, double h);
// Unit-L2 Hermite function of order n (e^{-x^2/2} family).
WaveFunction hermite_function(const SpectralGrid& g, int n);
std::vector<WaveFunction> hermite_dictionary(const SpectralGrid& g, int count);

// Values of the trigonometric interpolant of u at y_j = a + b j, j < count.
// Points outside the window [-L/2, L/2) are set to zero.
cvec sample_affine(const Spectrum& f, double a, double b, std::size_t count);
// S_k = sum_j a_j e^{i theta j k} for k < count (chirp-z transform).
cvec chirp_sum(const cvec& a, long double theta, std::size_t count);
// Rectangle-rule F[u](xi_start + k dxi) for k < count, at arbitrary frequencies.
cvec fourier_samples(const WaveFunction& u, double xi_start, double dxi, std::size_t count);
cvec sample_affine(const WaveFunction& u, double a, double b, std::size_t count);

// u re-expressed on another grid (interpolant, zero outside u's window).
WaveFunction resample(const WaveFunction& u, const SpectralGrid& target);
// Same spacing, window enlarged to n points; exact for functions vanishing at the edges.
WaveFunction zero_pad(const WaveFunction& u, std::size_t n);

Spectrum multiply_spectrum(const Spectrum& f, const std::function<cplx(double)>& m);
WaveFunction apply_multiplier(const WaveFunction& u, const std::function<cplx(double)>& m);
WaveFunction translate(const WaveFunction& u, double shift);

// h^{-1/2} e^{i(x-x0)xi0} u((x-x0)/h), evaluated on u's grid.
WaveFunction geometric_transform(const WaveFunction& u, const ProfileParams& p);
// e^{-i t0 |grad|^alpha} applied after geometric_transform.
WaveFunction apply_symmetry(const WaveFunction& u, const ProfileParams& p, double alpha);

struct Extent {
    double lo = 0.0;
    double hi = 0.0;
    double width() const { return hi - lo; }
};
// Smallest interval holding every sample with |value| >= rel_floor * max.
Extent spatial_extent(const WaveFunction& u, double rel_floor);
Extent spectral_extent(const Spectrum& f, double rel_floor);

double centroid(const WaveFunction& u);
double spread(const WaveFunction& u);  // standard deviation of |u|^2
double mean_frequency(const Spectrum& f);

// Largest amplitude in the outer bands of the window, relative to the peak,
// in space and frequency respectively.
double edge_amplitude(const WaveFunction& u);
double spectral_edge_amplitude(const Spectrum& f);

inline constexpr double kEdgeTolerance = 1e-6;
// Throws grid-underresolved when u is not small near the window edges in
// space or in frequency.
void require_resolved(const WaveFunction& u, const char* context, double tol = kEdgeTolerance);

}  // namespace strichartz
