#pragma once

#include <cstddef>
#include <limits>

#include "strichartz/propagator.hpp"
#include "strichartz/spectral_core.hpp"

namespace strichartz {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Controls the adaptive time window of the ratio functionals. The window
// starts at halfwidth_factor * tau (tau = dispersive_time_scale of the datum)
// unless initial_halfwidth is set, uses dt = tau / steps_per_tau unless dt is
// set, and doubles until the relative change is below tol.
struct WindowConfig {
    double tol = 1e-4;
    double initial_halfwidth = 0.0;
    double halfwidth_factor = 16.0;
    double dt = 0.0;
    double steps_per_tau = 8.0;
    double max_halfwidth = 0.0;  // 0: bounded by max_doublings only
    int max_doublings = 12;
    bool tail_correction = true;
    bool extrapolate = true;  // accept the delta-squared limit of successive doublings
    double amplitude_floor = 1e-6;  // spectral floor for the velocity range
    std::size_t max_grid_points = std::size_t(1) << 22;
};

// Spatial and velocity footprint of a datum under e^{it|grad|^alpha}.
struct Dispersion {
    Extent support;      // spatial support above the amplitude floor
    double v_min = 0.0;  // group velocities alpha|xi|^{alpha-1} sgn(xi) over the band
    double v_max = 0.0;
    double sigma_x = 0.0;
    double sigma_v = 0.0;
    double tau = 0.0;  // sigma_x / sigma_v
};

Dispersion dispersion_of(const WaveFunction& u, double alpha, double amplitude_floor = 1e-6);
double dispersive_time_scale(const WaveFunction& u, double alpha);

// Result of an adaptive space-time norm evaluation.
struct NormReport {
    double norm = 0.0;        // ||D^s e^{it|grad|^alpha} u||_{L^q_t L^r_x}
    double ratio = 0.0;       // norm / ||u||_2
    double halfwidth = 0.0;   // final window halfwidth
    double dt = 0.0;
    int doublings = 0;
    std::size_t max_grid_points = 0;
    double tail_fraction = 0.0;  // share of the q-th power supplied by the tail estimate
    bool extrapolated = false;
};

// (int (int |F|^r dx)^{q/r} dt)^{1/q} by rectangle rule; infinite exponents are maxima.
double mixed_norm(const SpaceTimeField& F, double q, double r);
double lp_norm(const SpaceTimeField& F, double p);

void check_exponents(double q, double r);
// Rejects endpoint and inadmissible pairs for the sharp-constant functionals.
void check_ratio_pair(double q, double r);

// Weighted norm with an explicit weight exponent s, any (q, r) with finite q.
NormReport weighted_norm(const WaveFunction& u, double alpha, double s, double q, double r,
                         const WindowConfig& cfg = {});

NormReport strichartz_ratio_report(const WaveFunction& u, double alpha, double q, double r,
                                   const WindowConfig& cfg = {});
double strichartz_ratio(const WaveFunction& u, double alpha, double q, double r,
                        const WindowConfig& cfg = {});
// ||e^{it|grad|^alpha} u||_{L^{2alpha+2}_{t,x}} / ||u||_2 for alpha >= 2.
double nonendpoint_ratio(const WaveFunction& u, double alpha, const WindowConfig& cfg = {});

}  // namespace strichartz
