#pragma once

#include <vector>

#include "strichartz/spacetime_norms.hpp"

namespace strichartz {

// e^{i x xi} phi on phi's grid; throws grid-underresolved when the shifted
// spectrum reaches the band edge.
WaveFunction modulate(const WaveFunction& phi, double xi);

struct LimitPoint {
    double xi = 0.0;
    double value = 0.0;
    double target = 0.0;
    double rel_error = 0.0;  // |value - target| / target, 0 when there is no target
    NormReport report;
};

// ((alpha^2 - alpha)/2)^{-1/q} ||e^{it d_xx} phi||_{L^q L^r} / ||phi||_2.
double schrodinger_limit_target(const WaveFunction& phi, double alpha, double q, double r,
                                const WindowConfig& cfg = {});

// Weighted alpha-Strichartz ratio of e^{i x xi} phi for each xi, against the
// large-modulation limit.
std::vector<LimitPoint> schrodinger_limit_curve(const WaveFunction& phi, double alpha, double q, double r,
                                                const std::vector<double>& xi_list, const WindowConfig& cfg = {});

// ||e^{it|grad|^alpha} e^{i x xi} phi||_{L^{2alpha+2}_{t,x}} for each xi (no weight).
std::vector<LimitPoint> vanishing_modulation_curve(const WaveFunction& phi, double alpha,
                                                   const std::vector<double>& xi_list, const WindowConfig& cfg = {});

// True when the sequence is nonincreasing from some index on, with at least
// the last two steps included.
bool eventually_decreasing(const std::vector<double>& v);

// Constants of the dominating function: amplitude C and regime slope c.
struct DominatingScale {
    double C = 1.0;
    double c = 2.0;
};

// C [(1+|t|)^{3/(2q)} (1+|x|)^{(q-3)/(2q)}]^{-1} for |x| <= c|t|, and
// C [(1+|t|)^{3/q} (1+|x|)^{(q-3)/q}]^{-1} otherwise. q = 6 gives the
// exponents -1/4 and -1/2 on the product (1+|t|)(1+|x|).
double dominating_function(double t, double x, double q, const DominatingScale& scale);

// |D^s e^{it|grad|^alpha}(e^{i x xi} phi)| in the frame that turns the flow
// into a Schrodinger flow: t = s / kappa, x = y + v t with
// kappa = alpha(alpha-1)/2 xi^{alpha-2}, v = alpha xi^{alpha-1}, divided by
// xi^{(alpha-2)/q}. Rows are s values, columns y values.
std::vector<std::vector<double>> schrodinger_frame_modulus(const WaveFunction& phi, double alpha, double q, double xi,
                                                           const std::vector<double>& s_list,
                                                           const std::vector<double>& y_list);

struct DominationSweep {
    DominatingScale scale;         // C fitted at the first xi, times the margin
    std::vector<double> xi;
    std::vector<double> max_ratio;  // max over the lattice of modulus / F, per xi
    bool dominated = false;         // every max_ratio <= 1
};

// Fits C on the first xi, then holds it fixed along the rest of xi_list.
DominationSweep domination_sweep(const WaveFunction& phi, double alpha, double q, const std::vector<double>& xi_list,
                                 double s_max, double y_max, std::size_t lattice, double margin = 1.25,
                                 double regime_slope = 2.0);

// sqrt(n) e^{i n^2 x} e^{-(n (x - x0))^2}, normalized, on g.
WaveFunction concentrating_sequence(const SpectralGrid& g, int n, double x0);
// Mass of u outside (x0 - rho, x0 + rho).
double mass_outside(const WaveFunction& u, double x0, double rho);
// The same for the concentrating sequence, in closed form: erfc(sqrt(2) n rho).
double concentrating_mass_outside(int n, double rho);

}  // namespace strichartz
