#pragma once

#include <cstddef>
#include <vector>

#include "strichartz/spectral_core.hpp"

namespace strichartz {

// t_k = center + (k - K) dt for k = 0..2K.
class TimeAxis {
public:
    TimeAxis() = default;
    TimeAxis(double center, std::size_t half_steps, double dt);

    std::size_t size() const { return 2 * half_ + 1; }
    std::size_t half_steps() const { return half_; }
    double center() const { return center_; }
    double step() const { return dt_; }
    double halfwidth() const { return dt_ * static_cast<double>(half_); }
    double operator[](std::size_t k) const {
        return center_ + (static_cast<double>(k) - static_cast<double>(half_)) * dt_;
    }
    std::vector<double> times() const;
    bool operator==(const TimeAxis&) const = default;

private:
    double center_ = 0.0;
    std::size_t half_ = 0;
    double dt_ = 1.0;
};

// Samples of (t, x) -> [D^s e^{it|grad|^alpha} u](x), time-major.
struct SpaceTimeField {
    TimeAxis time;
    SpectralGrid grid;
    double alpha = 2.0;
    double s = 0.0;
    cvec values;

    SpaceTimeField() = default;
    SpaceTimeField(const TimeAxis& t, const SpectralGrid& g, double alpha_, double s_)
        : time(t), grid(g), alpha(alpha_), s(s_), values(t.size() * g.size()) {}

    std::size_t slices() const { return time.size(); }
    cplx* slice(std::size_t k) { return values.data() + k * grid.size(); }
    const cplx* slice(std::size_t k) const { return values.data() + k * grid.size(); }
};

void check_alpha(double alpha);

// |xi|^s with the zero mode mapped to 0 (s = 0 is the identity).
double weight(double xi, double s);
// Flow multiplier e^{-i t |xi|^alpha}.
cplx flow_symbol(double xi, double t, double alpha);

WaveFunction fractional_flow(const WaveFunction& u, double t, double alpha);
WaveFunction fractional_derivative(const WaveFunction& u, double s);
SpaceTimeField evolve_window(const WaveFunction& u, double alpha, double s, const TimeAxis& time);

}  // namespace strichartz
