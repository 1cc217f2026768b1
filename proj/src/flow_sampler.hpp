#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "strichartz/spacetime_norms.hpp"

namespace strichartz::detail {

// Evaluates slices of D^s e^{it|grad|^alpha} u at arbitrary t.
//
// The datum is first reduced to its effective band [lo, hi] (spectrum above
// the amplitude floor). Slices are computed on grids centered at the band
// midpoint, with spacing fine enough that the rectangle rule integrates
// |v|^r exactly for band-limited v, and with a window long enough that the
// spread over [-|t|, |t|] cannot wrap around.
class FlowSampler {
public:
    FlowSampler(const WaveFunction& u, double alpha, double s, double r, double amplitude_floor,
                std::size_t max_points);

    const Dispersion& dispersion() const { return disp_; }
    std::size_t points_for(double t) const;

    // The slice itself (carrier included), on the level grid for t.
    WaveFunction slice(double t);
    // int |v|^r dx for the slice at t, or max |v| when r is infinite.
    double power(double t);
    std::vector<double> powers(const std::vector<double>& times);

private:
    struct Level {
        SpectralGrid grid;
        cvec spec;  // F[u](center + grid.xi(k)) times the weight
        std::vector<double> lam;
    };
    std::shared_ptr<const Level> level(std::size_t n);
    void fill(const Level& lv, double t, cvec& out) const;

    WaveFunction u_;
    double alpha_;
    double s_;
    double r_;
    std::size_t max_points_;
    Dispersion disp_;
    double center_ = 0.0;
    double dx_ = 0.0;
    double min_window_ = 0.0;
    static constexpr double kCuspWindowFactor = 256.0;
    std::mutex mu_;
    std::map<std::size_t, std::shared_ptr<const Level>> levels_;
};

double slice_power(const cvec& v, double dx, double r);

}  // namespace strichartz::detail
