#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "strichartz/propagator.hpp"
#include "strichartz/spacetime_norms.hpp"

namespace strichartz {

// int D^s e^{-it|grad|^alpha} F(t, .) dt, rectangle rule over F.time.
WaveFunction adjoint_extension(const SpaceTimeField& F, double alpha, double s);

// Which functional the search maximizes.
enum class SearchMode {
    strichartz,   // weight (alpha - 2)/q, admissible non-endpoint (q, r)
    nonendpoint,  // q = r = 2 alpha + 2, no weight
};

struct ExtremizerConfig {
    SearchMode mode = SearchMode::strichartz;
    std::size_t grid_points = 2048;
    double extent = 0.0;       // 0: Nyquist 4x the band, or wider so the band edge cannot wrap
    std::size_t time_slices = 512;
    double halfwidth = 0.0;    // 0: 32 dispersive times of the unit-spread Gaussian
    double band = 0.0;         // 0: (time_slices / (2 halfwidth))^{1/alpha}, clamped to [2, 8]
    int max_iterations = 300;
    double ratio_tol = 1e-5;
    int patience = 3;
    double relaxation = 1.0;   // u <- (1 - theta) u + theta step
    double dip_tol = 1e-3;     // relative drop counted as a dip
    int max_dips = 8;          // more dips than this is "stalled"
    std::uint64_t seed = 1;
    std::optional<WaveFunction> initial;  // replaces the random start when set
    WindowConfig window;       // used for the final adaptive ratio
};

// Search parameters after the automatic choices have been resolved.
struct SearchSetup {
    double s = 0.0;
    double q = 0.0;
    double r = 0.0;
    SpectralGrid grid;
    TimeAxis time;
    double band = 0.0;
};

SearchSetup resolve_setup(double alpha, double q, double r, const ExtremizerConfig& cfg);

struct ExtremizerResult {
    WaveFunction profile;               // unit L^2, symmetry-normalized
    std::vector<double> ratio_history;  // fixed-window ratio before each step
    bool converged = false;
    int iterations = 0;
    double residual = 0.0;              // L^2 size of the last update
    double final_ratio = 0.0;           // adaptive-window ratio of the profile
    NormReport final_report;
    SearchSetup setup;
};

ExtremizerResult extremize(double alpha, double q, double r, const ExtremizerConfig& cfg = {});

// Band-limited complex white noise with a Gaussian envelope of width L/16,
// unit L^2. Deterministic in the seed.
WaveFunction random_bandlimited(const SpectralGrid& g, double band, std::uint64_t seed);

// Quotients out the symmetries: time-translates so that t -> ||E u(t)||_r
// peaks at t = 0, removes the mean frequency when alpha = 2, moves the |u|^2
// centroid to 0, rescales the |u|^2 spread to 1 and rotates the phase so that
// F[u] is real positive at its peak. E carries the weight (alpha - 2)/q.
WaveFunction symmetry_normalize(const WaveFunction& u, double alpha, double q = 6.0, double r = 6.0);

// Time of the peak of t -> int |D^s e^{it|grad|^alpha} u|^r dx near the
// largest sample on [-halfwidth, halfwidth]; computed on u's own grid.
double peak_time(const WaveFunction& u, double alpha, double s, double r, double halfwidth);

}  // namespace strichartz
