#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "strichartz/spacetime_norms.hpp"

namespace strichartz {

using ParamSequence = std::vector<ProfileParams>;

// Backward flow by t0 of h^{-1/2} e^{i(x-x0)xi0} phi((x-x0)/h), on phi's grid;
// equals fractional_flow(geometric_transform(phi, p), -t0, alpha).
WaveFunction profile_operator(const WaveFunction& phi, const ProfileParams& p, double alpha);

// F[T(p) phi](xi) = e^{i t0 |xi|^alpha} h^{1/2} e^{-i x0 xi} F[phi](h(xi - xi0))
// at xi_start + k dxi, from phi's own samples (no window is needed for the
// transported profile).
cvec profile_spectrum(const WaveFunction& phi, const ProfileParams& p, double alpha, double xi_start, double dxi,
                      std::size_t count);

// <T(p_j) phi, T(p_k) psi>, by frequency quadrature.
cplx profile_inner(const WaveFunction& phi, const ProfileParams& pj, const WaveFunction& psi, const ProfileParams& pk,
                   double alpha);

// max over dictionary pairs of |<T(p_j) phi, T(p_k) psi>|.
double weak_overlap(const ProfileParams& pj, const ProfileParams& pk, double alpha,
                    const std::vector<WaveFunction>& dictionary);

// || D^s E T(p_j) phi_j * D^s E T(p_k) phi_k ||_{L^3_{t,x}}, s = (alpha-2)/6,
// with E = e^{it|grad|^alpha}. Time integral by adaptive Gauss-Kronrod with
// breakpoints at the two focus times, over octaves moving out from them; the
// octave partial sums are extrapolated with the epsilon algorithm and the
// search stops once successive extrapolations agree to rel_tol.
double cross_strichartz_norm(const WaveFunction& phi_j, const WaveFunction& phi_k, const ProfileParams& pj,
                             const ProfileParams& pk, double alpha, double rel_tol = 1e-5);

struct VdcOptions {
    // Use the polynomial symbol xi^alpha (integer alpha) instead of |xi|^alpha.
    bool integer_phase = false;
    double amplitude_floor = 1e-10;
};

// sup_x |[g_j]^{-1} e^{i t_j Lambda} e^{-i t_k Lambda} [g_k] phi| where g is the
// scale-translate-modulate part of the profile parameters.
double composed_sup_norm(const WaveFunction& phi, const ProfileParams& pj, const ProfileParams& pk, double alpha,
                         const VdcOptions& opt = {});

// Lower bound over the Fourier support of phi of |Psi^{(m)}| / m!, where Psi is
// the phase of the composed operator in the reduced variable.
double phase_coefficient(const WaveFunction& phi, const ProfileParams& pj, const ProfileParams& pk, double alpha,
                         int m, const VdcOptions& opt = {});

struct VdcFit {
    int m0 = 0;  // dominant diverging order (1: translation only, no decay predicted)
    double slope = 0.0;
    double residual = 0.0;
    std::vector<double> coefficient;  // |a_n^{m0}|
    std::vector<double> sup_norm;
};

// Regresses log sup-norm on log |a_n^{m0}| along the two sequences. m0 is the
// smallest order >= 2 whose coefficient diverges (grows 10x along the
// sequence), else 1 when only the linear coefficient diverges. Throws
// degenerate-sequence when none diverges.
VdcFit vdc_decay_fit(const WaveFunction& phi, const ParamSequence& pj, const ParamSequence& pk, double alpha,
                     const VdcOptions& opt = {});

struct ExtractionConfig {
    int max_bubbles = 8;
    double mass_floor = 1e-3;  // stop when a step captures less than this fraction of ||u||^2
    int scale_octaves = 4;     // h in 2^{-J..J}
    double xi_step = 0.5;      // modulation lattice step, in template spectral spreads / h
    std::vector<double> times = {0.0};
    int refine_steps = 12;
};

struct Bubble {
    ProfileParams params;
    std::size_t template_index = 0;
    cplx coefficient = 0.0;
    double mass = 0.0;  // |coefficient|^2
    WaveFunction profile;  // coefficient * T(params) template, on u's grid
};

struct Extraction {
    std::vector<Bubble> bubbles;
    WaveFunction residual;
    double total_mass = 0.0;
    double residual_mass = 0.0;
    // ||u||^2 - sum masses - ||residual||^2, and the bubble-bubble terms
    // 2 Re <b_i, b_l> summed over pairs.
    double ledger_gap = 0.0;
    double cross_terms = 0.0;
};

// Matching pursuit over profiles T(p) psi, psi from templates (unit L^2).
Extraction greedy_bubble_extraction(const WaveFunction& u, double alpha, const std::vector<WaveFunction>& templates,
                                    const ExtractionConfig& cfg = {});

}  // namespace strichartz
