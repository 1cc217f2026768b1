#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "strichartz/spacetime_norms.hpp"

namespace strichartz {

// 2^j [k, k+1).
struct DyadicInterval {
    int j = 0;
    long k = 0;

    double lo() const;
    double hi() const;
    double length() const;
};

struct DyadicSup {
    double value = 0.0;
    DyadicInterval argmax;
};

// sup over dyadic tau of |tau|^{1/2 - 1/p} ||F[u]||_{L^p(tau)}, with the
// L^p norm aggregated over the frequency bins inside tau and j ranging from
// ceil(log2 dxi) to floor(log2 of the frequency window).
DyadicSup dyadic_sup(const WaveFunction& u, double p);

// ||D^{(alpha-2)/6} e^{it|grad|^alpha} u||_{L^6} / (dyadic_sup(u, p)^{1/3} ||u||_2^{2/3}).
double refined_ratio(const WaveFunction& u, double p, double alpha, const WindowConfig& cfg = {});

struct WeightedForm {
    double value = 0.0;     // off-diagonal cells plus the diagonal band
    double diagonal = 0.0;  // share of value carried by cell pairs with |xi - eta| < dxi
};

// int int |F[f](xi) F[g](eta)|^{3/2} |xi - eta|^{-1/2} dxi deta, with the
// spectra taken constant on each frequency cell and the kernel integrated
// exactly over each pair of cells.
WeightedForm bilinear_weighted_form(const WaveFunction& f, const WaveFunction& g);

// ||D^s E f * D^s E g||_{L^3}^{3/2} / bilinear_weighted_form(f, g).value,
// s = (alpha - 2)/6.
double bilinear_ratio(const WaveFunction& f, const WaveFunction& g, double alpha, double rel_tol = 1e-5);

// |xi eta|^{(alpha-2)/4} / [alpha |xi|xi|^{alpha-2} - eta|eta|^{alpha-2}|]^{1/2}.
double jacobian_factor(double xi, double eta, double alpha);
// jacobian_factor * |xi - eta|^{1/2}.
double bound_check(double xi, double eta, double alpha);

struct LatticeSup {
    double value = 0.0;
    double xi = 0.0;
    double eta = 0.0;
};

// max of bound_check over the cell-centred n x n lattice on [-half, half]^2,
// skipping pairs closer than one lattice step to the diagonal.
LatticeSup bound_check_sup(double alpha, double half, std::size_t n);

struct RestrictionConstant {
    double constant = 0.0;  // max over the family
    std::size_t argmax = 0;
    std::vector<double> ratios;  // ||D^{(alpha-2)/q} E F||_{L^q} / ||F[F]||_inf per member
};

// Empirical constant of the localized restriction estimate over a family whose
// spectra live in [xi0 - R, xi0 + R].
RestrictionConstant localized_restriction_constant(const std::vector<WaveFunction>& family, double xi0, double R,
                                                   double q, double alpha, const WindowConfig& cfg = {});

// Test families from a line-oriented manifest: "<type> key=value ...", with
// '#' comments. Types:
//   gaussian      h x0 xi0
//   hermite       n h
//   concentrating n x0
//   two_bump      sep h phase
//   spectral_bump center radius amp freq   F[u] = bump((xi-center)/radius) e^{i amp cos(freq xi)}
// Members are unit-normalized except spectral_bump, whose peak spectrum is 1.
struct FamilyMember {
    std::string label;
    WaveFunction u;
};

std::vector<FamilyMember> read_family(std::istream& in, const SpectralGrid& g);
std::vector<FamilyMember> load_family(const std::string& path, const SpectralGrid& g);

}  // namespace strichartz
