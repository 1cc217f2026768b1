#include "strichartz/bilinear_refined.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "strichartz/asymptotics.hpp"
#include "strichartz/error.hpp"
#include "strichartz/parallel.hpp"
#include "strichartz/profile_lab.hpp"
#include "strichartz/propagator.hpp"

namespace strichartz {

double DyadicInterval::lo() const { return std::ldexp(static_cast<double>(k), j); }
double DyadicInterval::hi() const { return std::ldexp(static_cast<double>(k + 1), j); }
double DyadicInterval::length() const { return std::ldexp(1.0, j); }

namespace {

constexpr double kBandFloor = 1e-12;

void check_p(double p) {
    if (!(p > 1.0) || std::isnan(p)) {
        std::ostringstream os;
        os << "dyadic functional needs p > 1 (got " << p << ")";
        fail(errc::invalid_p, os.str());
    }
}

}  // namespace

DyadicSup dyadic_sup(const WaveFunction& u, double p) {
    check_p(p);
    const Spectrum f = forward_fourier(u);
    if (spectral_edge_amplitude(f) > kBandFloor)
        fail(errc::grid_underresolved, "spectrum does not decay inside the frequency window");
    const SpectralGrid& g = u.grid;
    const std::size_t n = g.size();
    const double dxi = g.freq_spacing();
    std::vector<double> w(n);
    for (std::size_t m = 0; m < n; ++m) {
        const double a = std::abs(f.values[m]);
        w[m] = std::isinf(p) ? a : std::pow(a, p) * dxi;
    }
    const int j_min = static_cast<int>(std::ceil(std::log2(dxi) - 1e-12));
    const int j_max = static_cast<int>(std::floor(std::log2(dxi * static_cast<double>(n)) + 1e-12));
    const double e = 0.5 - (std::isinf(p) ? 0.0 : 1.0 / p);
    DyadicSup best;
    auto close = [&](int j, long k, double acc) {
        if (acc <= 0.0) return;
        const double norm = std::isinf(p) ? acc : std::pow(acc, 1.0 / p);
        const double v = std::pow(std::ldexp(1.0, j), e) * norm;
        if (v > best.value) best = {v, {j, k}};
    };
    for (int j = j_min; j <= j_max; ++j) {
        const double len = std::ldexp(1.0, j);
        long k = static_cast<long>(std::floor(g.xi(0) / len));
        double acc = 0.0;
        for (std::size_t m = 0; m < n; ++m) {
            const long km = static_cast<long>(std::floor(g.xi(m) / len));
            if (km != k) {
                close(j, k, acc);
                k = km;
                acc = 0.0;
            }
            acc = std::isinf(p) ? std::max(acc, w[m]) : acc + w[m];
        }
        close(j, k, acc);
    }
    return best;
}

double refined_ratio(const WaveFunction& u, double p, double alpha, const WindowConfig& cfg) {
    check_p(p);
    const double mass = l2_norm(u);
    if (mass == 0.0) fail(errc::zero_datum, "refined ratio of the zero function");
    const double lhs = strichartz_ratio_report(u, alpha, 6.0, 6.0, cfg).norm;
    return lhs / (std::cbrt(dyadic_sup(u, p).value) * std::pow(mass, 2.0 / 3.0));
}

WeightedForm bilinear_weighted_form(const WaveFunction& f, const WaveFunction& g) {
    if (!(f.grid == g.grid)) fail(errc::grid_mismatch, "weighted form needs both functions on one grid");
    const Spectrum sf = forward_fourier(f), sg = forward_fourier(g);
    const std::size_t n = f.grid.size();
    std::vector<double> a(n), b(n);
    double amax = 0.0, bmax = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        a[k] = std::pow(std::abs(sf.values[k]), 1.5);
        b[k] = std::pow(std::abs(sg.values[k]), 1.5);
        amax = std::max(amax, a[k]);
        bmax = std::max(bmax, b[k]);
    }
    WeightedForm out;
    if (amax == 0.0 || bmax == 0.0) return out;
    std::vector<std::size_t> ia, ib;
    for (std::size_t k = 0; k < n; ++k) {
        if (a[k] > kBandFloor * amax) ia.push_back(k);
        if (b[k] > kBandFloor * bmax) ib.push_back(k);
    }
    // Integral of |xi - eta|^{-1/2} over two cells d bins apart, in units of
    // dxi^{3/2}: a second difference of (4/3)|z|^{3/2}.
    const double scale = std::pow(f.grid.freq_spacing(), 1.5);
    std::vector<double> kernel(n);
    auto p32 = [](double z) { return std::pow(std::abs(z), 1.5); };
    for (std::size_t d = 0; d < n; ++d) {
        const double x = static_cast<double>(d);
        kernel[d] = scale * 4.0 / 3.0 * (p32(x + 1.0) - 2.0 * p32(x) + p32(x - 1.0));
    }
    std::vector<double> rows(ia.size());
    parallel_for(ia.size(), [&](std::size_t r) {
        const std::size_t k = ia[r];
        double s = 0.0;
        for (std::size_t l : ib) s += b[l] * kernel[k > l ? k - l : l - k];
        rows[r] = a[k] * s;
    });
    for (double r : rows) out.value += r;
    for (std::size_t k : ia) out.diagonal += a[k] * b[k] * kernel[0];
    return out;
}

double bilinear_ratio(const WaveFunction& f, const WaveFunction& g, double alpha, double rel_tol) {
    const WeightedForm w = bilinear_weighted_form(f, g);
    if (!(w.value > 0.0)) fail(errc::zero_datum, "weighted form vanishes");
    return std::pow(cross_strichartz_norm(f, g, {}, {}, alpha, rel_tol), 1.5) / w.value;
}

double jacobian_factor(double xi, double eta, double alpha) {
    check_alpha(alpha);
    if (xi == eta) fail(errc::on_diagonal, "Jacobian factor is singular on xi = eta");
    // xi|xi|^{alpha-2} written as a signed power so that 0 stays finite.
    auto sp = [alpha](double x) { return std::copysign(std::pow(std::abs(x), alpha - 1.0), x); };
    const double num = std::pow(std::abs(xi * eta), 0.25 * (alpha - 2.0));
    return num / std::sqrt(alpha * std::abs(sp(xi) - sp(eta)));
}

double bound_check(double xi, double eta, double alpha) {
    return jacobian_factor(xi, eta, alpha) * std::sqrt(std::abs(xi - eta));
}

LatticeSup bound_check_sup(double alpha, double half, std::size_t n) {
    check_alpha(alpha);
    if (!(half > 0.0) || n < 2) fail(errc::invalid_input, "lattice needs a positive half-width and two or more nodes");
    const double step = 2.0 * half / static_cast<double>(n);
    auto node = [&](std::size_t i) { return -half + (static_cast<double>(i) + 0.5) * step; };
    std::vector<LatticeSup> rows(n);
    parallel_for(n, [&](std::size_t i) {
        LatticeSup r;
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            const double v = bound_check(node(i), node(j), alpha);
            if (v > r.value || std::isinf(v)) r = {v, node(i), node(j)};
        }
        rows[i] = r;
    });
    LatticeSup best;
    for (const auto& r : rows)
        if (r.value > best.value) best = r;
    return best;
}

RestrictionConstant localized_restriction_constant(const std::vector<WaveFunction>& family, double xi0, double R,
                                                   double q, double alpha, const WindowConfig& cfg) {
    check_alpha(alpha);
    if (family.empty()) fail(errc::invalid_input, "empty family");
    if (!(q > 4.0 && q < 6.0)) fail(errc::invalid_exponent, "localized restriction needs 4 < q < 6");
    if (!(R > 0.0)) fail(errc::invalid_input, "ball radius must be positive");
    if (alpha < 2.0 && std::abs(xi0) <= R)
        fail(errc::singular_at_zero, "the weight |xi|^{(alpha-2)/q} is singular inside the ball for alpha < 2");
    RestrictionConstant out;
    out.ratios.resize(family.size());
    for (std::size_t i = 0; i < family.size(); ++i) {
        const Spectrum f = forward_fourier(family[i]);
        double peak = 0.0, leak = 0.0;
        for (std::size_t k = 0; k < f.values.size(); ++k) {
            const double a = std::abs(f.values[k]);
            peak = std::max(peak, a);
            if (std::abs(f.grid.xi(k) - xi0) > R) leak = std::max(leak, a);
        }
        if (!(peak > 0.0)) fail(errc::zero_datum, "family member is zero");
        if (leak > 1e-10 * peak) {
            std::ostringstream os;
            os << "family member " << i << " has spectrum " << leak / peak << " (relative) outside the ball";
            fail(errc::support_violation, os.str());
        }
        out.ratios[i] = weighted_norm(family[i], alpha, (alpha - 2.0) / q, q, q, cfg).norm / peak;
        if (out.ratios[i] > out.constant) {
            out.constant = out.ratios[i];
            out.argmax = i;
        }
    }
    return out;
}

namespace {

double bump(double u) { return std::abs(u) < 1.0 ? std::exp(-1.0 / (1.0 - u * u)) : 0.0; }

WaveFunction make_member(const std::string& type, const std::map<std::string, double>& kv, const SpectralGrid& g) {
    auto get = [&](const char* key, double def) {
        auto it = kv.find(key);
        return it == kv.end() ? def : it->second;
    };
    if (type == "gaussian") return normalized(gaussian_packet(g, get("x0", 0.0), get("xi0", 0.0), get("h", 1.0)));
    if (type == "hermite") {
        const WaveFunction h = hermite_function(g, static_cast<int>(get("n", 0.0)));
        return normalized(geometric_transform(h, ProfileParams{get("h", 1.0), 0.0, 0.0, 0.0}));
    }
    if (type == "concentrating") return concentrating_sequence(g, static_cast<int>(get("n", 1.0)), get("x0", 0.0));
    if (type == "two_bump") {
        const double sep = get("sep", 4.0), h = get("h", 1.0);
        const WaveFunction a = gaussian_packet(g, -0.5 * sep, 0.0, h), b = gaussian_packet(g, 0.5 * sep, 0.0, h);
        WaveFunction u = a;
        const cplx ph = std::polar(1.0, get("phase", 0.0));
        for (std::size_t j = 0; j < u.values.size(); ++j) u.values[j] += ph * b.values[j];
        return normalized(u);
    }
    if (type == "spectral_bump") {
        const double c = get("center", 0.0), r = get("radius", 1.0), amp = get("amp", 0.0), fr = get("freq", 0.0);
        if (!(r > 0.0)) fail(errc::invalid_input, "spectral bump radius must be positive");
        // Scaled so the peak of the spectrum is 1.
        const double peak = bump(0.0);
        return inverse_fourier(sample_spectrum(g, [&](double xi) {
            return bump((xi - c) / r) / peak * std::polar(1.0, amp * std::cos(fr * xi));
        }));
    }
    fail(errc::invalid_input, "unknown family type '" + type + "'");
}

}  // namespace

std::vector<FamilyMember> read_family(std::istream& in, const SpectralGrid& g) {
    std::vector<FamilyMember> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string type;
        if (!(ls >> type)) continue;
        std::map<std::string, double> kv;
        std::string tok;
        while (ls >> tok) {
            const auto eq = tok.find('=');
            std::size_t used = 0;
            double v = 0.0;
            bool ok = eq != std::string::npos && eq > 0;
            if (ok) {
                try {
                    v = std::stod(tok.substr(eq + 1), &used);
                } catch (const std::exception&) {
                    ok = false;
                }
                ok = ok && used == tok.size() - eq - 1;
            }
            if (!ok) {
                std::ostringstream os;
                os << "family manifest line " << lineno << ": expected key=number, got '" << tok << "'";
                fail(errc::invalid_input, os.str());
            }
            kv[tok.substr(0, eq)] = v;
        }
        std::string label = type;
        for (const auto& [k, v] : kv) {
            std::ostringstream os;
            os << ' ' << k << '=' << v;
            label += os.str();
        }
        try {
            out.push_back({label, make_member(type, kv, g)});
        } catch (const Error& e) {
            std::string msg = e.what();
            msg.erase(0, e.code().size() + 2);
            throw Error(e.code(), "family manifest line " + std::to_string(lineno) + ": " + msg);
        }
    }
    return out;
}

std::vector<FamilyMember> load_family(const std::string& path, const SpectralGrid& g) {
    std::ifstream in(path);
    if (!in) fail(errc::invalid_input, "cannot open family manifest " + path);
    return read_family(in, g);
}

}  // namespace strichartz
