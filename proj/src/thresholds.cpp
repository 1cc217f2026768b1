#include "strichartz/thresholds.hpp"

#include <cmath>
#include <sstream>

#include "strichartz/error.hpp"
#include "strichartz/propagator.hpp"
#include "strichartz/spectral_core.hpp"

namespace strichartz {

double symmetric_threshold(double alpha) {
    check_alpha(alpha);
    return std::pow(std::sqrt(3.0) * alpha * (alpha - 1.0), -1.0 / 6.0);
}

double asymmetric_threshold(double alpha, double q, double schrodinger_constant) {
    if (!(alpha > 1.0) || !std::isfinite(alpha) || !(q > 0.0) || !std::isfinite(q) || !(schrodinger_constant > 0.0) ||
        !std::isfinite(schrodinger_constant)) {
        std::ostringstream os;
        os << "asymmetric threshold needs alpha > 1, q > 0 and a positive constant (got " << alpha << ", " << q
           << ", " << schrodinger_constant << ")";
        fail(errc::invalid_input, os.str());
    }
    return std::pow(0.5 * (alpha * alpha - alpha), -1.0 / q) * schrodinger_constant;
}

double gaussian_schrodinger_ratio(double q, double r) {
    if (!(q > 0.0) || !(r > 0.0) || std::abs(2.0 / q + 1.0 / r - 0.5) > 1e-12)
        fail(errc::inadmissible_pair, "closed-form Gaussian ratio needs an admissible pair");
    return std::pow(kPi, -0.25) * std::pow(2.0 * kPi / r, 0.5 / r) * std::pow(0.5 * kPi, 1.0 / q);
}

const std::vector<RegistryEntry>& constant_registry() {
    static const std::vector<RegistryEntry> reg = {
        {"M2", 2.0, 6.0, 6.0, std::pow(12.0, -1.0 / 12.0), "12^(-1/12)", "12^(-12)",
         "Gaussians are the extremals of the symmetric alpha = 2 problem. Also written with exponent -12; "
         "-1/12 is the Gaussian value and the only exponent for which symmetric_threshold(2) equals M2."},
        {"M2_8_4", 2.0, 8.0, 4.0, std::pow(2.0, -0.25), "2^(-1/4)", "",
         "Known sharp constant of the (8, 4) alpha = 2 problem; equals the Gaussian value."},
    };
    return reg;
}

const RegistryEntry& registry_entry(const std::string& key) {
    for (const auto& e : constant_registry())
        if (e.key == key) return e;
    fail(errc::invalid_input, "no registry entry '" + key + "'");
}

std::optional<double> schrodinger_constant(double q, double r) {
    for (const auto& e : constant_registry())
        if (e.q == q && e.r == r) return e.value;
    return std::nullopt;
}

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::strict_above: return "strict-above";
        case Verdict::within_tolerance: return "within-tolerance";
        case Verdict::below: return "below";
    }
    return "?";
}

ThresholdReport precompactness_report(double alpha, double q, double r, double measured_ratio, double tol) {
    ThresholdReport rep;
    rep.alpha = alpha;
    rep.q = q;
    rep.r = r;
    rep.measured_ratio = measured_ratio;
    double constant;
    if (auto c = schrodinger_constant(q, r)) {
        constant = *c;
        for (const auto& e : constant_registry())
            if (e.q == q && e.r == r) rep.threshold_source = e.key;
    } else {
        constant = gaussian_schrodinger_ratio(q, r);
        rep.threshold_source = "gaussian-lower-bound";
    }
    rep.threshold = (q == 6.0 && r == 6.0) ? symmetric_threshold(alpha) : asymmetric_threshold(alpha, q, constant);
    rep.margin = measured_ratio - rep.threshold;
    if (std::abs(rep.margin) <= tol) rep.verdict = Verdict::within_tolerance;
    else if (rep.margin > tol) rep.verdict = Verdict::strict_above;
    else rep.verdict = Verdict::below;
    return rep;
}

}  // namespace strichartz
