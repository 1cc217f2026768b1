#pragma once

#include <optional>
#include <string>
#include <vector>

namespace strichartz {

// [sqrt(3) alpha (alpha - 1)]^{-1/6}.
double symmetric_threshold(double alpha);
// ((alpha^2 - alpha)/2)^{-1/q} times the alpha = 2 sharp constant for the pair.
double asymmetric_threshold(double alpha, double q, double schrodinger_constant);

// ||e^{it d_xx} g||_{L^q_t L^r_x} / ||g||_2 for a Gaussian g, admissible (q, r):
// pi^{-1/4} (2 pi / r)^{1/(2r)} (pi / 2)^{1/q}.
double gaussian_schrodinger_ratio(double q, double r);

struct RegistryEntry {
    std::string key;
    double alpha = 2.0;
    double q = 0.0;
    double r = 0.0;
    double value = 0.0;
    std::string expression;  // closed form of value
    std::string printed;     // value as printed in the source, when it differs
    std::string note;
};

// Known sharp constants of the alpha = 2 problem.
const std::vector<RegistryEntry>& constant_registry();
const RegistryEntry& registry_entry(const std::string& key);
// Sharp alpha = 2 constant for (q, r), when the registry has one.
std::optional<double> schrodinger_constant(double q, double r);

enum class Verdict { strict_above, within_tolerance, below };
const char* to_string(Verdict v);

struct ThresholdReport {
    double alpha = 0.0;
    double q = 0.0;
    double r = 0.0;
    double threshold = 0.0;
    double measured_ratio = 0.0;
    double margin = 0.0;  // measured_ratio - threshold
    Verdict verdict = Verdict::within_tolerance;
    std::string threshold_source;  // registry key, or "gaussian-lower-bound"
};

// Compares a measured ratio with the precompactness threshold for (q, r).
// Pairs missing from the registry use the Gaussian value of the alpha = 2
// functional, which is only a lower bound for the sharp constant.
ThresholdReport precompactness_report(double alpha, double q, double r, double measured_ratio, double tol);

}  // namespace strichartz
