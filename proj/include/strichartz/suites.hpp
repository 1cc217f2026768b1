#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace strichartz {

using Cell = std::variant<double, long long, std::string>;

struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add(std::vector<Cell> row);
};

struct Check {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct SuiteResult {
    std::string suite;
    std::vector<Table> tables;
    std::vector<Check> checks;
    std::vector<std::string> notes;  // descriptive output without pass/fail

    bool pass() const;
    const Check* find(const std::string& name) const;
};

// Unset fields take each suite's own defaults.
struct SuiteOptions {
    std::optional<double> alpha;
    std::optional<double> q;
    std::optional<double> r;
    std::size_t grid_n = 0;
    double grid_l = 0.0;
    double window_tol = 1e-4;
    std::uint64_t seed = 1;
    std::string data_dir;  // family manifests; empty: the directory configured at build time
};

// schrodinger-limit, concentration, orthogonality, vdc-decay, refined,
// localized, jacobian, vanishing-modulation.
const std::vector<std::string>& suite_names();

// Throws invalid-input for an unknown name; library errors propagate.
SuiteResult run_suite(const std::string& name, const SuiteOptions& opt = {});

std::string default_data_dir();

}  // namespace strichartz
