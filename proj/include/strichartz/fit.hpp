#pragma once

#include <vector>

namespace strichartz {

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0;  // root-mean-square deviation from the line
};

// Ordinary least squares y ~ slope * x + intercept; needs two distinct x.
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);
// Line fit of log y against log x.
LineFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace strichartz
