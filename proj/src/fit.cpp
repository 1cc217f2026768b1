#include "strichartz/fit.hpp"

#include <cmath>

#include "strichartz/error.hpp"

namespace strichartz {

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n != y.size() || n < 2) fail(errc::invalid_input, "line fit needs two or more (x, y) pairs");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (!(sxx > 0.0)) fail(errc::invalid_input, "line fit needs two distinct abscissae");
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = y[i] - (f.slope * x[i] + f.intercept);
        ss += d * d;
    }
    f.residual = std::sqrt(ss / static_cast<double>(n));
    return f;
}

LineFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
    std::vector<double> lx(x.size()), ly(y.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) fail(errc::invalid_input, "log-log fit needs positive data");
        lx[i] = std::log(x[i]);
    }
    for (std::size_t i = 0; i < y.size(); ++i) ly[i] = std::log(y[i]);
    return fit_line(lx, ly);
}

}  // namespace strichartz
