// fit.hpp — Ordinary least-squares line fit

#pragma once

#include <span>

namespace nhtop {

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;  // 1 for an exact line, including constant data
    int n_points = 0;
};

// Fits y = slope * x + intercept. Needs at least two distinct x values.
LinearFit linear_fit(std::span<const double> xs, std::span<const double> ys);

} // namespace nhtop
