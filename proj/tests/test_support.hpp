#pragma once

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "raftmin/grid.hpp"

namespace raftmin::testing {

inline double rel_err(double got, double want) {
    const double scale = std::max({std::abs(got), std::abs(want), 1e-300});
    return std::abs(got - want) / scale;
}

/// |got - want| <= tol * max(scale, |want|); the right comparison when the
/// expected value may pass through zero.
inline bool close(double got, double want, double tol, double scale = 1.0) {
    return std::abs(got - want) <= tol * std::max(scale, std::abs(want));
}

/// Composite Simpson quadrature, the dense independent oracle for 1D
/// integrals appearing in expected values.
inline double simpson_oracle(const std::function<double(double)>& f, double lo, double hi,
                             int panels = 4096) {
    const double h = (hi - lo) / (2 * panels);
    double sum = f(lo) + f(hi);
    for (int i = 1; i < 2 * panels; ++i) sum += f(lo + i * h) * (i % 2 ? 4.0 : 2.0);
    return sum * h / 3.0;
}

/// Central finite-difference oracle for first derivatives of an analytic
/// function (independent of the spectral path).
inline double fd1_oracle(const std::function<double(double)>& f, double x, double h = 1e-5) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

inline double fd2_oracle(const std::function<double(double)>& f, double x, double h = 1e-4) {
    return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
}

/// Deterministic pointwise-random field (not band-limited; for transform
/// round-trip and Parseval checks).
inline ScalarField random_pointwise(GridPtr grid, std::uint64_t seed, double amplitude = 1.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(-amplitude, amplitude);
    std::vector<double> v(grid->size());
    for (double& x : v) x = uni(rng);
    return ScalarField(std::move(grid), std::move(v));
}

}  // namespace raftmin::testing
