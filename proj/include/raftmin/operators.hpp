#pragma once

#include <functional>

#include "raftmin/grid.hpp"

namespace raftmin {

/// Spectral first derivative along one axis. Exact for band-limited fields;
/// on a periodic axis the (unrepresentable) Nyquist derivative is dropped.
ScalarField derivative(const ScalarField& field, int axis);

/// Spectral second derivative along one axis (stays in the native basis).
ScalarField second_derivative(const ScalarField& field, int axis);

ScalarField laplacian(const ScalarField& field);

/// Pointwise |grad f|^2, (Delta f)^2 is laplacian squared by the caller;
/// these return fields ready for quadrature.
ScalarField gradient_sq(const ScalarField& field);
ScalarField hessian_sq(const ScalarField& field);
ScalarField grad_laplacian_sq(const ScalarField& field);

/// Applies a diagonal spectral multiplier m(lambda^2).
ScalarField apply_multiplier(const ScalarField& field,
                             const std::function<double(double)>& multiplier);

/// v = (1 - eps^2 Delta)^{-1} u with zero-flux boundary behavior; diagonal in
/// the eigenbasis with multiplier 1/(1 + eps^2 lambda^2), hence exact.
ScalarField helmholtz_inverse(const ScalarField& u, double epsilon);

}  // namespace raftmin
