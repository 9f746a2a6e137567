#pragma once

#include "raftmin/grid.hpp"

namespace raftmin::detail {

// Raw (unnormalized) FFTW r2r pass along one axis of a row-major array.
// dct2/dct3 pair round-trips to 2n times the input, r2hc/hc2r to n times.
enum class R2rKind { dct2, dct3, dst3, r2hc, hc2r };

void axis_r2r(const Grid& grid, int axis, R2rKind kind, const double* in, double* out);

// Forward kind of an axis (dct2 for neumann, r2hc for periodic) and its
// inverse. dst3 backs first derivatives on neumann axes.
R2rKind axis_forward_kind(const AxisSpec& axis);
R2rKind axis_inverse_kind(const AxisSpec& axis);

// Per-slot scale turning raw forward output into orthonormal-basis
// coefficients, and the scale fed to the raw inverse kind to get values back.
std::vector<double> forward_scale(const AxisSpec& axis);
std::vector<double> inverse_scale(const AxisSpec& axis);

}  // namespace raftmin::detail
