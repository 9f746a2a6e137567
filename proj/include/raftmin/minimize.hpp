#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "raftmin/energy.hpp"
#include "raftmin/grid.hpp"
#include "raftmin/potential.hpp"

namespace raftmin {

enum class FlowScheme { l2_descent, semi_implicit_spectral };

struct FlowConfig {
    FlowScheme scheme = FlowScheme::semi_implicit_spectral;
    double dt = 0.01;
    int max_steps = 20000;
    double grad_tolerance = 1e-7;  // on |gradient|_2
    std::optional<double> fixed_mean;
    std::uint64_t seed = 1;
    int log_every = 10;
    /// Energy floor below which the run is declared divergent; defaults to
    /// -1e3 |Omega| / eps when unset.
    std::optional<double> divergence_floor;
};

enum class FlowStatus { converged, max_steps, diverged, step_underflow };

struct TrajectoryPoint {
    int step = 0;
    double energy = 0.0;
    double grad_norm = 0.0;
    double mean = 0.0;
    double dominant_lambda = 0.0;  // sqrt(lambda^2) of the strongest nonzero mode
};

struct FlowResult {
    ScalarField field;
    FlowStatus status = FlowStatus::max_steps;
    int steps = 0;
    double energy = 0.0;
    double grad_norm = 0.0;
    std::vector<TrajectoryPoint> trajectory;
};

const char* to_string(FlowStatus status);

/// Monotone descent of F*_eps from u0. Accepted steps never increase the
/// energy (backtracking wraps both schemes); with fixed_mean the gradient is
/// projected to zero mean so the constraint is conserved to roundoff.
FlowResult descend(const ScalarField& u0, const EnergyParams& p, const Potential& pot,
                   const FlowConfig& cfg);

/// One semi-implicit spectral step: the linear part of the variational
/// derivative (-2u, gradient term, resolvent term) is treated implicitly per
/// mode, W'(u) + 2u (the nonlinear remainder) explicitly. Fixed points are
/// exactly the critical points of F*_eps. Stable for any dt on the stiff
/// (large lambda) band; the linearly unstable low band grows as it should.
ScalarField semi_implicit_step(const ScalarField& u, double dt, const EnergyParams& p,
                               const Potential& pot,
                               const std::optional<double>& fixed_mean = std::nullopt);

/// Per-mode implicit multiplier L(lambda^2) of the linearized flow:
/// L = (2/eps)(-1 + (1-q) eps^2 lambda^2 + 1/(1 + eps^2 lambda^2)).
double semi_implicit_symbol(double lambda_sq, const EnergyParams& p);

/// Uniform random field in [-amplitude, amplitude] plus mean offset,
/// reproducible from the seed.
ScalarField random_initial_field(GridPtr grid, double amplitude, double mean,
                                 std::uint64_t seed);

/// lambda of the strongest nonzero-frequency coefficient.
double dominant_wavenumber(const ScalarField& u);

}  // namespace raftmin
