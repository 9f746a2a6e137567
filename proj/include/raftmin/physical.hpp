#pragma once

#include "raftmin/energy.hpp"
#include "raftmin/grid.hpp"
#include "raftmin/potential.hpp"

namespace raftmin {

/// Parameters of the coupled composition/height energy (SI units).
struct PhysicalParams {
    double a2 = -1e-5;      // J/m^2, quadratic coefficient (negative for a double well)
    double a4 = 1e-5;       // J/m^2
    double b = 5e-19;       // J, line tension
    double sigma = 1e-5;    // J/m^2, surface tension
    double kappa = 1e-19;   // J, bending rigidity
    double lambda = 4.9e-12;  // J/m, composition-curvature coupling
    double length = 1e-5;   // m, characteristic sample size L

    void validate() const;
};

struct Nondimensional {
    double epsilon = 0.0;        // sqrt(kappa / (L^2 sigma))
    double q = 0.0;              // 1 - b sigma / Lambda^2
    double w_scale = 0.0;        // 2 kappa / Lambda^2
    double intrinsic_length = 0.0;  // sqrt(kappa / sigma), meters
};

Nondimensional nondimensionalize(const PhysicalParams& p);

EnergyParams energy_params_of(const PhysicalParams& p);

/// Eliminates the height field: h_j = Lambda u_j / (sigma + (kappa/L^2) lambda_j^2)
/// for j >= 1, with the constant mode gauged to zero mean.
ScalarField solve_height(const ScalarField& u, const PhysicalParams& p);

/// Relative spectral residual of the height Euler-Lagrange system.
double height_residual(const ScalarField& u, const ScalarField& h, const PhysicalParams& p);

/// Per-volume physical energy on the rescaled domain:
/// Int ( f(u) + (b/2L^2)|grad u|^2 + (sigma/2L^2)|grad h|^2
///       + (kappa/2L^4)(Lap h)^2 + (Lambda/L^2) u Lap h ).
double full_energy(const ScalarField& u, const ScalarField& h, const PhysicalParams& p);

/// Checks the elimination identity
/// (1/eps)(2 kappa/Lambda^2) E[u, h*(u)]/L^d = F*_eps[u] with W = (2 kappa/Lambda^2) f.
struct ReductionReport {
    double full_side = 0.0;     // (1/eps)(2 kappa/Lambda^2) full_energy
    double reduced_side = 0.0;  // F*_eps[u]
    double rel_error = 0.0;
    bool holds = false;         // to 1e-8 relative
    EnergyBreakdown reduced_breakdown;
};
ReductionReport reduced_equals_full(const ScalarField& u, const PhysicalParams& p);

/// Long-wavelength approximation
/// Int ( f(u) + (1/2L^2)(b - Lambda^2/sigma)|grad u|^2 + (Lambda^2 kappa / 2L^4 sigma^2)(Lap u)^2 ).
double longwave_energy(const ScalarField& u, const PhysicalParams& p);

}  // namespace raftmin
