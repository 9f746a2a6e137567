#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <utility>

#include "raftmin/grid.hpp"
#include "raftmin/potential.hpp"

namespace raftmin {

/// Dimensionless parameters of the reduced energies.
struct EnergyParams {
    double epsilon = 0.1;  // interface scale, > 0
    double q = 0.0;        // effective tension parameter, physically (-1.1, 1)
};

/// Axis-aligned sub-box for restricted integration (cell and recovery work).
struct Box {
    std::array<double, 3> lo{};
    std::array<double, 3> hi{};
};

/// Integral over cells whose centers fall inside the box.
double integrate_region(const ScalarField& integrand, const Box& region);

/// Per-term values of an evaluated functional. Terms that do not occur in a
/// given functional stay zero; total is their sum unless the evaluation was
/// gated (flux violation), in which case total is +infinity.
struct EnergyBreakdown {
    double total = 0.0;
    double potential = 0.0;
    double negative_quadratic_or_gradient = 0.0;
    double gradient = 0.0;
    double laplacian_sq = 0.0;
    double grad_laplacian_sq = 0.0;
    double nonlocal = 0.0;
    bool flux_violation = false;
    double flux_score = 0.0;

    std::array<std::pair<const char*, double>, 6> terms() const {
        return {{{"potential", potential},
                 {"negative_quadratic_or_gradient", negative_quadratic_or_gradient},
                 {"gradient", gradient},
                 {"laplacian_sq", laplacian_sq},
                 {"grad_laplacian_sq", grad_laplacian_sq},
                 {"nonlocal", nonlocal}}};
    }
};

/// Reduced energy in the order parameter u:
/// (1/eps) Int ( W(u) - u^2 + (1-q) eps^2 |grad u|^2 + u (1 - eps^2 Lap)^{-1} u ).
EnergyBreakdown f_star(const ScalarField& u, const EnergyParams& p, const Potential& pot);

/// Same energy through v = (1 - eps^2 Lap)^{-1} u:
/// Int ( W(-eps^2 Lap v + v)/eps - eps q |grad v|^2 + (1-2q) eps^3 (Lap v)^2
///       + (1-q) eps^5 |grad Lap v|^2 ), restricted to `region` when given.
/// The value is gated to +infinity when the wall-flux heuristic flags v.
EnergyBreakdown f_v(const ScalarField& v, const EnergyParams& p, const Potential& pot,
                    const std::optional<Box>& region = std::nullopt);

/// Variational derivatives against the L^2 inner product.
ScalarField f_star_gradient(const ScalarField& u, const EnergyParams& p, const Potential& pot);
ScalarField f_v_gradient(const ScalarField& v, const EnergyParams& p, const Potential& pot);

/// Modica-Mortola line-tension energy Int ( W(u)/eps + eps |grad u|^2 ).
double modica_mortola(const ScalarField& u, double epsilon, const Potential& pot);

/// I_eps = Int ( W(v)/eps + eps |grad v|^2 + eps^3 |hess v|^2 + eps^5 |grad Lap v|^2 ).
double i_eps(const ScalarField& v, double epsilon, const Potential& pot,
             const std::optional<Box>& region = std::nullopt);

/// Dimensionless wall-flux violation score: size of the one-sided cubic-fit
/// normal derivative at each neumann wall relative to the RMS gradient.
/// Sampled Neumann-smooth fields score near zero; fields like v = x score ~1.
/// Heuristic: content near the axis Nyquist harmonic inflates the score.
double boundary_flux_score(const ScalarField& v);

/// Gate threshold used by f_v.
inline constexpr double kFluxGateThreshold = 0.25;

/// Single-mode energy of psi_n = cos(2 pi n x):
/// F_{q,n} = -1 + (1-q) eps^2 lam_n^2 + 1/(1 + eps^2 lam_n^2), lam_n = 2 pi n.
struct ModeEnergy {
    double f_qn = 0.0;
    double lambda = 0.0;
    bool destabilizing = false;  // F_{q,n} < 0
};
ModeEnergy mode_energy(double q, double epsilon, int n);

/// Minimizer of F_{q,.} over wavenumbers: eps^2 lam*^2 = 1/sqrt(1-q) - 1 and
/// F* = -2 + 2 sqrt(1-q) + q for 0 <= q < 1. For q <= 0 the minimum sits at
/// lam = 0 with value 0; q >= 1 is flagged unbounded below.
struct OptimalMode {
    double lambda_star_sq = 0.0;
    double eps_sq_lambda_star_sq = 0.0;
    double f_star = 0.0;
    bool unbounded = false;
};
OptimalMode optimal_mode(double q, double epsilon);

/// Lower-bound probe F_eps[v] >= q I_eps[v] - (12 q / q*) C(Omega) eps^3 |Omega|
/// with empirically estimated q*, C(Omega).
struct LowerBoundReport {
    double f_eps = 0.0;
    double i_eps_value = 0.0;
    double rhs = 0.0;
    double margin = 0.0;  // f_eps - rhs
    bool holds = false;
};
LowerBoundReport lower_bound_check(const ScalarField& v, const EnergyParams& p,
                                   const Potential& pot, double q_star_hat,
                                   double c_omega_hat);

/// Interpolation-constant probe over a corpus of smooth fields:
/// q*_hat = 1 / sup Int eps |grad v|^2 / Int (W(v)/eps + eps^3 |hess v|^2).
struct QStarEstimate {
    double sup_ratio = 0.0;
    double q_star_hat = 0.0;
    int samples = 0;
};
QStarEstimate estimate_q_star(GridPtr grid, const Potential& pot, std::uint64_t seed = 7,
                              int random_samples = 24);

/// Elliptic-constant probe: C_hat with |hess v|_2^2 <= 3 |Lap v|_2^2 + C_hat |v|_2^2
/// over a corpus of Neumann fields (near zero on rectangles).
struct COmegaEstimate {
    double sup_ratio = 0.0;   // sup (|hess|^2 - 3 |Lap|^2) / |v|^2
    double c_omega_hat = 0.0;
    int samples = 0;
};
COmegaEstimate estimate_c_omega(GridPtr grid, std::uint64_t seed = 11, int random_samples = 24);

/// q0_hat = q* / (2 q* + 4 K_w + 4 C_w^2 + 10), the smallness threshold the
/// lower-bound machinery needs.
double q_zero_hat(double q_star_hat, const WellConstants& constants);

/// Random smooth field: normal coefficients with quadratic harmonic decay,
/// supported on per-axis harmonics <= max_harmonic, scaled to the requested
/// amplitude (max-norm order). Deterministic in (grid, seed).
ScalarField random_band_limited(GridPtr grid, int max_harmonic, double amplitude,
                                std::uint64_t seed);

}  // namespace raftmin
