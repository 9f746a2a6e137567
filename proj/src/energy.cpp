#include "raftmin/energy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "raftmin/operators.hpp"

namespace raftmin {

namespace {

void require(bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
}

double integrate_maybe_region(const ScalarField& f, const std::optional<Box>& region) {
    return region ? integrate_region(f, *region) : integrate(f);
}

ScalarField potential_values(const ScalarField& u, const Potential& pot, double inv_eps) {
    ScalarField out = ScalarField::zeros(u.grid());
    for (std::size_t i = 0; i < u.size(); ++i) out[i] = inv_eps * pot.value(u[i]);
    return out;
}

// u = v - eps^2 Lap v
ScalarField order_parameter_of(const ScalarField& v, double epsilon) {
    ScalarField lap = laplacian(v);
    ScalarField u = v;
    const double e2 = epsilon * epsilon;
    for (std::size_t i = 0; i < u.size(); ++i) u[i] -= e2 * lap[i];
    return u;
}

}  // namespace

double integrate_region(const ScalarField& integrand, const Box& region) {
    const Grid& grid = *integrand.grid();
    const int d = grid.dims();
    std::vector<int> idx(static_cast<std::size_t>(d), 0);
    double sum = 0.0;
    constexpr double slack = 1e-12;
    for (std::size_t flat = 0; flat < integrand.size(); ++flat) {
        bool inside = true;
        for (int a = 0; a < d; ++a) {
            const double x = grid.coordinate(a, idx[static_cast<std::size_t>(a)]);
            const auto ua = static_cast<std::size_t>(a);
            if (x < region.lo[ua] - slack || x > region.hi[ua] + slack) {
                inside = false;
                break;
            }
        }
        if (inside) sum += integrand[flat];
        for (int a = d - 1; a >= 0; --a) {
            auto ua = static_cast<std::size_t>(a);
            if (++idx[ua] < grid.axis(a).n) break;
            idx[ua] = 0;
        }
    }
    return sum * grid.cell_volume();
}

EnergyBreakdown f_star(const ScalarField& u, const EnergyParams& p, const Potential& pot) {
    require(p.epsilon > 0.0, "epsilon must be positive");
    const double eps = p.epsilon;

    EnergyBreakdown out{};
    out.potential = integrate(potential_values(u, pot, 1.0 / eps));

    ScalarField sq = u;
    for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = u[i] * u[i];
    out.negative_quadratic_or_gradient = -integrate(sq) / eps;

    out.gradient = (1.0 - p.q) * eps * integrate(gradient_sq(u));

    ScalarField v = helmholtz_inverse(u, eps);
    out.nonlocal = inner(u, v) / eps;

    out.total = out.potential + out.negative_quadratic_or_gradient + out.gradient + out.nonlocal;
    return out;
}

EnergyBreakdown f_v(const ScalarField& v, const EnergyParams& p, const Potential& pot,
                    const std::optional<Box>& region) {
    require(p.epsilon > 0.0, "epsilon must be positive");
    const double eps = p.epsilon;

    EnergyBreakdown out{};
    out.flux_score = boundary_flux_score(v);
    if (out.flux_score > kFluxGateThreshold) {
        out.flux_violation = true;
        out.total = std::numeric_limits<double>::infinity();
        return out;
    }

    ScalarField u = order_parameter_of(v, eps);
    out.potential = integrate_maybe_region(potential_values(u, pot, 1.0 / eps), region);

    ScalarField grad = gradient_sq(v);
    for (std::size_t i = 0; i < grad.size(); ++i) grad[i] *= -eps * p.q;
    out.negative_quadratic_or_gradient = integrate_maybe_region(grad, region);

    ScalarField lap = laplacian(v);
    for (std::size_t i = 0; i < lap.size(); ++i) lap[i] *= lap[i];
    const double e3 = eps * eps * eps;
    out.laplacian_sq = (1.0 - 2.0 * p.q) * e3 * integrate_maybe_region(lap, region);

    const double e5 = e3 * eps * eps;
    out.grad_laplacian_sq = (1.0 - p.q) * e5 * integrate_maybe_region(grad_laplacian_sq(v), region);

    out.total = out.potential + out.negative_quadratic_or_gradient + out.laplacian_sq +
                out.grad_laplacian_sq;
    return out;
}

ScalarField f_star_gradient(const ScalarField& u, const EnergyParams& p, const Potential& pot) {
    require(p.epsilon > 0.0, "epsilon must be positive");
    const double eps = p.epsilon;

    ScalarField lap = laplacian(u);
    ScalarField resolvent = helmholtz_inverse(u, eps);
    ScalarField g = ScalarField::zeros(u.grid());
    const double grad_coeff = 2.0 * (1.0 - p.q) * eps * eps;
    for (std::size_t i = 0; i < g.size(); ++i) {
        g[i] = (pot.d1(u[i]) - 2.0 * u[i] - grad_coeff * lap[i] + 2.0 * resolvent[i]) / eps;
    }
    return g;
}

ScalarField f_v_gradient(const ScalarField& v, const EnergyParams& p, const Potential& pot) {
    require(p.epsilon > 0.0, "epsilon must be positive");
    const double eps = p.epsilon;
    const double e2 = eps * eps;

    ScalarField u = order_parameter_of(v, eps);
    ScalarField w1 = ScalarField::zeros(v.grid());
    for (std::size_t i = 0; i < w1.size(); ++i) w1[i] = pot.d1(u[i]);
    ScalarField w1_lap = laplacian(w1);

    // (1/eps)(1 - eps^2 Lap) W'(u) + 2 eps q Lap v
    //   + 2 (1-2q) eps^3 Lap^2 v - 2 (1-q) eps^5 Lap^3 v
    ScalarField lap_v = laplacian(v);
    ScalarField lap2_v = laplacian(lap_v);
    ScalarField lap3_v = laplacian(lap2_v);

    ScalarField g = ScalarField::zeros(v.grid());
    const double c1 = 2.0 * eps * p.q;
    const double c2 = 2.0 * (1.0 - 2.0 * p.q) * e2 * eps;
    const double c3 = 2.0 * (1.0 - p.q) * e2 * e2 * eps;
    for (std::size_t i = 0; i < g.size(); ++i) {
        g[i] = (w1[i] - e2 * w1_lap[i]) / eps + c1 * lap_v[i] + c2 * lap2_v[i] - c3 * lap3_v[i];
    }
    return g;
}

double modica_mortola(const ScalarField& u, double epsilon, const Potential& pot) {
    require(epsilon > 0.0, "epsilon must be positive");
    ScalarField w = potential_values(u, pot, 1.0 / epsilon);
    ScalarField grad = gradient_sq(u);
    for (std::size_t i = 0; i < w.size(); ++i) w[i] += epsilon * grad[i];
    return integrate(w);
}

double i_eps(const ScalarField& v, double epsilon, const Potential& pot,
             const std::optional<Box>& region) {
    require(epsilon > 0.0, "epsilon must be positive");
    const double e3 = epsilon * epsilon * epsilon;
    const double e5 = e3 * epsilon * epsilon;
    ScalarField acc = potential_values(v, pot, 1.0 / epsilon);
    ScalarField grad = gradient_sq(v);
    ScalarField hess = hessian_sq(v);
    ScalarField gl = grad_laplacian_sq(v);
    for (std::size_t i = 0; i < acc.size(); ++i) {
        acc[i] += epsilon * grad[i] + e3 * hess[i] + e5 * gl[i];
    }
    return integrate_maybe_region(acc, region);
}

double boundary_flux_score(const ScalarField& v) {
    const Grid& grid = *v.grid();

    double grad_norm_sq = 0.0;  // Int |grad v|^2 via Parseval
    {
        SpectralField spec = transform(v);
        const std::vector<double>& lam_sq = grid.eigenvalue_sq();
        for (std::size_t i = 0; i < spec.size(); ++i) {
            grad_norm_sq += lam_sq[i] * spec[i] * spec[i];
        }
    }
    const double grad_rms = std::sqrt(std::max(grad_norm_sq, 0.0) / grid.volume());

    // One-sided cubic fit of the wall-normal derivative from the four cell
    // centers nearest each neumann wall (exact for cubics).
    static constexpr double w[4] = {-71.0 / 24.0, 47.0 / 8.0, -31.0 / 8.0, 23.0 / 24.0};

    double worst = 0.0;
    for (int a = 0; a < grid.dims(); ++a) {
        if (grid.axis(a).boundary != BoundaryKind::neumann) continue;
        const int n = grid.axis(a).n;
        if (n < 4) continue;
        const double h = grid.spacing(a);

        std::size_t stride = 1;
        for (int b = a + 1; b < grid.dims(); ++b) stride *= static_cast<std::size_t>(grid.axis(b).n);
        std::size_t outer = 1;
        for (int b = 0; b < a; ++b) outer *= static_cast<std::size_t>(grid.axis(b).n);

        for (std::size_t o = 0; o < outer; ++o) {
            for (std::size_t i = 0; i < stride; ++i) {
                const std::size_t base = o * static_cast<std::size_t>(n) * stride + i;
                double lo = 0.0, hi = 0.0;
                for (int k = 0; k < 4; ++k) {
                    lo += w[k] * v[base + static_cast<std::size_t>(k) * stride];
                    hi += w[k] * v[base + static_cast<std::size_t>(n - 1 - k) * stride];
                }
                worst = std::max(worst, std::max(std::abs(lo), std::abs(hi)) / h);
            }
        }
    }
    if (worst == 0.0) return 0.0;
    // floor keeps roundoff on near-constant fields from registering as flux
    double value_rms = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) value_rms += v[i] * v[i];
    value_rms = std::sqrt(value_rms / static_cast<double>(v.size()));
    double min_length = grid.axis(0).length;
    for (int a = 1; a < grid.dims(); ++a) min_length = std::min(min_length, grid.axis(a).length);
    const double floor = 1e-9 * (value_rms + 1e-30) / min_length;
    return worst / (grad_rms + floor + 1e-300);
}

ModeEnergy mode_energy(double q, double epsilon, int n) {
    require(epsilon > 0.0, "epsilon must be positive");
    require(n >= 0, "mode index must be nonnegative");
    ModeEnergy out{};
    out.lambda = 2.0 * std::numbers::pi * n;
    const double t = epsilon * epsilon * out.lambda * out.lambda;
    out.f_qn = -1.0 + (1.0 - q) * t + 1.0 / (1.0 + t);
    out.destabilizing = out.f_qn < 0.0;
    return out;
}

OptimalMode optimal_mode(double q, double epsilon) {
    require(epsilon > 0.0, "epsilon must be positive");
    OptimalMode out{};
    if (q >= 1.0) {
        out.unbounded = true;
        out.f_star = -std::numeric_limits<double>::infinity();
        return out;
    }
    if (q <= 0.0) {
        // interior critical point leaves the admissible range; minimum at lam = 0
        return out;
    }
    out.eps_sq_lambda_star_sq = 1.0 / std::sqrt(1.0 - q) - 1.0;
    out.lambda_star_sq = out.eps_sq_lambda_star_sq / (epsilon * epsilon);
    out.f_star = -2.0 + 2.0 * std::sqrt(1.0 - q) + q;
    return out;
}

LowerBoundReport lower_bound_check(const ScalarField& v, const EnergyParams& p,
                                   const Potential& pot, double q_star_hat,
                                   double c_omega_hat) {
    require(q_star_hat > 0.0, "q* estimate must be positive");
    LowerBoundReport rep{};
    rep.f_eps = f_v(v, p, pot).total;
    rep.i_eps_value = i_eps(v, p.epsilon, pot);
    const double eps3 = p.epsilon * p.epsilon * p.epsilon;
    rep.rhs = p.q * rep.i_eps_value -
              (12.0 * p.q / q_star_hat) * c_omega_hat * eps3 * v.grid()->volume();
    rep.margin = rep.f_eps - rep.rhs;
    rep.holds = rep.margin >= -1e-10 * (std::abs(rep.f_eps) + std::abs(rep.rhs) + 1.0);
    return rep;
}

namespace {

// Shared probe corpus: cosine modes, random band-limited fields at several
// amplitudes, and a sharp-but-smooth tanh slab.
std::vector<ScalarField> probe_corpus(const GridPtr& grid, std::uint64_t seed,
                                      int random_samples) {
    std::vector<ScalarField> fields;
    const int d = grid->dims();
    for (int k : {1, 2, 3, 5}) {
        std::vector<int> harmonics(static_cast<std::size_t>(d), 0);
        harmonics[0] = k;
        fields.push_back(cosine_mode(grid, harmonics));
        if (d > 1) {
            harmonics[static_cast<std::size_t>(d - 1)] = k;
            fields.push_back(cosine_mode(grid, harmonics));
        }
    }
    const int kmax = std::max(2, grid->axis(0).n / 6);
    for (int s = 0; s < random_samples; ++s) {
        const double amp = 0.25 + 1.5 * (s % 4) / 3.0;
        fields.push_back(random_band_limited(grid, kmax, amp, seed + static_cast<std::uint64_t>(s)));
    }
    const double x0 = grid->axis(0).origin + 0.5 * grid->axis(0).length;
    for (double width : {0.05, 0.15}) {
        fields.push_back(ScalarField::from_function(grid, [&](std::span<const double> x) {
            return std::tanh((x[0] - x0) / width);
        }));
    }
    return fields;
}

}  // namespace

QStarEstimate estimate_q_star(GridPtr grid, const Potential& pot, std::uint64_t seed,
                              int random_samples) {
    QStarEstimate est{};
    for (const ScalarField& v : probe_corpus(grid, seed, random_samples)) {
        for (double eps : {0.02, 0.05, 0.1, 0.2}) {
            const double grad = eps * integrate(gradient_sq(v));
            ScalarField dens = ScalarField::zeros(grid);
            ScalarField hess = hessian_sq(v);
            const double e3 = eps * eps * eps;
            for (std::size_t i = 0; i < dens.size(); ++i) {
                dens[i] = pot.value(v[i]) / eps + e3 * hess[i];
            }
            const double denom = integrate(dens);
            if (denom > 1e-14) est.sup_ratio = std::max(est.sup_ratio, grad / denom);
            ++est.samples;
        }
    }
    est.q_star_hat = est.sup_ratio > 0.0 ? 1.0 / est.sup_ratio : 0.0;
    return est;
}

COmegaEstimate estimate_c_omega(GridPtr grid, std::uint64_t seed, int random_samples) {
    COmegaEstimate est{};
    for (const ScalarField& v : probe_corpus(grid, seed, random_samples)) {
        const double hess = integrate(hessian_sq(v));
        ScalarField lap = laplacian(v);
        double lap_sq = 0.0, v_sq = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            lap_sq += lap[i] * lap[i];
            v_sq += v[i] * v[i];
        }
        lap_sq *= grid->cell_volume();
        v_sq *= grid->cell_volume();
        if (v_sq > 1e-14) est.sup_ratio = std::max(est.sup_ratio, (hess - 3.0 * lap_sq) / v_sq);
        ++est.samples;
    }
    est.c_omega_hat = std::max(est.sup_ratio, 0.0) * 1.1 + 1e-12;
    return est;
}

double q_zero_hat(double q_star_hat, const WellConstants& constants) {
    require(q_star_hat > 0.0, "q* estimate must be positive");
    require(constants.valid(), "potential constants must be finite");
    return q_star_hat /
           (2.0 * q_star_hat + 4.0 * constants.K_w + 4.0 * constants.C_w * constants.C_w + 10.0);
}

ScalarField random_band_limited(GridPtr grid, int max_harmonic, double amplitude,
                                std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    const int d = grid->dims();
    std::vector<double> coeffs(grid->size(), 0.0);
    std::vector<int> idx(static_cast<std::size_t>(d), 0);
    double weight_sq = 0.0;
    for (std::size_t flat = 0; flat < coeffs.size(); ++flat) {
        int ksum_sq = 0;
        bool in_band = true;
        for (int a = 0; a < d; ++a) {
            const int k = grid->slot_harmonic(a, idx[static_cast<std::size_t>(a)]);
            if (k > max_harmonic) in_band = false;
            ksum_sq += k * k;
        }
        if (in_band) {
            const double decay = 1.0 / (1.0 + static_cast<double>(ksum_sq));
            coeffs[flat] = normal(rng) * decay;
            weight_sq += decay * decay;
        }
        for (int a = d - 1; a >= 0; --a) {
            auto ua = static_cast<std::size_t>(a);
            if (++idx[ua] < grid->axis(a).n) break;
            idx[ua] = 0;
        }
    }
    // normalize so the field's RMS is ~amplitude/sqrt(2)
    const double scale = amplitude * std::sqrt(grid->volume() / (2.0 * std::max(weight_sq, 1e-300)));
    for (double& c : coeffs) c *= scale;
    return inverse_transform(SpectralField(grid, std::move(coeffs)));
}

}  // namespace raftmin
