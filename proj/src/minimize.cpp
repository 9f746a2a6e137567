#include "raftmin/minimize.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "raftmin/operators.hpp"

namespace raftmin {

namespace {

double field_mean(const ScalarField& u) { return integrate(u) / u.grid()->volume(); }

double l2_norm(const ScalarField& u) {
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * u[i];
    return std::sqrt(s * u.grid()->cell_volume());
}

void subtract_mean(ScalarField& u) {
    const double m = field_mean(u);
    for (std::size_t i = 0; i < u.size(); ++i) u[i] -= m;
}

// Largest dt keeping every implicit denominator 1 + dt L positive.
double stable_dt(const ScalarField& u, const EnergyParams& p, double requested) {
    double l_min = 0.0;
    for (double lam_sq : u.grid()->eigenvalue_sq()) {
        l_min = std::min(l_min, semi_implicit_symbol(lam_sq, p));
    }
    if (l_min >= 0.0) return requested;
    return std::min(requested, 0.9 / -l_min);
}

}  // namespace

const char* to_string(FlowStatus status) {
    switch (status) {
        case FlowStatus::converged: return "converged";
        case FlowStatus::max_steps: return "max_steps";
        case FlowStatus::diverged: return "diverged";
        case FlowStatus::step_underflow: return "step_underflow";
    }
    return "unknown";
}

double semi_implicit_symbol(double lambda_sq, const EnergyParams& p) {
    const double t = p.epsilon * p.epsilon * lambda_sq;
    return 2.0 / p.epsilon * (-1.0 + (1.0 - p.q) * t + 1.0 / (1.0 + t));
}

ScalarField semi_implicit_step(const ScalarField& u, double dt, const EnergyParams& p,
                               const Potential& pot, const std::optional<double>& fixed_mean) {
    if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
    dt = stable_dt(u, p, dt);

    ScalarField explicit_part = ScalarField::zeros(u.grid());
    for (std::size_t i = 0; i < u.size(); ++i) explicit_part[i] = pot.d1(u[i]) / p.epsilon;
    if (fixed_mean) subtract_mean(explicit_part);

    SpectralField u_hat = transform(u);
    SpectralField n_hat = transform(explicit_part);
    const std::vector<double>& lam_sq = u.grid()->eigenvalue_sq();
    for (std::size_t i = 0; i < u_hat.size(); ++i) {
        const double denom = 1.0 + dt * semi_implicit_symbol(lam_sq[i], p);
        u_hat[i] = (u_hat[i] - dt * n_hat[i]) / denom;
    }
    return inverse_transform(u_hat);
}

ScalarField random_initial_field(GridPtr grid, double amplitude, double mean,
                                 std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(-amplitude, amplitude);
    std::vector<double> values(grid->size());
    for (double& v : values) v = uni(rng);
    ScalarField field(std::move(grid), std::move(values));
    subtract_mean(field);
    for (std::size_t i = 0; i < field.size(); ++i) field[i] += mean;
    return field;
}

double dominant_wavenumber(const ScalarField& u) {
    SpectralField spec = transform(u);
    const std::vector<double>& lam_sq = u.grid()->eigenvalue_sq();
    double best = 0.0;
    double best_power = -1.0;
    for (std::size_t i = 0; i < spec.size(); ++i) {
        if (lam_sq[i] <= 0.0) continue;
        const double power = spec[i] * spec[i];
        if (power > best_power) {
            best_power = power;
            best = std::sqrt(lam_sq[i]);
        }
    }
    return best;
}

FlowResult descend(const ScalarField& u0, const EnergyParams& p, const Potential& pot,
                   const FlowConfig& cfg) {
    if (!(cfg.dt > 0.0) || !(cfg.grad_tolerance > 0.0)) {
        throw std::invalid_argument("dt and tolerance must be positive");
    }
    if (cfg.fixed_mean && std::abs(field_mean(u0) - *cfg.fixed_mean) > 1e-12) {
        throw std::invalid_argument("initial field violates the mass constraint");
    }
    const double floor = cfg.divergence_floor.value_or(-1e3 * u0.grid()->volume() / p.epsilon);

    FlowResult res{u0, FlowStatus::max_steps, 0, 0.0, 0.0, {}};
    double energy = f_star(u0, p, pot).total;
    double dt = cfg.dt;
    const double dt_min = cfg.dt * 1e-12;

    auto log_point = [&](int step, double grad_norm) {
        res.trajectory.push_back(TrajectoryPoint{step, energy, grad_norm, field_mean(res.field),
                                                 dominant_wavenumber(res.field)});
    };

    ScalarField grad = f_star_gradient(res.field, p, pot);
    if (cfg.fixed_mean) subtract_mean(grad);
    double grad_norm = l2_norm(grad);
    log_point(0, grad_norm);

    int step = 0;
    while (step < cfg.max_steps) {
        if (grad_norm < cfg.grad_tolerance) {
            res.status = FlowStatus::converged;
            break;
        }
        if (energy < floor) {
            res.status = FlowStatus::diverged;
            break;
        }

        // backtrack until the step does not increase the energy
        bool accepted = false;
        while (dt >= dt_min) {
            ScalarField trial = res.field;
            if (cfg.scheme == FlowScheme::l2_descent) {
                for (std::size_t i = 0; i < trial.size(); ++i) trial[i] -= dt * grad[i];
            } else {
                trial = semi_implicit_step(res.field, dt, p, pot, cfg.fixed_mean);
            }
            const double trial_energy = f_star(trial, p, pot).total;
            if (std::isfinite(trial_energy) &&
                trial_energy <= energy + 1e-12 * (std::abs(energy) + 1.0)) {
                res.field = std::move(trial);
                energy = trial_energy;
                accepted = true;
                dt = std::min(dt * 1.2, cfg.dt * 100.0);
                break;
            }
            dt *= 0.5;
        }
        if (!accepted) {
            res.status = FlowStatus::step_underflow;
            break;
        }

        ++step;
        grad = f_star_gradient(res.field, p, pot);
        if (cfg.fixed_mean) subtract_mean(grad);
        grad_norm = l2_norm(grad);
        if (step % std::max(cfg.log_every, 1) == 0) log_point(step, grad_norm);
    }
    if (step >= cfg.max_steps) res.status = FlowStatus::max_steps;

    res.steps = step;
    res.energy = energy;
    res.grad_norm = grad_norm;
    if (res.trajectory.empty() || res.trajectory.back().step != step) log_point(step, grad_norm);
    return res;
}

}  // namespace raftmin
